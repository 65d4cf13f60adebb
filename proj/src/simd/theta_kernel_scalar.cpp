#include "slab/theta_kernel.hpp"

#include <cmath>

namespace slab {

void theta_accumulate_scalar(const double* log_mag, const double* phase,
                             const double* pref_re, const double* pref_im,
                             std::size_t n, double& acc_re, double& acc_im) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double mag = std::exp(log_mag[i]);
        double c = std::cos(phase[i]);
        double s = std::sin(phase[i]);
        double tr = mag * c;
        double ti = mag * s;
        re += pref_re[i] * tr - pref_im[i] * ti;
        im += pref_re[i] * ti + pref_im[i] * tr;
    }
    acc_re = re;
    acc_im = im;
}

}  // namespace slab
