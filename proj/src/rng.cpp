#include "slab/rng.hpp"

namespace slab {

Eigen::MatrixXcd random_tau(SplitMix64& rng, int genus, double re_scale,
                            double aa_scale, double ridge) {
    Eigen::MatrixXd re(genus, genus);
    for (int i = 0; i < genus; ++i) {
        for (int j = i; j < genus; ++j) {
            double v = rng.uniform(-re_scale, re_scale);
            re(i, j) = v;
            re(j, i) = v;
        }
    }
    Eigen::MatrixXd a(genus, genus);
    for (int i = 0; i < genus; ++i)
        for (int j = 0; j < genus; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
    Eigen::MatrixXd im = aa_scale * (a.transpose() * a);
    im += ridge * Eigen::MatrixXd::Identity(genus, genus);
    return re.cast<std::complex<double>>() +
           std::complex<double>(0.0, 1.0) * im.cast<std::complex<double>>();
}

Eigen::VectorXcd random_cell_point(SplitMix64& rng, const Eigen::MatrixXcd& tau) {
    int g = static_cast<int>(tau.rows());
    Eigen::VectorXd alpha(g), beta(g);
    for (int i = 0; i < g; ++i) alpha(i) = rng.u01();
    for (int i = 0; i < g; ++i) beta(i) = rng.u01();
    return alpha.cast<std::complex<double>>() + tau * beta.cast<std::complex<double>>();
}

Eigen::VectorXcd random_direction(SplitMix64& rng, int genus, double scale) {
    Eigen::VectorXcd d(genus);
    for (int i = 0; i < genus; ++i) {
        double re = rng.uniform(-scale, scale);
        double im = rng.uniform(-scale, scale);
        d(i) = std::complex<double>(re, im);
    }
    return d;
}

}  // namespace slab
