#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace slab {

// SplitMix64. Hand-rolled so that sample streams are identical across
// platforms and standard libraries; std::uniform_real_distribution is not.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1), 53 bits
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  private:
    std::uint64_t state_;
};

// Random tau draw: Re symmetric with entries uniform in [-re_scale, re_scale]
// (upper triangle row-major), Im = aa_scale * A^T A + ridge * I with A drawn
// row-major uniform in [-1,1].  Im is positive definite by construction.
Eigen::MatrixXcd random_tau(SplitMix64& rng, int genus, double re_scale = 0.5,
                            double aa_scale = 1.0, double ridge = 0.5);

// z = alpha + tau * beta with alpha, beta uniform in [0,1)^g (alpha first).
Eigen::VectorXcd random_cell_point(SplitMix64& rng, const Eigen::MatrixXcd& tau);

Eigen::VectorXcd random_direction(SplitMix64& rng, int genus, double scale = 1.0);

}  // namespace slab
