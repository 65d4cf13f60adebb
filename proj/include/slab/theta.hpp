#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "slab/errors.hpp"

namespace slab {

using cdouble = std::complex<double>;

// Symmetric complex g x g matrix with positive definite imaginary part.
// Stored symmetrized; construction validates.
class PeriodMatrix {
  public:
    // Throws AsymmetricInput when max |t_ij - t_ji| > 1e-9, NotPositiveDefinite
    // when the smallest eigenvalue of Im tau is <= 0.
    explicit PeriodMatrix(const Eigen::MatrixXcd& raw);

    int genus() const { return static_cast<int>(tau_.rows()); }
    const Eigen::MatrixXcd& tau() const { return tau_; }
    const Eigen::MatrixXd& im() const { return im_; }
    const Eigen::MatrixXd& im_inverse() const { return im_inv_; }
    double lambda_min() const { return lambda_min_; }

  private:
    Eigen::MatrixXcd tau_;
    Eigen::MatrixXd im_;
    Eigen::MatrixXd im_inv_;
    double lambda_min_ = 0.0;
};

PeriodMatrix validate_period_matrix(const Eigen::MatrixXcd& raw);

// Half-integer characteristic (eps, delta), entries in {0, 1/2}.
struct HalfCharacteristic {
    Eigen::VectorXd eps;
    Eigen::VectorXd delta;

    HalfCharacteristic(Eigen::VectorXd e, Eigen::VectorXd d);

    // 4 (eps . delta) mod 2; 1 means odd.
    int parity() const { return parity_; }
    bool odd() const { return parity_ == 1; }

    // eps from the binary counter c (bit j -> eps_j), delta = 0.
    static HalfCharacteristic second_order(int genus, int counter);

  private:
    int parity_ = 0;
};

// Directional derivative data: apply prod_j (d/dt_j)^{order_j} of
// theta(z + sum t_j dir_j) at t = 0.  Total order <= 6.
struct DirectionalJet {
    struct Entry {
        Eigen::VectorXcd direction;
        int order;
    };
    std::vector<Entry> entries;

    DirectionalJet() = default;
    DirectionalJet(std::initializer_list<Entry> list);
    int total_order() const;
};

struct TruncationPolicy {
    double target_abs_error = 1e-12;
    int max_radius = 60;
};

// theta = exp(i pi exponent) * sum, |sum error| <= tail_bound.
// Splitting the saddle prefactor off keeps the summed terms O(1) even when
// Im z is several lattice cells out, which the quasi-periodicity check needs.
struct FactoredTheta {
    cdouble exponent;
    cdouble sum;
    double tail_bound = 0.0;
    int radius = 0;

    cdouble value() const;
    double abs_value_log() const;  // log |theta| without overflow
};

// Smallest integer R >= 1 whose certified tail bound (Gaussian comparison at
// the recentred saddle) is below policy.target_abs_error, absolute in theta.
int truncation_radius(const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                      const TruncationPolicy& policy);

// The bound itself, for the certificate tests.
double truncation_tail_bound(const PeriodMatrix& tau, int radius);

FactoredTheta theta_factored(const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                             const DirectionalJet& jet = {},
                             const TruncationPolicy& policy = {},
                             const HalfCharacteristic* chi = nullptr);

cdouble theta_eval(const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                   const DirectionalJet& jet = {}, const TruncationPolicy& policy = {});

cdouble theta_char(const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                   const HalfCharacteristic& chi, const DirectionalJet& jet = {},
                   const TruncationPolicy& policy = {});

// Theta[eps](tau, z) = theta[eps;0](2 tau, 2 z); jet derivatives are taken in
// the z of Theta, so each derivative order picks up a factor 2 internally.
cdouble theta_second_order(const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                           const Eigen::VectorXd& eps, const DirectionalJet& jet = {},
                           const TruncationPolicy& policy = {});

// All 2^g second-order thetas at z, eps enumerated by binary counting with
// eps_1 the least significant bit.  Consumers rely on this order.
Eigen::VectorXcd kummer_vector(const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                               const DirectionalJet& jet = {},
                               const TruncationPolicy& policy = {});

struct DivisorPoint {
    Eigen::VectorXcd z0;
    cdouble line_parameter;        // z0 = base + t * direction
    double theta_abs;              // |theta(z0)|
    double derivative_abs;         // |d_direction theta(z0)|, simple-zero certificate
    double scale;                  // max |theta| sampled on the search segment
};

// Newton iteration restricted to the line base + t*direction; 16 equispaced
// starts on the unit segment, 64 steps each, first convergent root wins.
DivisorPoint theta_divisor_point(const PeriodMatrix& tau, const Eigen::VectorXcd& base,
                                 const Eigen::VectorXcd& direction,
                                 const TruncationPolicy& policy = {});

// Distance from z to the nearest two-torsion point, measured in lattice
// coordinates of 2z.
double two_torsion_distance(const PeriodMatrix& tau, const Eigen::VectorXcd& z);

}  // namespace slab
