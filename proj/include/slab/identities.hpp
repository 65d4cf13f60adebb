#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "slab/theta.hpp"

namespace slab {

// One certified check: named identity, echoed case data, residual against its
// normalizer, and the verdict.  residual is |lhs - rhs| (or a minor) divided
// by the largest participating term.
struct ResidualReport {
    std::string check;
    std::string case_id;
    double residual = 0.0;
    double normalizer = 1.0;
    double tolerance = 0.0;
    bool pass = false;

    static ResidualReport make(std::string check, std::string case_id, double residual,
                               double normalizer, double tolerance);
};

struct SecancyQuery {
    enum class Mode { full, tangent, flex };
    Mode mode = Mode::full;
    // full: the three half-combination arguments, already combined.
    // tangent: points[0] = (q-r)/2, points[1] = (2p-r-q)/2.
    // flex: points[0] = q/2.
    std::vector<Eigen::VectorXcd> points;
    Eigen::VectorXcd U;
    Eigen::VectorXcd V;
};

struct KpDirections {
    Eigen::VectorXcd U;
    Eigen::VectorXcd V;
    Eigen::VectorXcd W;
    std::optional<cdouble> c;
};

ResidualReport addition_residual(const PeriodMatrix& tau, const Eigen::VectorXcd& x,
                                 const Eigen::VectorXcd& y, double tolerance = 1e-9);

// Residual |theta(z + m1 + tau m2) - exp(i pi (-2 m2.z - m2.tau.m2)) theta(z)|
// over max(|theta(z)|, 1), computed in factored form so the huge common
// exponential cancels analytically instead of numerically.
ResidualReport quasiperiodicity_residual(const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                                         const Eigen::VectorXd& m1, const Eigen::VectorXd& m2,
                                         double tolerance = 1e-9);

struct SchottkyResult {
    cdouble value;          // 2^4 sum theta^16 - (sum theta^8)^2
    double normalizer;      // |sum theta^8|^2
    ResidualReport report;  // residual = |value| / normalizer
};

// Genus four only; odd characteristics contribute zero and are skipped.
SchottkyResult schottky_igusa(const PeriodMatrix& tau, double tolerance = 1e-8);

ResidualReport secancy_residual(const PeriodMatrix& tau, const SecancyQuery& query,
                                double tolerance = 1e-6);

struct KpFitResult {
    cdouble c;
    ResidualReport report;
};

enum class KpVariant { kummer, second_order };

// kummer:       (dU^4 - dU dW + 3/4 dV^2 + c) Kum(0) = 0
// second_order: (dU^4 - 4 dU dW + 3 dV^2 + c) Theta[eps](0) = 0 for all eps
// When dirs.c is absent the single constant is fitted by least squares over
// the 2^g components.
KpFitResult kummer_kp_residual(const PeriodMatrix& tau, const KpDirections& dirs,
                               KpVariant variant, double tolerance = 1e-8);

ResidualReport hirota_residual(const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                               const KpDirections& dirs, double tolerance = 1e-8);

struct KpParameters {
    Eigen::VectorXcd V;
    Eigen::VectorXcd W;
    cdouble c;
    double residual = 0.0;   // held-out hirota residual
    bool pass = false;
};

// Multistart least squares over (V, W, c), U fixed: (W, c) enter linearly and
// are solved by normal equations per iterate, V by Gauss-Newton.  8 seeded
// starts; held-out residual evaluated on fresh samples.
KpParameters fit_kp_parameters(const PeriodMatrix& tau, const Eigen::VectorXcd& U,
                               const std::vector<Eigen::VectorXcd>& z_samples,
                               const std::vector<Eigen::VectorXcd>& held_out,
                               std::uint64_t seed = 1234, double threshold = 1e-6,
                               std::optional<Eigen::VectorXcd> v_hint = std::nullopt);

struct WeilResult {
    cdouble A;
    cdouble B;
    ResidualReport report;
};

// A th(z+p+s-r-q) th(z) + B th(z+s-r) th(z+p-q) = th(z+p-r) th(z+s-q); the pair
// (A, B) is solved on two samples and the misfit measured on the rest.
WeilResult weil_residual(const PeriodMatrix& tau, const Eigen::VectorXcd& p,
                         const Eigen::VectorXcd& q, const Eigen::VectorXcd& r,
                         const Eigen::VectorXcd& s,
                         const std::vector<Eigen::VectorXcd>& z_samples,
                         double tolerance = 1e-7);

// Quartic divisor identity with D1 = dU, D2 = dV at a point z0 on the theta
// divisor:
//   -D1^2th (D2th)^2 + 2 D1th D2th D1D2th - (D1th)^2 D2^2th
//     = -(D1th)^2 D1^4th + 2 D1th D1^2th D1^3th - (D1^2th)^3.
ResidualReport theta_surface_residual(const PeriodMatrix& tau, const Eigen::VectorXcd& U,
                                      const Eigen::VectorXcd& V, const Eigen::VectorXcd& z0,
                                      double tolerance = 1e-8);

// w = ((D1th)^2 D1^4th - 2 D1th D1^2th D1^3th + (D1^2th)^3) / (2 (D1th)^3),
// the linear Laurent coefficient of 2 d^2/dx^2 ln theta at a divisor point.
cdouble divisor_pole_linear_coefficient(const PeriodMatrix& tau, const Eigen::VectorXcd& z0,
                                        const Eigen::VectorXcd& U);

struct EllipticFunction {
    std::function<cdouble(cdouble)> f;
    ResidualReport periodicity;
};

// f(z) = prod theta[1/2;1/2](tau, x_i - z)^{m_i} on a genus-1 curve; the
// report measures |f(z+1)/f(z) - 1| and |f(z+tau)/f(z) - 1| over samples.
EllipticFunction elliptic_function_from_divisor(
    const PeriodMatrix& tau, const std::vector<std::pair<cdouble, int>>& divisor,
    double tolerance = 1e-9, std::uint64_t seed = 5);

}  // namespace slab
