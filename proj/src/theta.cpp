#include "slab/theta.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slab/theta_kernel.hpp"

namespace slab {

namespace {

constexpr double kPi = std::numbers::pi;

thread_local std::vector<double> tl_log_mag;
thread_local std::vector<double> tl_phase;
thread_local std::vector<double> tl_pref_re;
thread_local std::vector<double> tl_pref_im;

}  // namespace

PeriodMatrix::PeriodMatrix(const Eigen::MatrixXcd& raw) {
    if (raw.rows() != raw.cols() || raw.rows() < 1)
        throw AsymmetricInput("period matrix must be square and nonempty");
    double asym = (raw - raw.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-9) throw AsymmetricInput("period matrix asymmetry " + std::to_string(asym));
    tau_ = 0.5 * (raw + raw.transpose());
    im_ = tau_.imag();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(im_);
    lambda_min_ = es.eigenvalues().minCoeff();
    if (!(lambda_min_ > 0.0))
        throw NotPositiveDefinite("Im tau min eigenvalue " + std::to_string(lambda_min_));
    im_inv_ = im_.inverse();
}

PeriodMatrix validate_period_matrix(const Eigen::MatrixXcd& raw) { return PeriodMatrix(raw); }

HalfCharacteristic::HalfCharacteristic(Eigen::VectorXd e, Eigen::VectorXd d)
    : eps(std::move(e)), delta(std::move(d)) {
    if (eps.size() != delta.size()) throw lab_error("characteristic size mismatch");
    for (int i = 0; i < eps.size(); ++i) {
        bool ok_e = eps(i) == 0.0 || eps(i) == 0.5;
        bool ok_d = delta(i) == 0.0 || delta(i) == 0.5;
        if (!ok_e || !ok_d) throw lab_error("characteristic entries must be 0 or 1/2");
    }
    double p = 4.0 * eps.dot(delta);
    parity_ = static_cast<int>(std::llround(p)) % 2;
}

HalfCharacteristic HalfCharacteristic::second_order(int genus, int counter) {
    Eigen::VectorXd e(genus), d = Eigen::VectorXd::Zero(genus);
    for (int j = 0; j < genus; ++j) e(j) = ((counter >> j) & 1) ? 0.5 : 0.0;
    return HalfCharacteristic(e, d);
}

DirectionalJet::DirectionalJet(std::initializer_list<Entry> list) : entries(list) {
    if (total_order() > 6) throw lab_error("jet total order exceeds 6");
}

int DirectionalJet::total_order() const {
    int t = 0;
    for (const auto& e : entries) t += e.order;
    return t;
}

cdouble FactoredTheta::value() const {
    return std::exp(cdouble(0.0, kPi) * exponent) * sum;
}

double FactoredTheta::abs_value_log() const {
    return -kPi * exponent.imag() + std::log(std::max(std::abs(sum), 1e-300));
}

namespace {

// Certified tail bound over the region ||k||_inf > R after recentring:
// shell j holds (2j+1)^g - (2j-1)^g <= 2g(2j+1)^{g-1} points, each of
// magnitude <= exp(-pi lambda_min (j - sqrt(g)/2)^2) and
// (j - sqrt(g)/2)^2 >= (R)^2 for j >= R+1, g <= 4.  Geometric comparison.
double log_tail_bound(double lambda_min, int genus, int radius) {
    double g = genus;
    double rho = std::pow((2.0 * radius + 5.0) / (2.0 * radius + 3.0), g - 1.0) *
                 std::exp(-kPi * lambda_min * (2.0 * radius + 3.0 - std::sqrt(g)));
    if (rho > 0.5) rho = 0.5;  // caller bumps R until the comparison is sharp
    double logA = std::log(2.0 * g) + (g - 1.0) * std::log(2.0 * radius + 3.0) -
                  std::log1p(-rho);
    return logA - kPi * lambda_min * static_cast<double>(radius) * radius;
}

Eigen::VectorXd round_vec(const Eigen::VectorXd& v) {
    Eigen::VectorXd r(v.size());
    for (int i = 0; i < v.size(); ++i) r(i) = std::nearbyint(v(i));
    return r;
}

struct SumSetup {
    Eigen::VectorXd center;      // n0 + eps
    cdouble exponent;            // center^t tau center + 2 center^t z_eff
    Eigen::VectorXcd w;          // tau*center + z_eff
    double pref_log_mag;         // log |exp(i pi exponent)|
};

SumSetup setup_sum(const PeriodMatrix& tau, const Eigen::VectorXcd& z_eff,
                   const Eigen::VectorXd& eps) {
    SumSetup s;
    Eigen::VectorXd saddle = -(tau.im_inverse() * z_eff.imag());
    Eigen::VectorXd n0 = round_vec(saddle - eps);
    s.center = n0 + eps;
    Eigen::VectorXcd c = s.center.cast<cdouble>();
    // Eigen's dot() conjugates its left argument, so spell the bilinear terms out.
    s.exponent = (c.transpose() * tau.tau() * c).value();
    for (int i = 0; i < c.size(); ++i) s.exponent += 2.0 * c(i) * z_eff(i);
    s.w = tau.tau() * c + z_eff;
    s.pref_log_mag = -kPi * s.exponent.imag();
    return s;
}

int base_radius(const PeriodMatrix& tau, double pref_log_mag, double tol, int cap) {
    double log_tol = std::log(tol);
    for (int r = 1; r <= cap; ++r) {
        if (pref_log_mag + log_tail_bound(tau.lambda_min(), tau.genus(), r) <= log_tol)
            return r;
    }
    throw RadiusCapExceeded("truncation radius exceeds cap " + std::to_string(cap));
}

// Recursive box enumeration with incremental quadratic form; the innermost
// dimension fills the batch arrays consumed by the SIMD kernel.
struct Enumerator {
    const Eigen::MatrixXcd& tau;
    const SumSetup& setup;
    const DirectionalJet& jet;
    int radius;
    int genus;
    double prune_im_q;  // skip terms with Im Q above this
    std::vector<cdouble> jet_dot_base;  // center . d_j per jet entry

    void run() {
        tl_log_mag.clear();
        tl_phase.clear();
        tl_pref_re.clear();
        tl_pref_im.clear();
        std::vector<double> k(genus, 0.0);
        std::vector<cdouble> dots(jet.entries.size(), cdouble(0.0));
        descend(0, cdouble(0.0), k, dots);
    }

    void descend(int dim, cdouble q_part, std::vector<double>& k, std::vector<cdouble>& dots) {
        if (dim == genus - 1) {
            inner_loop(q_part, k, dots);
            return;
        }
        for (int kk = -radius; kk <= radius; ++kk) {
            k[dim] = kk;
            cdouble lin = setup.w(dim);
            for (int i = 0; i < dim; ++i) lin += tau(i, dim) * k[i];
            cdouble q_new = q_part + tau(dim, dim) * static_cast<double>(kk) * static_cast<double>(kk) +
                            2.0 * static_cast<double>(kk) * lin;
            auto dots_new = dots;
            for (std::size_t j = 0; j < jet.entries.size(); ++j)
                dots_new[j] = dots[j] + (setup.center(dim) + kk) * jet.entries[j].direction(dim);
            descend(dim + 1, q_new, k, dots_new);
        }
    }

    void inner_loop(cdouble q_part, std::vector<double>& k, std::vector<cdouble>& dots) {
        int dim = genus - 1;
        cdouble lin = setup.w(dim);
        for (int i = 0; i < dim; ++i) lin += tau(i, dim) * k[i];
        cdouble tgg = tau(dim, dim);
        for (int kk = -radius; kk <= radius; ++kk) {
            cdouble q = q_part + tgg * static_cast<double>(kk) * static_cast<double>(kk) +
                        2.0 * static_cast<double>(kk) * lin;
            if (q.imag() > prune_im_q) continue;
            cdouble pref(1.0, 0.0);
            for (std::size_t j = 0; j < jet.entries.size(); ++j) {
                cdouble dot = dots[j] + (setup.center(dim) + kk) * jet.entries[j].direction(dim);
                cdouble base = cdouble(0.0, 2.0 * kPi) * dot;
                for (int o = 0; o < jet.entries[j].order; ++o) pref *= base;
            }
            tl_log_mag.push_back(-kPi * q.imag());
            tl_phase.push_back(kPi * q.real());
            tl_pref_re.push_back(pref.real());
            tl_pref_im.push_back(pref.imag());
        }
    }
};

}  // namespace

int truncation_radius(const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                      const TruncationPolicy& policy) {
    if (z.size() != tau.genus()) throw lab_error("dimension mismatch");
    SumSetup s = setup_sum(tau, z, Eigen::VectorXd::Zero(tau.genus()));
    return base_radius(tau, s.pref_log_mag, policy.target_abs_error, policy.max_radius);
}

double truncation_tail_bound(const PeriodMatrix& tau, int radius) {
    return std::exp(log_tail_bound(tau.lambda_min(), tau.genus(), radius));
}

FactoredTheta theta_factored(const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                             const DirectionalJet& jet, const TruncationPolicy& policy,
                             const HalfCharacteristic* chi) {
    int g = tau.genus();
    if (z.size() != g) throw lab_error("dimension mismatch");
    Eigen::VectorXd eps = Eigen::VectorXd::Zero(g);
    Eigen::VectorXcd z_eff = z;
    if (chi != nullptr) {
        if (chi->eps.size() != g) throw lab_error("characteristic genus mismatch");
        eps = chi->eps;
        z_eff += chi->delta.cast<cdouble>();
    }
    SumSetup s = setup_sum(tau, z_eff, eps);

    int radius = base_radius(tau, s.pref_log_mag, policy.target_abs_error, policy.max_radius);
    int order = jet.total_order();
    if (order > 0) radius += order / 2 + (order % 2 != 0 ? 1 : 0) + 1;
    if (radius > policy.max_radius)
        throw RadiusCapExceeded("derivative-enlarged radius exceeds cap");

    double lam = tau.lambda_min();
    double prune_slack = g * std::log(2.0 * radius + 1.0) + 5.0;
    Enumerator en{tau.tau(), s, jet, radius, g,
                  lam * radius * radius + prune_slack / kPi, {}};
    en.run();

    FactoredTheta out;
    out.exponent = s.exponent;
    out.radius = radius;
    double re = 0.0, im = 0.0;
    theta_kernel()(tl_log_mag.data(), tl_phase.data(), tl_pref_re.data(), tl_pref_im.data(),
                   tl_log_mag.size(), re, im);
    out.sum = cdouble(re, im);

    double log_bound = log_tail_bound(lam, g, radius);
    double jet_factor = 0.0;
    for (const auto& e : jet.entries)
        jet_factor += e.order * std::log(2.0 * kPi * e.direction.norm() *
                                         (s.center.norm() + radius + 1.0) + 1e-30);
    // pruning allowance e^-5 and a factor 2 guard on the polynomial growth
    out.tail_bound = std::exp(log_bound + jet_factor) * (1.0 + std::exp(-5.0)) *
                     (order > 0 ? 2.0 : 1.0);
    return out;
}

cdouble theta_eval(const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                   const DirectionalJet& jet, const TruncationPolicy& policy) {
    return theta_factored(tau, z, jet, policy).value();
}

cdouble theta_char(const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                   const HalfCharacteristic& chi, const DirectionalJet& jet,
                   const TruncationPolicy& policy) {
    return theta_factored(tau, z, jet, policy, &chi).value();
}

cdouble theta_second_order(const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                           const Eigen::VectorXd& eps, const DirectionalJet& jet,
                           const TruncationPolicy& policy) {
    PeriodMatrix doubled(2.0 * tau.tau());
    HalfCharacteristic chi(eps, Eigen::VectorXd::Zero(tau.genus()));
    double chain = std::pow(2.0, jet.total_order());
    return chain * theta_char(doubled, 2.0 * z, chi, jet, policy);
}

Eigen::VectorXcd kummer_vector(const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                               const DirectionalJet& jet, const TruncationPolicy& policy) {
    int g = tau.genus();
    PeriodMatrix doubled(2.0 * tau.tau());
    double chain = std::pow(2.0, jet.total_order());
    Eigen::VectorXcd out(1 << g);
    for (int c = 0; c < (1 << g); ++c) {
        HalfCharacteristic chi = HalfCharacteristic::second_order(g, c);
        out(c) = chain * theta_char(doubled, 2.0 * z, chi, jet, policy);
    }
    return out;
}

DivisorPoint theta_divisor_point(const PeriodMatrix& tau, const Eigen::VectorXcd& base,
                                 const Eigen::VectorXcd& direction,
                                 const TruncationPolicy& policy) {
    if (direction.norm() == 0.0) throw lab_error("zero search direction");
    DirectionalJet d1{{direction, 1}};
    double scale = 0.0;
    for (int i = 0; i < 32; ++i) {
        double t = i / 32.0;
        scale = std::max(scale, std::abs(theta_eval(tau, base + t * direction, {}, policy)));
    }
    if (scale == 0.0) scale = 1.0;
    for (int start = 0; start < 16; ++start) {
        cdouble t(start / 16.0, 0.0);
        for (int step = 0; step < 64; ++step) {
            Eigen::VectorXcd zz = base + t * direction;
            cdouble f = theta_eval(tau, zz, {}, policy);
            if (std::abs(f) < 1e-10 * scale) {
                cdouble df = theta_eval(tau, zz, d1, policy);
                return DivisorPoint{zz, t, std::abs(f), std::abs(df), scale};
            }
            cdouble df = theta_eval(tau, zz, d1, policy);
            if (std::abs(df) < 1e-14 * scale) break;
            t -= f / df;
            if (std::abs(t) > 64.0) break;
        }
    }
    throw NoConvergence("theta divisor search failed on the given line");
}

double two_torsion_distance(const PeriodMatrix& tau, const Eigen::VectorXcd& z) {
    Eigen::VectorXcd w = 2.0 * z;
    Eigen::VectorXd b = tau.im_inverse() * w.imag();
    Eigen::VectorXd a = w.real() - tau.tau().real() * b;
    double d2 = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        double da = a(i) - std::nearbyint(a(i));
        double db = b(i) - std::nearbyint(b(i));
        d2 += da * da + db * db;
    }
    return std::sqrt(d2);
}

}  // namespace slab
