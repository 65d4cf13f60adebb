#include "slab/identities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slab/rng.hpp"

namespace slab {

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(std::initializer_list<cdouble> terms) {
    double m = 0.0;
    for (cdouble t : terms) m = std::max(m, std::abs(t));
    return m;
}

}  // namespace

ResidualReport ResidualReport::make(std::string check, std::string case_id, double residual,
                                    double normalizer, double tolerance) {
    ResidualReport r;
    r.check = std::move(check);
    r.case_id = std::move(case_id);
    r.residual = residual;
    r.normalizer = normalizer;
    r.tolerance = tolerance;
    r.pass = residual < tolerance;
    return r;
}

ResidualReport addition_residual(const PeriodMatrix& tau, const Eigen::VectorXcd& x,
                                 const Eigen::VectorXcd& y, double tolerance) {
    cdouble lhs = theta_eval(tau, x + y) * theta_eval(tau, x - y);
    Eigen::VectorXcd kx = kummer_vector(tau, x);
    Eigen::VectorXcd ky = kummer_vector(tau, y);
    cdouble rhs = 0.0;
    double norm = std::abs(lhs);
    for (int i = 0; i < kx.size(); ++i) {
        cdouble t = kx(i) * ky(i);
        rhs += t;
        norm = std::max(norm, std::abs(t));
    }
    if (norm == 0.0) norm = 1.0;
    return ResidualReport::make("addition", "", std::abs(lhs - rhs) / norm, norm, tolerance);
}

ResidualReport quasiperiodicity_residual(const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                                         const Eigen::VectorXd& m1, const Eigen::VectorXd& m2,
                                         double tolerance) {
    Eigen::VectorXcd shift = m1.cast<cdouble>() + tau.tau() * m2.cast<cdouble>();
    FactoredTheta lhs = theta_factored(tau, z + shift);
    FactoredTheta rhs = theta_factored(tau, z);
    cdouble factor_exp = 0.0;
    for (int i = 0; i < z.size(); ++i) factor_exp += -2.0 * m2(i) * z(i);
    factor_exp -= (m2.transpose() * tau.tau().real() * m2).value();
    factor_exp -= cdouble(0, 1) * (m2.transpose() * tau.im() * m2).value();
    cdouble delta = lhs.exponent - factor_exp - rhs.exponent;
    cdouble phase = std::exp(cdouble(0, kPi) * delta);
    double mag = std::exp(-kPi * rhs.exponent.imag());
    double resid = std::abs(phase * lhs.sum - rhs.sum) * mag;
    double norm = std::max(mag * std::abs(rhs.sum), 1.0);
    return ResidualReport::make("quasiperiodicity", "", resid / norm, norm, tolerance);
}

SchottkyResult schottky_igusa(const PeriodMatrix& tau, double tolerance) {
    if (tau.genus() != 4) throw WrongGenus("schottky_igusa needs genus 4");
    int g = 4;
    cdouble s16 = 0.0, s8 = 0.0;
    TruncationPolicy pol{1e-13, 80};
    for (int ce = 0; ce < (1 << g); ++ce) {
        for (int cd = 0; cd < (1 << g); ++cd) {
            Eigen::VectorXd e(g), d(g);
            for (int j = 0; j < g; ++j) {
                e(j) = ((ce >> j) & 1) ? 0.5 : 0.0;
                d(j) = ((cd >> j) & 1) ? 0.5 : 0.0;
            }
            HalfCharacteristic chi(e, d);
            if (chi.odd()) continue;  // identically zero constants
            cdouble v = theta_char(tau, Eigen::VectorXcd::Zero(g), chi, {}, pol);
            cdouble v2 = v * v;
            cdouble v4 = v2 * v2;
            cdouble v8 = v4 * v4;
            s8 += v8;
            s16 += v8 * v8;
        }
    }
    SchottkyResult out;
    out.value = 16.0 * s16 - s8 * s8;
    out.normalizer = std::abs(s8 * s8);
    out.report = ResidualReport::make("schottky-igusa", "", std::abs(out.value) / out.normalizer,
                                      out.normalizer, tolerance);
    return out;
}

namespace {

double max_minor_over_row_norms(const std::vector<Eigen::VectorXcd>& rows) {
    int cols = static_cast<int>(rows[0].size());
    Eigen::MatrixXcd m(3, cols);
    for (int i = 0; i < 3; ++i) m.row(i) = rows[static_cast<std::size_t>(i)].transpose();
    double best = 0.0;
    for (int a = 0; a < cols; ++a)
        for (int b = a + 1; b < cols; ++b)
            for (int c = b + 1; c < cols; ++c) {
                Eigen::Matrix3cd sub;
                sub.col(0) = m.col(a);
                sub.col(1) = m.col(b);
                sub.col(2) = m.col(c);
                best = std::max(best, std::abs(sub.determinant()));
            }
    double denom = rows[0].norm() * rows[1].norm() * rows[2].norm();
    if (denom == 0.0) denom = 1.0;
    return best / denom;
}

double lattice_distance(const PeriodMatrix& tau, const Eigen::VectorXcd& z) {
    Eigen::VectorXd b = tau.im_inverse() * z.imag();
    Eigen::VectorXd a = z.real() - tau.tau().real() * b;
    double d2 = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        double da = a(i) - std::nearbyint(a(i));
        double db = b(i) - std::nearbyint(b(i));
        d2 += da * da + db * db;
    }
    return std::sqrt(d2);
}

}  // namespace

ResidualReport secancy_residual(const PeriodMatrix& tau, const SecancyQuery& query,
                                double tolerance) {
    std::vector<Eigen::VectorXcd> rows;
    switch (query.mode) {
        case SecancyQuery::Mode::full: {
            if (query.points.size() != 3) throw DegenerateQuery("full mode needs three points");
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = i + 1; j < 3; ++j)
                    if (lattice_distance(tau, query.points[i] - query.points[j]) < 1e-6)
                        throw DegenerateQuery("coincident points mod lattice");
            for (const auto& p : query.points) {
                if (two_torsion_distance(tau, p) < 1e-6)
                    throw DegenerateQuery("point too close to two-torsion");
                rows.push_back(kummer_vector(tau, p));
            }
            break;
        }
        case SecancyQuery::Mode::tangent: {
            if (query.points.size() != 2) throw DegenerateQuery("tangent mode needs two points");
            if (query.U.norm() == 0.0) throw DegenerateQuery("U = 0");
            rows.push_back(kummer_vector(tau, query.points[0]));
            rows.push_back(kummer_vector(tau, query.points[0], DirectionalJet{{query.U, 1}}));
            rows.push_back(kummer_vector(tau, query.points[1]));
            break;
        }
        case SecancyQuery::Mode::flex: {
            if (query.points.size() != 1) throw DegenerateQuery("flex mode needs one point");
            if (query.U.norm() == 0.0) throw DegenerateQuery("U = 0");
            const Eigen::VectorXcd& half = query.points[0];
            rows.push_back(kummer_vector(tau, half));
            rows.push_back(kummer_vector(tau, half, DirectionalJet{{query.U, 1}}));
            Eigen::VectorXcd r2 = kummer_vector(tau, half, DirectionalJet{{query.U, 2}}) +
                                  kummer_vector(tau, half, DirectionalJet{{query.V, 1}});
            rows.push_back(r2);
            break;
        }
    }
    double resid = max_minor_over_row_norms(rows);
    return ResidualReport::make("secancy", "", resid, 1.0, tolerance);
}

namespace {

// Cached theta data at one point for the KP fits: plain value, dU powers,
// coordinate gradient, gradient of dU theta, and the coordinate Hessian.
struct HirotaCache {
    cdouble t0;
    cdouble u1, u2, u3, u4;
    Eigen::VectorXcd grad;
    Eigen::VectorXcd grad_u;
    Eigen::MatrixXcd hess;
};

HirotaCache hirota_cache(const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                         const Eigen::VectorXcd& U) {
    int g = tau.genus();
    HirotaCache c;
    c.t0 = theta_eval(tau, z);
    c.u1 = theta_eval(tau, z, DirectionalJet{{U, 1}});
    c.u2 = theta_eval(tau, z, DirectionalJet{{U, 2}});
    c.u3 = theta_eval(tau, z, DirectionalJet{{U, 3}});
    c.u4 = theta_eval(tau, z, DirectionalJet{{U, 4}});
    c.grad.resize(g);
    c.grad_u.resize(g);
    c.hess.resize(g, g);
    for (int j = 0; j < g; ++j) {
        Eigen::VectorXcd ej = Eigen::VectorXcd::Zero(g);
        ej(j) = 1.0;
        c.grad(j) = theta_eval(tau, z, DirectionalJet{{ej, 1}});
        c.grad_u(j) = theta_eval(tau, z, DirectionalJet{{U, 1}, {ej, 1}});
        for (int i = 0; i <= j; ++i) {
            Eigen::VectorXcd ei = Eigen::VectorXcd::Zero(g);
            ei(i) = 1.0;
            cdouble v = (i == j) ? theta_eval(tau, z, DirectionalJet{{ej, 2}})
                                 : theta_eval(tau, z, DirectionalJet{{ei, 1}, {ej, 1}});
            c.hess(i, j) = v;
            c.hess(j, i) = v;
        }
    }
    return c;
}

// Hirota combination at a cached point; returns the signed sum and the
// magnitude of the largest term.
std::pair<cdouble, double> hirota_terms(const HirotaCache& c, const Eigen::VectorXcd& V,
                                        const Eigen::VectorXcd& W, cdouble cc) {
    cdouble ty = V.transpose() * c.grad;
    cdouble tyy = (V.transpose() * c.hess * V).value();
    cdouble tt = W.transpose() * c.grad;
    cdouble txt = W.transpose() * c.grad_u;
    cdouble terms[8] = {c.u4 * c.t0,      -4.0 * c.u3 * c.u1, 3.0 * c.u2 * c.u2,
                        4.0 * c.u1 * tt,  -4.0 * txt * c.t0,  3.0 * tyy * c.t0,
                        -3.0 * ty * ty,   8.0 * cc * c.t0 * c.t0};
    cdouble sum = 0.0;
    double norm = 0.0;
    for (cdouble t : terms) {
        sum += t;
        norm = std::max(norm, std::abs(t));
    }
    return {sum, norm};
}

}  // namespace

KpFitResult kummer_kp_residual(const PeriodMatrix& tau, const KpDirections& dirs,
                               KpVariant variant, double tolerance) {
    if (dirs.U.norm() == 0.0 && (dirs.V.norm() != 0.0 || dirs.W.norm() != 0.0))
        throw DegenerateQuery("U = 0");
    int g = tau.genus();
    Eigen::VectorXcd z0 = Eigen::VectorXcd::Zero(g);
    Eigen::VectorXcd k0 = kummer_vector(tau, z0);
    Eigen::VectorXcd k4 = kummer_vector(tau, z0, DirectionalJet{{dirs.U, 4}});
    Eigen::VectorXcd kuw = kummer_vector(tau, z0, DirectionalJet{{dirs.U, 1}, {dirs.W, 1}});
    Eigen::VectorXcd kvv = kummer_vector(tau, z0, DirectionalJet{{dirs.V, 2}});

    double cu = (variant == KpVariant::kummer) ? 1.0 : 4.0;
    double cv = (variant == KpVariant::kummer) ? 0.75 : 3.0;
    Eigen::VectorXcd base = k4 - cu * kuw + cv * kvv;

    cdouble c;
    if (dirs.c.has_value()) {
        c = *dirs.c;
    } else {
        cdouble num = 0.0, den = 0.0;
        for (int i = 0; i < k0.size(); ++i) {
            num += std::conj(k0(i)) * base(i);
            den += std::conj(k0(i)) * k0(i);
        }
        c = (std::abs(den) > 0.0) ? -num / den : cdouble(0.0);
    }
    double resid = 0.0, norm = 0.0;
    for (int i = 0; i < k0.size(); ++i) {
        resid = std::max(resid, std::abs(base(i) + c * k0(i)));
        norm = std::max(norm, max_abs({k4(i), cu * kuw(i), cv * kvv(i), c * k0(i)}));
    }
    if (norm == 0.0) norm = 1.0;
    const char* name = (variant == KpVariant::kummer) ? "kummer-kp" : "kummer-kp-second";
    KpFitResult out;
    out.c = c;
    out.report = ResidualReport::make(name, "", resid / norm, norm, tolerance);
    return out;
}

ResidualReport hirota_residual(const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                               const KpDirections& dirs, double tolerance) {
    if (!dirs.c.has_value()) throw lab_error("hirota_residual needs the constant c");
    HirotaCache cache = hirota_cache(tau, z, dirs.U);
    auto [sum, norm] = hirota_terms(cache, dirs.V, dirs.W, *dirs.c);
    if (norm == 0.0) norm = 1.0;
    return ResidualReport::make("hirota", "", std::abs(sum) / norm, norm, tolerance);
}

namespace {

// Linear least squares for (W, c) with V fixed over the cached samples.
std::pair<Eigen::VectorXcd, cdouble> solve_w_c(const std::vector<HirotaCache>& caches,
                                               const Eigen::VectorXcd& V) {
    int g = static_cast<int>(V.size());
    int n = static_cast<int>(caches.size());
    Eigen::MatrixXcd A(n, g + 1);
    Eigen::VectorXcd b(n);
    for (int i = 0; i < n; ++i) {
        const HirotaCache& c = caches[static_cast<std::size_t>(i)];
        for (int j = 0; j < g; ++j)
            A(i, j) = 4.0 * c.u1 * c.grad(j) - 4.0 * c.t0 * c.grad_u(j);
        A(i, g) = 8.0 * c.t0 * c.t0;
        cdouble ty = V.transpose() * c.grad;
        cdouble tyy = (V.transpose() * c.hess * V).value();
        b(i) = -(c.u4 * c.t0 - 4.0 * c.u3 * c.u1 + 3.0 * c.u2 * c.u2 + 3.0 * tyy * c.t0 -
                 3.0 * ty * ty);
    }
    Eigen::VectorXcd sol = A.colPivHouseholderQr().solve(b);
    return {sol.head(g), sol(g)};
}

}  // namespace

KpParameters fit_kp_parameters(const PeriodMatrix& tau, const Eigen::VectorXcd& U,
                               const std::vector<Eigen::VectorXcd>& z_samples,
                               const std::vector<Eigen::VectorXcd>& held_out,
                               std::uint64_t seed, double threshold,
                               std::optional<Eigen::VectorXcd> v_hint) {
    if (U.norm() == 0.0) throw DegenerateQuery("U = 0");
    int g = tau.genus();
    if (static_cast<int>(z_samples.size()) < 4 * g + 4)
        throw lab_error("fit_kp_parameters needs at least 4g+4 samples");

    std::vector<HirotaCache> fit_cache, out_cache;
    for (const auto& z : z_samples) fit_cache.push_back(hirota_cache(tau, z, U));
    for (const auto& z : held_out) out_cache.push_back(hirota_cache(tau, z, U));

    auto objective = [&](const std::vector<HirotaCache>& cs, const Eigen::VectorXcd& V,
                         const Eigen::VectorXcd& W, cdouble c) {
        double worst = 0.0;
        for (const auto& cc : cs) {
            auto [sum, norm] = hirota_terms(cc, V, W, c);
            worst = std::max(worst, std::abs(sum) / std::max(norm, 1e-300));
        }
        return worst;
    };

    SplitMix64 rng(seed);
    KpParameters best;
    best.residual = std::numeric_limits<double>::infinity();
    int n = static_cast<int>(fit_cache.size());
    for (int start = 0; start < 8; ++start) {
        Eigen::VectorXcd V(g);
        if (start == 0 && v_hint.has_value()) {
            V = *v_hint;
        } else if (start == 0) {
            V = Eigen::VectorXcd::Zero(g);
        } else {
            double scale = U.norm();
            for (int i = 0; i < g; ++i)
                V(i) = cdouble(rng.uniform(-scale, scale), rng.uniform(-scale, scale));
        }
        Eigen::VectorXcd W;
        cdouble c;
        for (int iter = 0; iter < 80; ++iter) {
            std::tie(W, c) = solve_w_c(fit_cache, V);
            Eigen::MatrixXcd J(n, g);
            Eigen::VectorXcd r(n);
            for (int i = 0; i < n; ++i) {
                const HirotaCache& cc = fit_cache[static_cast<std::size_t>(i)];
                auto [sum, norm] = hirota_terms(cc, V, W, c);
                (void)norm;
                r(i) = sum;
                cdouble ty = V.transpose() * cc.grad;
                Eigen::VectorXcd hv = cc.hess * V;
                for (int j = 0; j < g; ++j)
                    J(i, j) = 6.0 * hv(j) * cc.t0 - 6.0 * ty * cc.grad(j);
            }
            Eigen::VectorXcd dv = J.colPivHouseholderQr().solve(-r);
            V += dv;
            if (dv.norm() < 1e-13 * (1.0 + V.norm())) break;
        }
        std::tie(W, c) = solve_w_c(fit_cache, V);
        double res = objective(out_cache.empty() ? fit_cache : out_cache, V, W, c);
        if (res < best.residual) {
            best.V = V;
            best.W = W;
            best.c = c;
            best.residual = res;
        }
    }
    best.pass = best.residual < threshold;
    return best;
}

WeilResult weil_residual(const PeriodMatrix& tau, const Eigen::VectorXcd& p,
                         const Eigen::VectorXcd& q, const Eigen::VectorXcd& r,
                         const Eigen::VectorXcd& s,
                         const std::vector<Eigen::VectorXcd>& z_samples,
                         double tolerance) {
    if (lattice_distance(tau, p - q) < 1e-9)
        throw DegenerateQuery("p - q is a lattice vector");
    if (z_samples.size() < 3) throw lab_error("weil_residual needs at least 3 samples");

    auto terms = [&](const Eigen::VectorXcd& z) {
        cdouble t1 = theta_eval(tau, z + p + s - r - q) * theta_eval(tau, z);
        cdouble t2 = theta_eval(tau, z + s - r) * theta_eval(tau, z + p - q);
        cdouble t3 = theta_eval(tau, z + p - r) * theta_eval(tau, z + s - q);
        return std::array<cdouble, 3>{t1, t2, t3};
    };

    cdouble A = 0.0, B = 0.0;
    bool solved = false;
    std::size_t used1 = 0, used2 = 1;
    for (int attempt = 0; attempt < 8 && !solved; ++attempt) {
        used1 = static_cast<std::size_t>(2 * attempt) % z_samples.size();
        used2 = (used1 + 1) % z_samples.size();
        auto u = terms(z_samples[used1]);
        auto v = terms(z_samples[used2]);
        cdouble det = u[0] * v[1] - u[1] * v[0];
        double scale = std::max({std::abs(u[0]), std::abs(u[1]), std::abs(v[0]),
                                 std::abs(v[1]), 1e-300});
        if (std::abs(det) < 1e-10 * scale * scale) continue;
        A = (u[2] * v[1] - u[1] * v[2]) / det;
        B = (u[0] * v[2] - u[2] * v[0]) / det;
        solved = true;
    }
    if (!solved) throw SingularSystem("weil 2x2 system rank-deficient on all attempts");

    double worst = 0.0;
    for (std::size_t i = 0; i < z_samples.size(); ++i) {
        if (i == used1 || i == used2) continue;
        auto t = terms(z_samples[i]);
        double norm = max_abs({t[0], t[1], t[2]});
        if (norm == 0.0) norm = 1.0;
        worst = std::max(worst, std::abs(A * t[0] + B * t[1] - t[2]) / norm);
    }
    WeilResult out;
    out.A = A;
    out.B = B;
    out.report = ResidualReport::make("weil", "", worst, 1.0, tolerance);
    return out;
}

ResidualReport theta_surface_residual(const PeriodMatrix& tau, const Eigen::VectorXcd& U,
                                      const Eigen::VectorXcd& V, const Eigen::VectorXcd& z0,
                                      double tolerance) {
    double scale = 0.0;
    SplitMix64 rng(17);
    for (int i = 0; i < 8; ++i) {
        Eigen::VectorXcd probe = z0 + 0.2 * random_direction(rng, tau.genus());
        scale = std::max(scale, std::abs(theta_eval(tau, probe)));
    }
    if (scale == 0.0) scale = 1.0;
    if (std::abs(theta_eval(tau, z0)) > 1e-10 * scale)
        throw NotOnDivisor("theta(z0) is not numerically zero");

    cdouble t1 = theta_eval(tau, z0, DirectionalJet{{U, 1}});
    cdouble t2 = theta_eval(tau, z0, DirectionalJet{{U, 2}});
    cdouble t3 = theta_eval(tau, z0, DirectionalJet{{U, 3}});
    cdouble t4 = theta_eval(tau, z0, DirectionalJet{{U, 4}});
    cdouble s1 = theta_eval(tau, z0, DirectionalJet{{V, 1}});
    cdouble s2 = theta_eval(tau, z0, DirectionalJet{{V, 2}});
    cdouble m = theta_eval(tau, z0, DirectionalJet{{U, 1}, {V, 1}});
    cdouble terms[6] = {-t2 * s1 * s1,    2.0 * t1 * s1 * m, -t1 * t1 * s2,
                        t1 * t1 * t4,     -2.0 * t1 * t2 * t3, t2 * t2 * t2};
    cdouble sum = 0.0;
    double norm = 0.0;
    for (cdouble t : terms) {
        sum += t;
        norm = std::max(norm, std::abs(t));
    }
    if (norm == 0.0) norm = 1.0;
    return ResidualReport::make("theta-surface", "", std::abs(sum) / norm, norm, tolerance);
}

cdouble divisor_pole_linear_coefficient(const PeriodMatrix& tau, const Eigen::VectorXcd& z0,
                                        const Eigen::VectorXcd& U) {
    cdouble t1 = theta_eval(tau, z0, DirectionalJet{{U, 1}});
    cdouble t2 = theta_eval(tau, z0, DirectionalJet{{U, 2}});
    cdouble t3 = theta_eval(tau, z0, DirectionalJet{{U, 3}});
    cdouble t4 = theta_eval(tau, z0, DirectionalJet{{U, 4}});
    return (t1 * t1 * t4 - 2.0 * t1 * t2 * t3 + t2 * t2 * t2) / (2.0 * t1 * t1 * t1);
}

EllipticFunction elliptic_function_from_divisor(
    const PeriodMatrix& tau, const std::vector<std::pair<cdouble, int>>& divisor,
    double tolerance, std::uint64_t seed) {
    if (tau.genus() != 1) throw WrongGenus("elliptic_function_from_divisor needs genus 1");
    long total = 0;
    for (const auto& [x, m] : divisor) total += m;
    if (total != 0) throw DegreeMismatch("divisor degrees sum to " + std::to_string(total));

    HalfCharacteristic odd((Eigen::VectorXd(1) << 0.5).finished(),
                           (Eigen::VectorXd(1) << 0.5).finished());
    auto tau_copy = std::make_shared<PeriodMatrix>(tau);
    auto div_copy = std::make_shared<std::vector<std::pair<cdouble, int>>>(divisor);
    auto f = [tau_copy, div_copy, odd](cdouble z) -> cdouble {
        cdouble out(1.0, 0.0);
        for (const auto& [xi, mi] : *div_copy) {
            Eigen::VectorXcd arg(1);
            arg(0) = xi - z;
            cdouble v = theta_char(*tau_copy, arg, odd);
            out *= std::pow(v, mi);
        }
        return out;
    };

    cdouble period2 = tau.tau()(0, 0);
    SplitMix64 rng(seed);
    double worst = 0.0;
    int accepted = 0;
    while (accepted < 12) {
        cdouble z(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4));
        bool near_pole = false;
        for (const auto& [xi, mi] : *div_copy) {
            (void)mi;
            for (cdouble probe : {z, z + cdouble(1.0), z + period2}) {
                Eigen::VectorXcd arg(1);
                arg(0) = xi - probe;
                if (std::abs(theta_char(tau, arg, odd)) < 1e-3) near_pole = true;
            }
        }
        if (near_pole) continue;
        ++accepted;
        cdouble f0 = f(z);
        worst = std::max(worst, std::abs(f(z + cdouble(1.0)) / f0 - 1.0));
        worst = std::max(worst, std::abs(f(z + period2) / f0 - 1.0));
    }
    EllipticFunction out;
    out.f = f;
    out.periodicity = ResidualReport::make("elliptic-function", "", worst, 1.0, tolerance);
    return out;
}

}  // namespace slab
