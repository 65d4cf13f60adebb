#include "slab/eigenfn.hpp"

#include <algorithm>
#include <cmath>

namespace slab {

namespace {

double binom_int(int n, int j) {
    double b = 1.0;
    for (int i = 0; i < j; ++i) b *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    return b;
}

void require_canonical(const PseudoDiffOp& op) {
    int n = op.top();
    if (n < 1 || op.bottom() < 0 || !op.bottom_exact())
        throw lab_error("expected a differential operator");
    TaylorSeries lead = op.coeff(n);
    if ((lead - TaylorSeries::constant(1.0, op.basepoint(), lead.order())).max_abs_coeff() > 1e-10)
        throw NonUnitLeadingCoefficient("leading coefficient is not 1");
    if (n >= 1 && op.has_power(n - 1) && op.coeff(n - 1).max_abs_coeff() > 1e-10)
        throw lab_error("subleading coefficient does not vanish");
}

}  // namespace

NormalFormResult normal_form_order2(const PseudoDiffOp& op) {
    if (op.top() != 2 || op.bottom() < 0 || !op.bottom_exact())
        throw lab_error("normal_form_order2 expects an order-2 differential operator");
    TaylorSeries u2 = op.coeff(2);
    if (std::abs(u2.value_at_basepoint()) < 1e-12)
        throw NonUnitLeadingCoefficient("leading coefficient vanishes at the basepoint");
    TaylorSeries inv = u2.reciprocal();
    TaylorSeries p = op.coeff(1) * inv;
    TaylorSeries q = op.coeff(0) * inv;
    TaylorSeries u = q - (p * p) * cdouble(0.25) - p.derivative() * cdouble(0.5);

    int order = u.order();
    cdouble x0 = op.basepoint();
    std::vector<TaylorSeries> coeffs = {u, TaylorSeries::constant(0.0, x0, order),
                                        TaylorSeries::constant(1.0, x0, order)};
    NormalFormResult out{PseudoDiffOp::differential(coeffs),
                         NormalFormRecord{TaylorSeries::identity(x0, order),
                                          (p * cdouble(-0.5)).antiderivative().truncated(order),
                                          inv}};
    return out;
}

EigenSeries formal_eigenfunction(const PseudoDiffOp& op, cdouble x0, int depth) {
    require_canonical(op);
    if (std::abs(op.basepoint() - x0) > 1e-12)
        throw lab_error("normalization point must match the coefficient basepoint");
    int n = op.top();
    int order = op.min_series_order();
    EigenSeries es;
    es.x0 = x0;
    es.xi.push_back(TaylorSeries::constant(1.0, x0, order));
    for (int s = 1; s <= depth; ++s) {
        int l = s;  // solving n xi_s' = -(...) from the k^{n-l-1} relation l+1
        int L = l + 1;
        TaylorSeries rhs = TaylorSeries::constant(0.0, x0, order);
        for (int j = 2; j <= std::min(L, n); ++j) {
            int idx = L - j;
            if (idx < 0 || idx >= static_cast<int>(es.xi.size())) continue;
            const TaylorSeries& x = es.xi[static_cast<std::size_t>(idx)];
            if (x.order() < j) throw TruncationUnderflow("eigenfunction recursion exhausted");
            rhs = rhs.truncated(x.order() - j) - x.derivative(j).truncated(rhs.order()) * cdouble(binom_int(n, j));
        }
        for (int i = 0; i <= n - 2; ++i) {
            const TaylorSeries& u = op.coeff(n - 2 - i);
            for (int j = 0; j <= L - 2 - i; ++j) {
                int idx = L - 2 - i - j;
                if (idx < 0 || idx >= static_cast<int>(es.xi.size())) continue;
                const TaylorSeries& x = es.xi[static_cast<std::size_t>(idx)];
                if (x.order() < j) throw TruncationUnderflow("eigenfunction recursion exhausted");
                TaylorSeries term = u * x.derivative(j);
                rhs = rhs.truncated(term.order()) - term.truncated(rhs.order()) * cdouble(binom_int(n - 2 - i, j));
            }
        }
        TaylorSeries xi = (rhs * (cdouble(1.0) / static_cast<double>(n))).antiderivative();
        es.xi.push_back(xi.truncated(std::min(order, xi.order())));
    }
    return es;
}

double eigenfunction_defect(const PseudoDiffOp& op, const EigenSeries& es) {
    int n = op.top();
    double worst = 0.0;
    int S = es.depth();
    for (int L = 1; L <= S; ++L) {
        // coefficient of k^{n - L} in (L psi - k^n psi) e^{-k(x-x0)}
        int min_order = 1 << 20;
        TaylorSeries acc = TaylorSeries::constant(0.0, es.x0, es.xi[0].order());
        for (int j = 0; j <= std::min(L, n); ++j) {
            int idx = L - j;
            if (idx > S) continue;
            const TaylorSeries& x = es.xi[static_cast<std::size_t>(idx)];
            if (x.order() < j) { min_order = 0; continue; }
            TaylorSeries d = x.derivative(j);
            acc = acc.truncated(d.order()) + d.truncated(acc.order()) * cdouble(binom_int(n, j));
            min_order = std::min(min_order, d.order());
        }
        for (int i = 0; i <= n - 2; ++i) {
            const TaylorSeries& u = op.coeff(n - 2 - i);
            for (int j = 0; j <= L - 2 - i; ++j) {
                int idx = L - 2 - i - j;
                if (idx < 0 || idx > S) continue;
                const TaylorSeries& x = es.xi[static_cast<std::size_t>(idx)];
                if (x.order() < j) { min_order = 0; continue; }
                TaylorSeries term = u * x.derivative(j) * cdouble(binom_int(n - 2 - i, j));
                acc = acc.truncated(term.order()) + term.truncated(acc.order());
                min_order = std::min(min_order, term.order());
            }
        }
        if (L <= S) acc = acc.truncated(std::max(min_order, 0)) - es.xi[static_cast<std::size_t>(L)].truncated(acc.order());
        worst = std::max(worst, acc.max_abs_coeff());
    }
    return worst;
}

std::vector<cdouble> eigenvalue_series(const PseudoDiffOp& l1, const PseudoDiffOp& l2,
                                       cdouble x0, int depth, double tol) {
    double scale = std::max(1.0, std::max(l1.max_abs_coeff(), l2.max_abs_coeff()));
    PseudoDiffOp comm = commutator(l1, l2);
    if (comm.max_abs_coeff() > tol * scale * scale)
        throw NotCommuting("commutator magnitude " + std::to_string(comm.max_abs_coeff()));

    int m = l2.top();
    EigenSeries es = formal_eigenfunction(l1, x0, depth);
    // B_l = coefficient of k^{m-l} in (L2 psi) e^{-k(x-x0)}
    std::vector<TaylorSeries> B;
    for (int L = 0; L <= depth; ++L) {
        TaylorSeries acc = TaylorSeries::constant(0.0, x0, es.xi[0].order());
        for (int i = 0; i <= m; ++i) {
            if (!l2.has_power(i) && l2.bottom_exact()) continue;
            const TaylorSeries& v = l2.coeff(i);
            for (int j = 0; j <= i; ++j) {
                int idx = L - (m - i) - j;
                if (idx < 0 || idx > es.depth()) continue;
                const TaylorSeries& x = es.xi[static_cast<std::size_t>(idx)];
                if (x.order() < j) throw TruncationUnderflow("eigenvalue series exhausted");
                TaylorSeries term = v * x.derivative(j) * cdouble(binom_int(i, j));
                acc = acc.truncated(term.order()) + term.truncated(acc.order());
            }
        }
        B.push_back(acc);
    }
    // A = B / xi as Laurent series in k^{-1}; xi_0 = 1
    std::vector<TaylorSeries> a;
    for (int L = 0; L <= depth; ++L) {
        TaylorSeries acc = B[static_cast<std::size_t>(L)];
        for (int s = 1; s <= L; ++s) {
            if (s > es.depth()) break;
            TaylorSeries term = es.xi[static_cast<std::size_t>(s)] * a[static_cast<std::size_t>(L - s)];
            acc = acc.truncated(term.order()) - term.truncated(acc.order());
        }
        a.push_back(acc);
    }
    std::vector<cdouble> out;
    for (int L = 0; L <= depth; ++L) {
        const TaylorSeries& s = a[static_cast<std::size_t>(L)];
        cdouble v = s.value_at_basepoint();
        TaylorSeries dev = s - TaylorSeries::constant(v, x0, s.order());
        if (dev.max_abs_coeff() > tol * scale * std::max(1.0, std::abs(v)))
            throw NotCommuting("eigenvalue series coefficient depends on x at order " +
                               std::to_string(L));
        out.push_back(v);
    }
    return out;
}

CommutingPair commuting_pair_2_3(const TaylorSeries& u0, cdouble c1) {
    cdouble x0 = u0.basepoint();
    int order = u0.order();
    if (order < 4) throw TruncationUnderflow("u0 series too short");
    TaylorSeries constraint =
        u0.derivative(3).truncated(order - 3) * cdouble(0.25) +
        ((u0 * cdouble(1.5) + c1 * cdouble(0.5)) * u0.derivative()).truncated(order - 3);
    if (constraint.max_abs_coeff() > 1e-8 * std::max(1.0, std::pow(u0.max_abs_coeff(), 2)))
        throw NoSolution("u0 fails the third-order commutation constraint");

    TaylorSeries v1 = u0 * cdouble(1.5) + c1 * cdouble(0.5);
    TaylorSeries v0 = u0.derivative() * cdouble(0.75);
    int o = std::min(v0.order(), v1.order());
    std::vector<TaylorSeries> l1c = {u0.truncated(o), TaylorSeries::constant(0.0, x0, o),
                                     TaylorSeries::constant(1.0, x0, o)};
    std::vector<TaylorSeries> l2c = {v0.truncated(o), v1.truncated(o),
                                     TaylorSeries::constant(0.0, x0, o),
                                     TaylorSeries::constant(1.0, x0, o)};
    return CommutingPair{PseudoDiffOp::differential(l1c), PseudoDiffOp::differential(l2c)};
}

namespace {

// All wave-recursion series are polynomials in y (the ambient data is), so the
// padded derivative keeps lengths fixed and stays exact.
TaylorSeries ypad(const TaylorSeries& s, int order) {
    if (s.order() >= order) return s.truncated(order);
    std::vector<cdouble> c(static_cast<std::size_t>(order) + 1, cdouble(0.0));
    for (int k = 0; k <= s.order(); ++k) c[static_cast<std::size_t>(k)] = s.coeff(k);
    return TaylorSeries(s.basepoint(), std::move(c));
}

}  // namespace

WaveRecursionResult wave_recursion(const LaurentAmbient& ambient, int depth, double tol) {
    const int yord = 24;
    cdouble y0 = ambient.pole_path.basepoint();
    TaylorSeries xt = ypad(ambient.pole_path, yord);
    TaylorSeries xdot = xt.derivative_padded();
    TaylorSeries v = ypad(ambient.v, yord);
    TaylorSeries w = ambient.enforce_pole_constraint
                         ? xdot.derivative_padded() * cdouble(-0.5)
                         : ypad(ambient.w, yord);
    TaylorSeries vb = v - ambient.b;

    const int jmax = depth + 2;
    auto zero = TaylorSeries::constant(0.0, y0, yord);
    auto make_xi = [&]() {
        LaurentXi xi;
        xi.slot.assign(static_cast<std::size_t>(jmax + 2), zero);
        return xi;
    };

    WaveRecursionResult out;
    LaurentXi xi0 = make_xi();
    xi0.slot[1] = TaylorSeries::constant(1.0, y0, yord);  // j = 0
    out.xi.push_back(xi0);

    for (int s = 0; s < depth; ++s) {
        const LaurentXi& cur = out.xi.back();
        auto at = [&](int j) -> TaylorSeries {
            if (j < -1 || j > jmax) return zero;
            return cur.at(j);
        };
        // rho_j = xi_y|_j - xi''|_j - (u - b) xi|_j  for u with the moving pole
        auto rho = [&](int j) {
            TaylorSeries r = at(j).derivative_padded();
            r = r - xdot * at(j + 1) * cdouble(static_cast<double>(j + 1));
            r = r - at(j + 2) * cdouble(static_cast<double>((j + 2) * (j + 1)));
            r = r + at(j + 2) * cdouble(2.0);
            r = r - vb * at(j);
            r = r - w * at(j - 1);
            return r;
        };
        // third-order pole slot: -xi'' contributes -(j+2)(j+1) r_{-1} = -2 r_{-1}
        // at j = -3 and the u-pole contributes +2 r_{-1}; record their sum
        TaylorSeries from_xipp = at(-1) * cdouble(-2.0);
        TaylorSeries from_pole = at(-1) * cdouble(2.0);
        out.third_pole_cancellation.push_back((from_xipp + from_pole).max_abs_coeff());

        TaylorSeries obstruction = rho(-1);
        double ob = obstruction.max_abs_coeff();
        double scale = std::max({1.0, at(-1).max_abs_coeff(), vb.max_abs_coeff()});
        out.obstruction.push_back(ob);
        if (ob > tol * scale)
            throw ResidueObstruction("log-term residue fails to vanish at s = " +
                                     std::to_string(s) + " (magnitude " + std::to_string(ob) + ")");

        // 2 (s+1)-th coefficient: r_{s+1,j} = rho_{j-1} / (2j); the j = 0 slot
        // is the integration constant, set to zero; rho_{-3} vanishes exactly
        // (recorded above), so no double pole ever appears.
        LaurentXi next = make_xi();
        for (int j = -1; j <= jmax; ++j) {
            if (j == 0) continue;
            TaylorSeries r = rho(j - 1);
            next.slot[static_cast<std::size_t>(j + 1)] = r * (cdouble(0.5) / static_cast<double>(j));
        }
        out.xi.push_back(next);
    }
    return out;
}

std::vector<BiSeries> wave_recursion_regular(const BiSeries& u, cdouble b, int depth) {
    std::vector<BiSeries> xi;
    BiSeries one(u.basepoint_x(), u.basepoint_y(), u.order_x(), u.order_y());
    one.set(0, 0, 1.0);
    xi.push_back(one);
    for (int s = 0; s < depth; ++s) {
        const BiSeries& cur = xi.back();
        if (cur.order_x() < 2 || cur.order_y() < 1)
            throw TruncationUnderflow("regular wave recursion exhausted");
        BiSeries rhs = cur.dy();
        BiSeries uxx = cur.dx().dx();
        rhs = rhs - uxx;
        BiSeries ub = u;
        ub.set(0, 0, u.coeff(0, 0) - b);
        rhs = rhs - ub * cur;
        xi.push_back(rhs.antiderivative_x() * cdouble(0.5));
    }
    xi.erase(xi.begin());
    return xi;
}

}  // namespace slab
