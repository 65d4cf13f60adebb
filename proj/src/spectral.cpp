#include "slab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace slab {

namespace {

// Laurent polynomial in k with exponents top, top-1, ..., top-(len-1).
struct Laurent {
    int top;
    std::vector<cdouble> c;

    cdouble at_exponent(int e) const {
        int idx = top - e;
        if (idx < 0 || idx >= static_cast<int>(c.size())) return 0.0;
        return c[static_cast<std::size_t>(idx)];
    }
};

Laurent laurent_mul(const Laurent& a, const Laurent& b, int keep) {
    Laurent out;
    out.top = a.top + b.top;
    out.c.assign(static_cast<std::size_t>(keep), cdouble(0.0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) {
            std::size_t k = i + j;
            if (k < static_cast<std::size_t>(keep)) out.c[k] += a.c[i] * b.c[j];
        }
    return out;
}

// Rational rounding with denominators up to 10^4 (Stern-Brocot style scan).
cdouble round_rational(cdouble v, double tol, int max_den) {
    auto round_real = [&](double x) -> std::pair<bool, double> {
        for (int den = 1; den <= max_den; ++den) {
            double num = std::nearbyint(x * den);
            if (std::abs(x - num / den) <= tol) return {true, num / den};
        }
        return {false, x};
    };
    auto [okr, re] = round_real(v.real());
    auto [oki, im] = round_real(v.imag());
    if (okr && oki) return cdouble(re, im);
    return v;
}

}  // namespace

cdouble BivariatePoly::coefficient(int a, int b) const {
    for (const auto& mo : monomials)
        if (mo.alpha_pow == a && mo.beta_pow == b) return mo.coeff;
    return 0.0;
}

BivariatePoly burchnall_chaundy(const PseudoDiffOp& l1, const PseudoDiffOp& l2,
                                cdouble x0, int depth) {
    int n = l1.top();
    int m = l2.top();
    if (std::gcd(n, m) != 1) throw lab_error("orders must be coprime");

    std::vector<cdouble> a = eigenvalue_series(l1, l2, x0, depth);
    int keep = depth + 1;

    // powers of A(k) (top m*b) and of k^n via exponent shifts
    std::vector<Laurent> apow(static_cast<std::size_t>(n) + 1);
    apow[0] = Laurent{0, std::vector<cdouble>(static_cast<std::size_t>(keep), cdouble(0.0))};
    apow[0].c[0] = 1.0;
    Laurent abase{m, a};
    abase.c.resize(static_cast<std::size_t>(keep), cdouble(0.0));
    for (int b = 1; b <= n; ++b)
        apow[static_cast<std::size_t>(b)] = laurent_mul(apow[static_cast<std::size_t>(b - 1)], abase, keep);

    // unknown monomials alpha^a beta^b with b <= n-1, n*a + m*b <= n*m
    struct Unknown {
        int a, b;
    };
    std::vector<Unknown> unknowns;
    for (int b = 0; b <= n - 1; ++b)
        for (int aa = 0; n * aa + m * b <= n * m; ++aa) unknowns.push_back({aa, b});

    int rows = keep;
    if (rows < static_cast<int>(unknowns.size()) + 2)
        throw NoRelationAtDepth("depth too small for the unknown count");
    Eigen::MatrixXcd M(rows, static_cast<int>(unknowns.size()));
    Eigen::VectorXcd rhs(rows);
    const Laurent& an = apow[static_cast<std::size_t>(n)];  // top n*m
    for (int r = 0; r < rows; ++r) {
        int expo = n * m - r;
        rhs(r) = -an.at_exponent(expo);
        for (std::size_t u = 0; u < unknowns.size(); ++u) {
            // alpha^a beta^b = k^{n a} A(k)^b : coefficient at expo
            M(r, static_cast<int>(u)) =
                apow[static_cast<std::size_t>(unknowns[u].b)].at_exponent(expo - n * unknowns[u].a);
        }
    }
    Eigen::VectorXcd sol = M.colPivHouseholderQr().solve(rhs);
    double resid = (M * sol - rhs).cwiseAbs().maxCoeff();
    double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    if (resid > 1e-7 * scale)
        throw NoRelationAtDepth("linear system inconsistent, residual " + std::to_string(resid));

    BivariatePoly q;
    q.n = n;
    q.m = m;
    q.monomials.push_back({0, n, cdouble(1.0)});
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
        cdouble c = round_rational(sol(static_cast<int>(u)), 1e-9, 10000);
        if (std::abs(c) > 1e-9)
            q.monomials.push_back({unknowns[u].a, unknowns[u].b, c});
    }
    return q;
}

double verify_annihilation(const PseudoDiffOp& l1, const PseudoDiffOp& l2,
                           const BivariatePoly& q) {
    int maxa = 0, maxb = q.n;
    for (const auto& mo : q.monomials) {
        maxa = std::max(maxa, mo.alpha_pow);
        maxb = std::max(maxb, mo.beta_pow);
    }
    std::vector<PseudoDiffOp> p1(static_cast<std::size_t>(maxa) + 1);
    std::vector<PseudoDiffOp> p2(static_cast<std::size_t>(maxb) + 1);
    p1[0] = PseudoDiffOp::identity(l1.basepoint(), l1.min_series_order());
    p2[0] = p1[0];
    for (int i = 1; i <= maxa; ++i) p1[static_cast<std::size_t>(i)] = compose(p1[static_cast<std::size_t>(i - 1)], l1);
    for (int i = 1; i <= maxb; ++i) p2[static_cast<std::size_t>(i)] = compose(p2[static_cast<std::size_t>(i - 1)], l2);

    PseudoDiffOp acc = p1[0] * cdouble(0.0);
    for (const auto& mo : q.monomials) {
        PseudoDiffOp term = compose(p1[static_cast<std::size_t>(mo.alpha_pow)],
                                    p2[static_cast<std::size_t>(mo.beta_pow)]);
        acc = acc + term * mo.coeff;
    }
    return acc.max_abs_coeff();
}

}  // namespace slab
