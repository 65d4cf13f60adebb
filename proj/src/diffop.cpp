#include "slab/diffop.hpp"

#include <algorithm>
#include <cmath>

namespace slab {

PseudoDiffOp::PseudoDiffOp(int top, int bottom, cdouble x0, int series_order, bool bottom_exact)
    : top_(top), bottom_(bottom), bottom_exact_(bottom_exact), x0_(x0) {
    if (bottom > top) throw lab_error("pseudo-op bottom above top");
    c_.assign(static_cast<std::size_t>(top - bottom + 1),
              TaylorSeries::constant(0.0, x0, series_order));
}

PseudoDiffOp PseudoDiffOp::differential(const std::vector<TaylorSeries>& coeffs_low_to_high) {
    if (coeffs_low_to_high.empty()) throw lab_error("empty coefficient list");
    int n = static_cast<int>(coeffs_low_to_high.size()) - 1;
    cdouble x0 = coeffs_low_to_high[0].basepoint();
    int order = coeffs_low_to_high[0].order();
    for (const auto& s : coeffs_low_to_high) order = std::min(order, s.order());
    PseudoDiffOp p(n, 0, x0, order, true);
    for (int i = 0; i <= n; ++i)
        p.c_[static_cast<std::size_t>(n - i)] = coeffs_low_to_high[static_cast<std::size_t>(i)].truncated(order);
    return p;
}

PseudoDiffOp PseudoDiffOp::d(cdouble x0, int series_order) {
    PseudoDiffOp p(1, 1, x0, series_order, true);
    p.c_[0] = TaylorSeries::constant(1.0, x0, series_order);
    return p;
}

PseudoDiffOp PseudoDiffOp::identity(cdouble x0, int series_order) {
    PseudoDiffOp p(0, 0, x0, series_order, true);
    p.c_[0] = TaylorSeries::constant(1.0, x0, series_order);
    return p;
}

const TaylorSeries& PseudoDiffOp::coeff(int power) const {
    if (!has_power(power)) {
        if (power > top_ || bottom_exact_) {
            static thread_local TaylorSeries zero;
            zero = TaylorSeries::constant(0.0, x0_, min_series_order());
            return zero;
        }
        throw TruncationUnderflow("coefficient below the reliable depth");
    }
    return c_[static_cast<std::size_t>(top_ - power)];
}

TaylorSeries& PseudoDiffOp::coeff_mutable(int power) {
    if (!has_power(power)) throw lab_error("power out of range");
    return c_[static_cast<std::size_t>(top_ - power)];
}

PseudoDiffOp PseudoDiffOp::operator+(const PseudoDiffOp& o) const {
    int top = std::max(top_, o.top_);
    bool exact = bottom_exact_ && o.bottom_exact_;
    int bottom = exact ? std::min(bottom_, o.bottom_) : std::max(bottom_, o.bottom_);
    int order = std::min(min_series_order(), o.min_series_order());
    PseudoDiffOp out(top, bottom, x0_, order, exact);
    for (int p = bottom; p <= top; ++p) {
        TaylorSeries s = TaylorSeries::constant(0.0, x0_, order);
        if (p <= top_ && p >= bottom_) s = s + coeff(p).truncated(order);
        if (p <= o.top_ && p >= o.bottom_) s = s + o.coeff(p).truncated(order);
        out.coeff_mutable(p) = s;
    }
    return out;
}

PseudoDiffOp PseudoDiffOp::operator-(const PseudoDiffOp& o) const {
    return (*this) + (o * cdouble(-1.0));
}

PseudoDiffOp PseudoDiffOp::operator*(cdouble s) const {
    PseudoDiffOp out = *this;
    for (auto& cc : out.c_) cc = cc * s;
    return out;
}

PseudoDiffOp PseudoDiffOp::plus_part() const {
    if (top_ < 0) return PseudoDiffOp::identity(x0_, min_series_order()) * cdouble(0.0);
    PseudoDiffOp out(top_, 0, x0_, min_series_order(), true);
    for (int p = 0; p <= top_; ++p)
        out.coeff_mutable(p) = (p >= bottom_) ? coeff(p) : TaylorSeries::constant(0.0, x0_, min_series_order());
    return out;
}

TaylorSeries PseudoDiffOp::residue() const {
    if (-1 < bottom_ && !bottom_exact_)
        throw TruncationUnderflow("residue below reliable depth");
    if (-1 > top_ || -1 < bottom_) return TaylorSeries::constant(0.0, x0_, min_series_order());
    return coeff(-1);
}

double PseudoDiffOp::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& s : c_) m = std::max(m, s.max_abs_coeff());
    return m;
}

int PseudoDiffOp::min_series_order() const {
    int o = c_.empty() ? 0 : c_[0].order();
    for (const auto& s : c_) o = std::min(o, s.order());
    return o;
}

namespace {

// binom(m, j) with m any integer, j >= 0
double gen_binom(int m, int j) {
    double b = 1.0;
    for (int i = 0; i < j; ++i) b *= static_cast<double>(m - i) / static_cast<double>(i + 1);
    return b;
}

}  // namespace

PseudoDiffOp compose(const PseudoDiffOp& p, const PseudoDiffOp& q) {
    if (std::abs(p.basepoint() - q.basepoint()) > 1e-12)
        throw lab_error("incompatible basepoints");
    int order = std::min(p.min_series_order(), q.min_series_order());
    int top = p.top() + q.top();
    bool exact = p.bottom_exact() && q.bottom_exact();
    int bottom;
    if (exact) {
        bottom = p.bottom() + q.bottom();
    } else {
        // coefficients below the unknown tails of either factor are unreliable
        bottom = std::max(p.bottom() + q.top(), p.top() + q.bottom());
    }
    // derivatives past the series order are unknown as well
    int max_j_avail = order;
    bottom = std::max(bottom, p.top() + q.top() - max_j_avail);
    if (bottom > top) throw TruncationUnderflow("composition has no reliable coefficients");

    PseudoDiffOp out(top, bottom, p.basepoint(), order, exact);
    for (int m = p.bottom(); m <= p.top(); ++m) {
        const TaylorSeries f = p.coeff(m).truncated(order);
        for (int l = q.bottom(); l <= q.top(); ++l) {
            const TaylorSeries& g = q.coeff(l);
            // d^m o g = sum_j binom(m, j) g^{(j)} d^{m-j}
            TaylorSeries gj = g.truncated(order);
            for (int j = 0;; ++j) {
                int power = m + l - j;
                if (power < bottom) break;
                if (j > 0) {
                    if (gj.order() < 1) break;
                    gj = gj.derivative();
                }
                double b = gen_binom(m, j);
                if (b != 0.0 && power <= top) {
                    TaylorSeries& slot = out.coeff_mutable(power);
                    slot = slot + (f * gj.truncated(slot.order())) * cdouble(b);
                }
                if (m >= 0 && j >= m) break;  // classical Leibniz terminates
            }
        }
    }
    return out;
}

PseudoDiffOp commutator(const PseudoDiffOp& p, const PseudoDiffOp& q) {
    return compose(p, q) - compose(q, p);
}

PseudoDiffOp power(const PseudoDiffOp& p, int n) {
    if (n < 1) throw lab_error("power wants n >= 1");
    PseudoDiffOp out = p;
    for (int i = 1; i < n; ++i) out = compose(out, p);
    return out;
}

DressResult dress(const PseudoDiffOp& w) {
    if (w.top() != 0) throw NotMonic("dressing operator must have top power 0");
    TaylorSeries lead = w.coeff(0);
    if (std::abs(lead.value_at_basepoint() - cdouble(1.0)) > 1e-12 ||
        (lead - TaylorSeries::constant(1.0, w.basepoint(), lead.order())).max_abs_coeff() > 1e-12)
        throw NotMonic("dressing operator must be monic (unit constant term)");

    int depth = -w.bottom();
    PseudoDiffOp n = PseudoDiffOp::identity(w.basepoint(), w.min_series_order()) - w;  // order <= -1
    PseudoDiffOp inv = PseudoDiffOp::identity(w.basepoint(), w.min_series_order());
    PseudoDiffOp term = PseudoDiffOp::identity(w.basepoint(), w.min_series_order());
    for (int k = 1; k <= depth; ++k) {
        term = compose(term, n);
        inv = inv + term;
    }
    DressResult out{inv, compose(compose(w, PseudoDiffOp::d(w.basepoint(), w.min_series_order())), inv)};
    return out;
}

PowerPlusResidue power_plus_and_residue(const PseudoDiffOp& lax, int n) {
    if (n < 1) throw lab_error("power_plus_and_residue wants n >= 1");
    PseudoDiffOp ln = power(lax, n);
    return PowerPlusResidue{ln.plus_part(), ln.residue()};
}

TriSeries kp_pair_residual(const TriSeries& u2, const TriSeries& u3, KpPairMode mode) {
    if (mode == KpPairMode::first) {
        return u2.dy() - u2.dx().dx() - u3.dx() * cdouble(3.0);
    }
    TriSeries lhs = u2.dt() * cdouble(2.0);
    TriSeries mid = (u2.dx() + u3).dy() * cdouble(3.0);
    TriSeries rhs = (u2.dx().dx() - u3.dx() * cdouble(3.0) + (u2 * u2) * cdouble(3.0)).dx();
    return lhs - mid + rhs;
}

}  // namespace slab
