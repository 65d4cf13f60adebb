#pragma once

#include <optional>
#include <vector>

#include "slab/series.hpp"

namespace slab {

// Formal operator sum_{p=bottom..top} coeff_p d^p with TaylorSeries
// coefficients.  bottom_exact marks operators whose coefficients below
// `bottom` are exactly zero (honest differential operators); otherwise the
// low powers are unknown beyond the stored depth and compositions track the
// reliable range.
class PseudoDiffOp {
  public:
    PseudoDiffOp() = default;
    PseudoDiffOp(int top, int bottom, cdouble x0, int series_order, bool bottom_exact);

    static PseudoDiffOp differential(const std::vector<TaylorSeries>& coeffs_low_to_high);
    static PseudoDiffOp d(cdouble x0, int series_order);  // the operator d/dx
    static PseudoDiffOp identity(cdouble x0, int series_order);

    int top() const { return top_; }
    int bottom() const { return bottom_; }
    bool bottom_exact() const { return bottom_exact_; }
    cdouble basepoint() const { return x0_; }

    const TaylorSeries& coeff(int power) const;
    bool has_power(int power) const { return power <= top_ && power >= bottom_; }
    TaylorSeries& coeff_mutable(int power);

    PseudoDiffOp operator+(const PseudoDiffOp& o) const;
    PseudoDiffOp operator-(const PseudoDiffOp& o) const;
    PseudoDiffOp operator*(cdouble s) const;

    // Non-negative-power part and the coefficient of d^{-1}.
    PseudoDiffOp plus_part() const;
    TaylorSeries residue() const;

    double max_abs_coeff() const;
    int min_series_order() const;

  private:
    int top_ = 0;
    int bottom_ = 0;
    bool bottom_exact_ = true;
    cdouble x0_ = 0.0;
    std::vector<TaylorSeries> c_;  // index top_ - power
};

// Generalized Leibniz composition d^m o f = sum_j binom(m, j) f^{(j)} d^{m-j}.
PseudoDiffOp compose(const PseudoDiffOp& p, const PseudoDiffOp& q);

PseudoDiffOp commutator(const PseudoDiffOp& p, const PseudoDiffOp& q);

PseudoDiffOp power(const PseudoDiffOp& p, int n);

struct DressResult {
    PseudoDiffOp w_inverse;
    PseudoDiffOp lax;  // W o d o W^{-1}
};

// W = 1 + w1 d^{-1} + ...; throws NotMonic otherwise.
DressResult dress(const PseudoDiffOp& w);

struct PowerPlusResidue {
    PseudoDiffOp b_n;      // (L^n)_+
    TaylorSeries f_n;      // Res_d L^n
};

PowerPlusResidue power_plus_and_residue(const PseudoDiffOp& lax, int n);

// Residual series of the first or second equation of the two-equation KP
// system for the Lax coefficients u2(x, t2[, t3]), u3:
//   first:  u2_t2 - u2_xx - 3 u3_x
//   second: 2 u2_t3 - 3 (u2_x + u3)_t2 + (u2_xx - 3 u3_x + 3 u2^2)_x
enum class KpPairMode { first, second };
TriSeries kp_pair_residual(const TriSeries& u2, const TriSeries& u3, KpPairMode mode);

}  // namespace slab
