#pragma once

#include <complex>
#include <vector>

#include "slab/errors.hpp"

namespace slab {

using cdouble = std::complex<double>;

// Truncated Taylor series sum c_k (x - x0)^k, k = 0..N.  Arithmetic keeps the
// overlap of the operands' truncation orders; derivative drops one order.
class TaylorSeries {
  public:
    TaylorSeries() = default;
    TaylorSeries(cdouble x0, std::vector<cdouble> coeffs)
        : x0_(x0), c_(std::move(coeffs)) {}

    static TaylorSeries constant(cdouble value, cdouble x0, int order);
    static TaylorSeries identity(cdouble x0, int order);  // the function x

    cdouble basepoint() const { return x0_; }
    int order() const { return static_cast<int>(c_.size()) - 1; }
    int size() const { return static_cast<int>(c_.size()); }
    cdouble coeff(int k) const { return k < size() ? c_[static_cast<std::size_t>(k)] : cdouble(0.0); }
    cdouble& at(int k) { return c_[static_cast<std::size_t>(k)]; }
    cdouble value_at_basepoint() const { return coeff(0); }
    const std::vector<cdouble>& coeffs() const { return c_; }

    TaylorSeries operator+(const TaylorSeries& o) const;
    TaylorSeries operator-(const TaylorSeries& o) const;
    TaylorSeries operator*(const TaylorSeries& o) const;
    TaylorSeries operator*(cdouble s) const;
    TaylorSeries operator+(cdouble s) const;
    TaylorSeries operator-() const;

    TaylorSeries derivative() const;        // order N-1
    TaylorSeries derivative(int k) const;
    // Antiderivative vanishing at the basepoint; order N+1.
    TaylorSeries antiderivative() const;
    // 1/this; requires a unit constant term.
    TaylorSeries reciprocal() const;

    double max_abs_coeff() const;
    // Polynomial semantics: derivative that keeps the length by appending a
    // zero.  Exact when the series is a polynomial of degree < N.
    TaylorSeries derivative_padded() const;
    TaylorSeries truncated(int order) const;

  private:
    void check_compatible(const TaylorSeries& o) const;
    cdouble x0_ = 0.0;
    std::vector<cdouble> c_;
};

inline TaylorSeries operator*(cdouble s, const TaylorSeries& t) { return t * s; }

// Truncated series in two variables, coefficients c[i][j] (x-x0)^i (y-y0)^j.
class BiSeries {
  public:
    BiSeries() = default;
    BiSeries(cdouble x0, cdouble y0, int nx, int ny)
        : x0_(x0), y0_(y0), nx_(nx), ny_(ny),
          c_(static_cast<std::size_t>((nx + 1) * (ny + 1)), cdouble(0.0)) {}

    int order_x() const { return nx_; }
    int order_y() const { return ny_; }
    cdouble basepoint_x() const { return x0_; }
    cdouble basepoint_y() const { return y0_; }

    cdouble coeff(int i, int j) const {
        if (i < 0 || j < 0 || i > nx_ || j > ny_) return 0.0;
        return c_[static_cast<std::size_t>(i * (ny_ + 1) + j)];
    }
    void set(int i, int j, cdouble v) { c_[static_cast<std::size_t>(i * (ny_ + 1) + j)] = v; }

    BiSeries operator+(const BiSeries& o) const;
    BiSeries operator-(const BiSeries& o) const;
    BiSeries operator*(const BiSeries& o) const;
    BiSeries operator*(cdouble s) const;

    BiSeries dx() const;
    BiSeries dy() const;
    // x-antiderivative with zero x-constant term, same orders.
    BiSeries antiderivative_x() const;

    double max_abs_coeff() const;

  private:
    cdouble x0_ = 0.0, y0_ = 0.0;
    int nx_ = 0, ny_ = 0;
    std::vector<cdouble> c_;
};

// Quadratic jet in a third axis t with BiSeries coefficients in (x, y):
// u = u0 + u1 t + u2 t^2.  Used by the two-equation KP reduction.
struct TriSeries {
    BiSeries comp[3];

    static TriSeries zero(cdouble x0, cdouble y0, int nx, int ny);
    TriSeries operator+(const TriSeries& o) const;
    TriSeries operator-(const TriSeries& o) const;
    TriSeries operator*(const TriSeries& o) const;  // truncated at t^2
    TriSeries operator*(cdouble s) const;
    TriSeries dx() const;
    TriSeries dy() const;
    TriSeries dt() const;
    double max_abs_coeff() const;
};

}  // namespace slab
