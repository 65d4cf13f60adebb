#pragma once

#include <vector>

#include "slab/diffop.hpp"
#include "slab/series.hpp"

namespace slab {

// xi_0 = 1, xi_s(x0) = 0 for s >= 1; formal eigenfunction coefficients of a
// canonical operator, psi = (sum xi_s k^{-s}) e^{k(x - x0)}.
struct EigenSeries {
    cdouble x0;
    std::vector<TaylorSeries> xi;  // index s

    int depth() const { return static_cast<int>(xi.size()) - 1; }
};

struct NormalFormRecord {
    TaylorSeries variable_change;        // t(x); identity here (scaling route)
    TaylorSeries conjugation_exponent;   // log of the gauge factor, zero at x0
    TaylorSeries scaling;                // 1 / u2
};

struct NormalFormResult {
    PseudoDiffOp canonical;  // d^2 + u
    NormalFormRecord record;
};

// Order-2 reduction: divide by the leading coefficient, then conjugate away
// the subleading term; u = u0/u2 - p^2/4 - p'/2 with p = u1/u2.
NormalFormResult normal_form_order2(const PseudoDiffOp& op);

// Requires canonical op (leading 1, subleading 0) with coefficients based at
// the same x0.  Solves the upper-triangular recursion to depth S.
EigenSeries formal_eigenfunction(const PseudoDiffOp& op, cdouble x0, int depth);

// Coefficientwise magnitude of L psi - k^n psi through k^{n - depth}.
double eigenfunction_defect(const PseudoDiffOp& op, const EigenSeries& es);

// A(k) = psi^{-1} L2 psi = k^m + a_1 k^{m-1} + ...; checks [L1, L2] = 0 and
// that every Laurent coefficient is constant in x.
std::vector<cdouble> eigenvalue_series(const PseudoDiffOp& l1, const PseudoDiffOp& l2,
                                       cdouble x0, int depth, double tol = 1e-8);

struct CommutingPair {
    PseudoDiffOp l1;  // d^2 + u0
    PseudoDiffOp l2;  // d^3 + v1 d + v0
};

// v1 = (3/2) u0 + c1/2, v0 = (3/4) u0', valid when
// (1/4) u0''' + ((3/2) u0 + c1/2) u0' = 0 to truncation; NoSolution otherwise.
CommutingPair commuting_pair_2_3(const TaylorSeries& u0, cdouble c1);

// Ambient data for the moving-pole recursion: u has a double pole of strength
// -2 on the path x = pole_path(y) with Laurent tail v + w (x - pole) + ...
struct LaurentAmbient {
    TaylorSeries pole_path;              // x~(y), series in y
    TaylorSeries v;                      // constant Laurent coefficient, in y
    TaylorSeries w;                      // linear Laurent coefficient, in y
    cdouble b = 0.0;
    // When set, w is replaced by -x~''(y)/2 so the pole-motion constraint
    // holds exactly.
    bool enforce_pole_constraint = false;
};

struct LaurentXi {
    // Laurent slots j = -1 .. jmax as series in y: slot[j + 1].
    std::vector<TaylorSeries> slot;

    const TaylorSeries& at(int j) const { return slot[static_cast<std::size_t>(j + 1)]; }
};

struct WaveRecursionResult {
    std::vector<LaurentXi> xi;                  // s = 0..S
    std::vector<double> obstruction;            // |log-term residue| per step s
    std::vector<double> third_pole_cancellation;
};

// 2 xi'_{s+1} = xi_s_y - xi_s'' - (u - b) xi_s carried on Laurent data with a
// moving simple pole; throws ResidueObstruction (with the offending s) when
// the log-term residue fails to cancel.
WaveRecursionResult wave_recursion(const LaurentAmbient& ambient, int depth,
                                   double tol = 1e-9);

// Regular-ambient variant: u a BiSeries in (x, y); returns xi_1..xi_S.
std::vector<BiSeries> wave_recursion_regular(const BiSeries& u, cdouble b, int depth);

}  // namespace slab
