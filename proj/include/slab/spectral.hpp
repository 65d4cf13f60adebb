#pragma once

#include <vector>

#include "slab/diffop.hpp"
#include "slab/eigenfn.hpp"

namespace slab {

// Q(alpha, beta) monic in beta of degree n, k-weighted degree <= n*m with
// deg_k alpha = n, deg_k beta = m.
struct BivariatePoly {
    struct Monomial {
        int alpha_pow;
        int beta_pow;
        cdouble coeff;
    };
    int n = 0;  // order of L1 = beta-degree
    int m = 0;  // order of L2 = alpha-degree
    std::vector<Monomial> monomials;  // includes the monic beta^n term

    cdouble coefficient(int a, int b) const;
};

// Finds the unique monic-in-beta relation with Q(k^n, A(k)) = O(k^{nm-depth})
// by a least-squares solve on Laurent coefficients of A(k); coefficients
// within 1e-9 of a rational with denominator <= 1e4 are rounded.
BivariatePoly burchnall_chaundy(const PseudoDiffOp& l1, const PseudoDiffOp& l2,
                                cdouble x0, int depth);

// Operator norm (max coefficient magnitude over all powers and series orders)
// of Q(L1, L2) computed by direct composition.
double verify_annihilation(const PseudoDiffOp& l1, const PseudoDiffOp& l2,
                           const BivariatePoly& q);

}  // namespace slab
