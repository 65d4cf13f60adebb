#pragma once

#include <cstddef>
#include <string>

namespace slab {

// Hot loop of the theta lattice sum: given per-term data
//   log_mag[i]   (real exponent a_i)
//   phase[i]     (real phase b_i)
//   pref_re/im   (complex polynomial prefactor p_i, from derivative jets)
// accumulate  sum_i p_i * e^{a_i} * (cos b_i + i sin b_i).
//
// Scalar reference plus an AVX2+FMA variant selected at runtime; the two are
// equivalence-tested.  SCHOTTKY_LAB_SIMD=scalar|avx2|auto overrides detection.
using theta_accumulate_fn = void (*)(const double* log_mag, const double* phase,
                                     const double* pref_re, const double* pref_im,
                                     std::size_t n, double& acc_re, double& acc_im);

void theta_accumulate_scalar(const double* log_mag, const double* phase,
                             const double* pref_re, const double* pref_im,
                             std::size_t n, double& acc_re, double& acc_im);

#if defined(__x86_64__) || defined(_M_X64)
void theta_accumulate_avx2(const double* log_mag, const double* phase,
                           const double* pref_re, const double* pref_im,
                           std::size_t n, double& acc_re, double& acc_im);
bool cpu_has_avx2_fma();
#endif

// Active kernel (resolved once, thread safe).
theta_accumulate_fn theta_kernel();
std::string theta_kernel_name();

}  // namespace slab
