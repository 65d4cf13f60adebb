// AVX2+FMA lattice-sum kernel.  Vector exp and sin/cos are implemented here
// with Cody-Waite range reduction and minimax polynomials; both are held to a
// few ulp over the argument ranges the theta sums produce and are
// equivalence-tested against the scalar kernel.
#include "slab/theta_kernel.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace slab {

namespace {

inline __m256d vexp(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    const __m256d max_x = _mm256_set1_pd(709.0);
    const __m256d min_x = _mm256_set1_pd(-709.0);

    __m256d clamped = _mm256_max_pd(_mm256_min_pd(x, max_x), min_x);
    __m256d k = _mm256_round_pd(_mm256_mul_pd(clamped, log2e),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(k, ln2_hi, clamped);
    r = _mm256_fnmadd_pd(k, ln2_lo, r);

    // exp(r) on |r| <= ln2/2, degree 11
    __m256d p = _mm256_set1_pd(2.5066464324039875e-08);
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557246069340942e-07));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557319904269606e-06));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.4801587356058995e-05));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.9841269897823891e-04));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.3888888889203535e-03));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(8.3333333333293859e-03));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(4.1666666666667011e-02));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.6666666666666652e-01));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(5.0000000000000000e-01));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

    // scale by 2^k
    __m128i ki = _mm256_cvtpd_epi32(k);
    __m256i ki64 = _mm256_cvtepi32_epi64(ki);
    __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(ki64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

// sin/cos via pi/2 reduction in three parts; |x| stays far below the point
// where this loses accuracy (theta phases are O(1e3)).
inline void vsincos(__m256d x, __m256d& s_out, __m256d& c_out) {
    const __m256d two_over_pi = _mm256_set1_pd(0.63661977236758134308);
    const __m256d pio2_1 = _mm256_set1_pd(1.57079632673412561417e+00);
    const __m256d pio2_2 = _mm256_set1_pd(6.07710050650619224932e-11);
    const __m256d pio2_3 = _mm256_set1_pd(2.02226624879595063154e-21);

    __m256d q = _mm256_round_pd(_mm256_mul_pd(x, two_over_pi),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(q, pio2_1, x);
    r = _mm256_fnmadd_pd(q, pio2_2, r);
    r = _mm256_fnmadd_pd(q, pio2_3, r);
    __m256d r2 = _mm256_mul_pd(r, r);

    // sin(r), |r| <= pi/4
    __m256d ps = _mm256_set1_pd(1.58962301576546568060e-10);
    ps = _mm256_fmadd_pd(ps, r2, _mm256_set1_pd(-2.50507477628578072866e-08));
    ps = _mm256_fmadd_pd(ps, r2, _mm256_set1_pd(2.75573136213857245213e-06));
    ps = _mm256_fmadd_pd(ps, r2, _mm256_set1_pd(-1.98412698295895385996e-04));
    ps = _mm256_fmadd_pd(ps, r2, _mm256_set1_pd(8.33333333332211858878e-03));
    ps = _mm256_fmadd_pd(ps, r2, _mm256_set1_pd(-1.66666666666666307295e-01));
    __m256d sinr = _mm256_fmadd_pd(_mm256_mul_pd(ps, r2), r, r);

    // cos(r)
    __m256d pc = _mm256_set1_pd(-1.13585365213876817300e-11);
    pc = _mm256_fmadd_pd(pc, r2, _mm256_set1_pd(2.08757008419747316778e-09));
    pc = _mm256_fmadd_pd(pc, r2, _mm256_set1_pd(-2.75573141792967388112e-07));
    pc = _mm256_fmadd_pd(pc, r2, _mm256_set1_pd(2.48015872888517179954e-05));
    pc = _mm256_fmadd_pd(pc, r2, _mm256_set1_pd(-1.38888888888730564116e-03));
    pc = _mm256_fmadd_pd(pc, r2, _mm256_set1_pd(4.16666666666665929218e-02));
    __m256d cosr = _mm256_fmadd_pd(_mm256_mul_pd(pc, r2), r2,
                                   _mm256_fnmadd_pd(r2, _mm256_set1_pd(0.5),
                                                    _mm256_set1_pd(1.0)));

    // quadrant: q mod 4 selects the (sin, cos) swizzle and signs
    __m128i qi = _mm256_cvtpd_epi32(q);
    __m256i qi64 = _mm256_cvtepi32_epi64(qi);
    __m256i bit0 = _mm256_and_si256(qi64, _mm256_set1_epi64x(1));
    __m256i bit1 = _mm256_and_si256(_mm256_srli_epi64(qi64, 1), _mm256_set1_epi64x(1));
    __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(bit0, _mm256_set1_epi64x(1)));
    __m256d neg = _mm256_castsi256_pd(_mm256_cmpeq_epi64(bit1, _mm256_set1_epi64x(1)));

    __m256d s1 = _mm256_blendv_pd(sinr, cosr, swap);
    __m256d c1 = _mm256_blendv_pd(cosr, sinr, swap);
    const __m256d signmask = _mm256_set1_pd(-0.0);
    // sin sign flips in quadrants 2,3 (bit1); cos sign flips when bit0 ^ bit1
    __m256d flip_s = _mm256_and_pd(neg, signmask);
    __m256i cx = _mm256_xor_si256(bit0, bit1);
    __m256d negc = _mm256_castsi256_pd(_mm256_cmpeq_epi64(cx, _mm256_set1_epi64x(1)));
    __m256d flip_c = _mm256_and_pd(negc, signmask);
    s_out = _mm256_xor_pd(s1, flip_s);
    c_out = _mm256_xor_pd(c1, flip_c);
}

}  // namespace

void theta_accumulate_avx2(const double* log_mag, const double* phase,
                           const double* pref_re, const double* pref_im,
                           std::size_t n, double& acc_re, double& acc_im) {
    __m256d vre = _mm256_setzero_pd();
    __m256d vim = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d mag = vexp(_mm256_loadu_pd(log_mag + i));
        __m256d s, c;
        vsincos(_mm256_loadu_pd(phase + i), s, c);
        __m256d tr = _mm256_mul_pd(mag, c);
        __m256d ti = _mm256_mul_pd(mag, s);
        __m256d pr = _mm256_loadu_pd(pref_re + i);
        __m256d pi = _mm256_loadu_pd(pref_im + i);
        vre = _mm256_add_pd(vre, _mm256_fmsub_pd(pr, tr, _mm256_mul_pd(pi, ti)));
        vim = _mm256_add_pd(vim, _mm256_fmadd_pd(pr, ti, _mm256_mul_pd(pi, tr)));
    }
    alignas(32) double bre[4], bim[4];
    _mm256_store_pd(bre, vre);
    _mm256_store_pd(bim, vim);
    double re = (bre[0] + bre[1]) + (bre[2] + bre[3]);
    double im = (bim[0] + bim[1]) + (bim[2] + bim[3]);
    for (; i < n; ++i) {
        double mag = std::exp(log_mag[i]);
        double c = std::cos(phase[i]);
        double s = std::sin(phase[i]);
        double tr = mag * c, ti = mag * s;
        re += pref_re[i] * tr - pref_im[i] * ti;
        im += pref_re[i] * ti + pref_im[i] * tr;
    }
    acc_re = re;
    acc_im = im;
}

bool cpu_has_avx2_fma() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace slab

#endif  // x86_64
