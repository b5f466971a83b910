// AVX2+FMA variants of the arithmetic kernels. This translation unit is the
// only one compiled with -mavx2 -mfma; it must not be entered unless the CPU
// reports both features (the dispatcher checks).

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstddef>

#include "mtlab/kernels.hpp"

namespace mtlab::kernels::avx2 {

namespace {

// Polynomial kernels for sin/cos on [-pi/4, pi/4] (minimax, double precision,
// error < 2^-57 on the interval).
const __m256d kS1 = _mm256_set1_pd(-1.66666666666666324348e-01);
const __m256d kS2 = _mm256_set1_pd(8.33333333332248946124e-03);
const __m256d kS3 = _mm256_set1_pd(-1.98412698298579493134e-04);
const __m256d kS4 = _mm256_set1_pd(2.75573137070700676789e-06);
const __m256d kS5 = _mm256_set1_pd(-2.50507602534068634195e-08);
const __m256d kS6 = _mm256_set1_pd(1.58969099521155010221e-10);

const __m256d kC1 = _mm256_set1_pd(4.16666666666666019037e-02);
const __m256d kC2 = _mm256_set1_pd(-1.38888888888741095749e-03);
const __m256d kC3 = _mm256_set1_pd(2.48015872894767294178e-05);
const __m256d kC4 = _mm256_set1_pd(-2.75573143513906633035e-07);
const __m256d kC5 = _mm256_set1_pd(2.08757232129817482790e-09);
const __m256d kC6 = _mm256_set1_pd(-1.13596475577881948265e-11);

const __m256d kTwoPiV = _mm256_set1_pd(kTwoPi);
const __m256d kQuarter = _mm256_set1_pd(0.25);
const __m256d kFour = _mm256_set1_pd(4.0);
const __m256d kHalf = _mm256_set1_pd(0.5);
const __m256d kOne = _mm256_set1_pd(1.0);
const __m256d kSignBit = _mm256_set1_pd(-0.0);

// sin/cos of 2*pi*t per lane. Quadrant reduction: t = k/4 + r with k integral
// and |r| <= 1/8, so the polynomial argument x = 2*pi*r stays in [-pi/4, pi/4]
// and the quadrant k mod 4 selects the sign/swap. Valid for |t| < 2^29 (the
// quadrant index is carried in 32-bit lanes); geometry here keeps |t| below
// a few thousand.
inline void sincos_2pi(__m256d t, __m256d& s_out, __m256d& c_out) {
    const __m256d u = _mm256_mul_pd(t, kFour);
    const __m256d k = _mm256_round_pd(u, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    const __m256d r = _mm256_mul_pd(_mm256_sub_pd(u, k), kQuarter);
    const __m256d x = _mm256_mul_pd(r, kTwoPiV);
    const __m256d z = _mm256_mul_pd(x, x);

    // sin(x) = x + x*z*(S1 + z*(S2 + ... ))
    __m256d ps = kS6;
    ps = _mm256_fmadd_pd(ps, z, kS5);
    ps = _mm256_fmadd_pd(ps, z, kS4);
    ps = _mm256_fmadd_pd(ps, z, kS3);
    ps = _mm256_fmadd_pd(ps, z, kS2);
    ps = _mm256_fmadd_pd(ps, z, kS1);
    const __m256d sin_x = _mm256_fmadd_pd(_mm256_mul_pd(x, z), ps, x);

    // cos(x) = 1 - z/2 + z*z*(C1 + z*(C2 + ... ))
    __m256d pc = kC6;
    pc = _mm256_fmadd_pd(pc, z, kC5);
    pc = _mm256_fmadd_pd(pc, z, kC4);
    pc = _mm256_fmadd_pd(pc, z, kC3);
    pc = _mm256_fmadd_pd(pc, z, kC2);
    pc = _mm256_fmadd_pd(pc, z, kC1);
    const __m256d cos_x =
        _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc, _mm256_fnmadd_pd(z, kHalf, kOne));

    // Quadrant q = k mod 4: q=1 -> (cos, -sin), q=2 -> (-sin, -cos), q=3 -> (-cos, sin).
    const __m128i k32 = _mm256_cvtpd_epi32(k);
    const __m256i q = _mm256_and_si256(_mm256_cvtepi32_epi64(k32), _mm256_set1_epi64x(3));
    const __m256d swap =
        _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, _mm256_set1_epi64x(1)),
                                               _mm256_set1_epi64x(1)));
    const __m256d neg_sin =
        _mm256_castsi256_pd(_mm256_cmpgt_epi64(q, _mm256_set1_epi64x(1)));  // q in {2,3}
    const __m256d neg_cos = _mm256_castsi256_pd(_mm256_or_si256(
        _mm256_cmpeq_epi64(q, _mm256_set1_epi64x(1)),
        _mm256_cmpeq_epi64(q, _mm256_set1_epi64x(2))));  // q in {1,2}

    __m256d s = _mm256_blendv_pd(sin_x, cos_x, swap);
    __m256d c = _mm256_blendv_pd(cos_x, sin_x, swap);
    s_out = _mm256_xor_pd(s, _mm256_and_pd(neg_sin, kSignBit));
    c_out = _mm256_xor_pd(c, _mm256_and_pd(neg_cos, kSignBit));
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d sum2 = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(sum2, _mm_unpackhi_pd(sum2, sum2)));
}

}  // namespace

Cplx phase_sum(const double* px, const double* py, const double* pz, const double* w,
               std::size_t n, Vec3 q) {
    const __m256d qx = _mm256_set1_pd(q.x);
    const __m256d qy = _mm256_set1_pd(q.y);
    const __m256d qz = _mm256_set1_pd(q.z);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d t = _mm256_mul_pd(qx, _mm256_loadu_pd(px + k));
        t = _mm256_fmadd_pd(qy, _mm256_loadu_pd(py + k), t);
        t = _mm256_fmadd_pd(qz, _mm256_loadu_pd(pz + k), t);
        __m256d s, c;
        sincos_2pi(t, s, c);
        const __m256d wk = _mm256_loadu_pd(w + k);
        acc_re = _mm256_fmadd_pd(wk, c, acc_re);
        acc_im = _mm256_fmadd_pd(wk, s, acc_im);
    }
    Cplx out{hsum(acc_re), hsum(acc_im)};
    if (k < n) {
        const Cplx tail = scalar::phase_sum(px + k, py + k, pz + k, w + k, n - k, q);
        out.re += tail.re;
        out.im += tail.im;
    }
    return out;
}

Cplx phase_sum_cplx(const double* px, const double* py, const double* pz, const double* ar,
                    const double* ai, std::size_t n, Vec3 q) {
    const __m256d qx = _mm256_set1_pd(q.x);
    const __m256d qy = _mm256_set1_pd(q.y);
    const __m256d qz = _mm256_set1_pd(q.z);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d t = _mm256_mul_pd(qx, _mm256_loadu_pd(px + k));
        t = _mm256_fmadd_pd(qy, _mm256_loadu_pd(py + k), t);
        t = _mm256_fmadd_pd(qz, _mm256_loadu_pd(pz + k), t);
        __m256d s, c;
        sincos_2pi(t, s, c);
        const __m256d re_k = _mm256_loadu_pd(ar + k);
        const __m256d im_k = _mm256_loadu_pd(ai + k);
        acc_re = _mm256_fmadd_pd(re_k, c, _mm256_fnmadd_pd(im_k, s, acc_re));
        acc_im = _mm256_fmadd_pd(re_k, s, _mm256_fmadd_pd(im_k, c, acc_im));
    }
    Cplx out{hsum(acc_re), hsum(acc_im)};
    if (k < n) {
        const Cplx tail =
            scalar::phase_sum_cplx(px + k, py + k, pz + k, ar + k, ai + k, n - k, q);
        out.re += tail.re;
        out.im += tail.im;
    }
    return out;
}

double tube_mass(const double* px, const double* py, const double* pz, const double* w,
                 std::size_t n, Vec3 anchor, Vec3 dir, double rad2) {
    const __m256d ax = _mm256_set1_pd(anchor.x);
    const __m256d ay = _mm256_set1_pd(anchor.y);
    const __m256d az = _mm256_set1_pd(anchor.z);
    const __m256d ux = _mm256_set1_pd(dir.x);
    const __m256d uy = _mm256_set1_pd(dir.y);
    const __m256d uz = _mm256_set1_pd(dir.z);
    const __m256d r2 = _mm256_set1_pd(rad2);
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(px + k), ax);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(py + k), ay);
        const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(pz + k), az);
        __m256d along = _mm256_mul_pd(dx, ux);
        along = _mm256_fmadd_pd(dy, uy, along);
        along = _mm256_fmadd_pd(dz, uz, along);
        __m256d d2 = _mm256_mul_pd(dx, dx);
        d2 = _mm256_fmadd_pd(dy, dy, d2);
        d2 = _mm256_fmadd_pd(dz, dz, d2);
        d2 = _mm256_fnmadd_pd(along, along, d2);
        const __m256d inside = _mm256_cmp_pd(d2, r2, _CMP_LE_OQ);
        acc = _mm256_add_pd(acc, _mm256_and_pd(inside, _mm256_loadu_pd(w + k)));
    }
    double total = hsum(acc);
    if (k < n) total += scalar::tube_mass(px + k, py + k, pz + k, w + k, n - k, anchor, dir, rad2);
    return total;
}

}  // namespace mtlab::kernels::avx2

#endif  // x86-64
