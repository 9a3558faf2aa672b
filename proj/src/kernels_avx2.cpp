// SPDX-License-Identifier: Apache-2.0
//
// AVX2+FMA kernel variants. Complex doubles are kept interleaved
// [re0 im0 re1 im1], two complex values per 256-bit vector; the swap/fmaddsub
// pattern forms complex products without deinterleaving.
//
// This translation unit is compiled with -mavx2 -mfma on x86-64 and reduces
// to a stub elsewhere; callers go through the dispatch table.

#include "dmimo/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace dmimo::kernels {

namespace avx2 {

namespace {

// [a b c d] -> [b a d c]: swaps re/im within each complex value.
inline __m256d swap_halves(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

cd cdotc(std::size_t n, const cd* a, const cd* b) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d acc_p = _mm256_setzero_pd();  // pairs (ar*br, ai*bi)
    __m256d acc_q = _mm256_setzero_pd();  // pairs (ar*bi, ai*br)
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        acc_p = _mm256_fmadd_pd(va, vb, acc_p);
        acc_q = _mm256_fmadd_pd(va, swap_halves(vb), acc_q);
    }
    alignas(32) double p[4], q[4];
    _mm256_store_pd(p, acc_p);
    _mm256_store_pd(q, acc_q);
    double re = p[0] + p[1] + p[2] + p[3];
    double im = q[0] - q[1] + q[2] - q[3];
    for (; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

void axpy(std::size_t n, cd alpha, const cd* x, cd* y) {
    const double* px = reinterpret_cast<const double*>(x);
    double* py = reinterpret_cast<double*>(y);
    const __m256d wr = _mm256_set1_pd(alpha.real());
    const __m256d wi = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(px + 2 * i);
        const __m256d vy = _mm256_loadu_pd(py + 2 * i);
        const __m256d cross = _mm256_mul_pd(swap_halves(vx), wi);
        const __m256d prod = _mm256_fmaddsub_pd(vx, wr, cross);
        _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(vy, prod));
    }
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += cd{alpha.real() * xr - alpha.imag() * xi,
                   alpha.real() * xi + alpha.imag() * xr};
    }
}

double sum_abs2(std::size_t n, const cd* a) {
    const double* pa = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d v = _mm256_loadu_pd(pa + 2 * i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        total += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    }
    return total;
}

void crot(std::size_t n, cd* u, cd* v, double c, cd s) {
    double* pu = reinterpret_cast<double*>(u);
    double* pv = reinterpret_cast<double*>(v);
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d sr = _mm256_set1_pd(s.real());
    const __m256d si = _mm256_set1_pd(s.imag());
    const __m256d nsr = _mm256_set1_pd(-s.real());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vu = _mm256_loadu_pd(pu + 2 * i);
        const __m256d vv = _mm256_loadu_pd(pv + 2 * i);
        // s*v, then u' = c*u + s*v
        const __m256d sv = _mm256_fmaddsub_pd(vv, sr, _mm256_mul_pd(swap_halves(vv), si));
        _mm256_storeu_pd(pu + 2 * i, _mm256_fmadd_pd(vu, vc, sv));
        // (-conj(s))*u = (-sr + j*si)*u, then v' = c*v + (-conj(s))*u
        const __m256d su = _mm256_fmaddsub_pd(vu, nsr, _mm256_mul_pd(swap_halves(vu), si));
        _mm256_storeu_pd(pv + 2 * i, _mm256_fmadd_pd(vv, vc, su));
    }
    for (; i < n; ++i) {
        const double ur = u[i].real(), ui = u[i].imag();
        const double vr = v[i].real(), vi = v[i].imag();
        u[i] = cd{c * ur + s.real() * vr - s.imag() * vi,
                  c * ui + s.real() * vi + s.imag() * vr};
        v[i] = cd{c * vr - s.real() * ur - s.imag() * ui,
                  c * vi - s.real() * ui + s.imag() * ur};
    }
}

}  // namespace avx2

const Table* avx2_table() {
    static const Table t{avx2::cdotc, avx2::axpy, avx2::sum_abs2, avx2::crot, "avx2"};
    return &t;
}

}  // namespace dmimo::kernels

#else  // !(__AVX2__ && __FMA__)

namespace dmimo::kernels {

const Table* avx2_table() { return nullptr; }

}  // namespace dmimo::kernels

#endif
