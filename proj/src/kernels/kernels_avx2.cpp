// AVX2+FMA variants of the arithmetic kernels. This translation unit is the
// only one compiled with -mavx2 -mfma; nothing here runs unless the runtime
// CPU check in avx2_table() passes.

#include "qprob/kernels.hpp"

#if defined(QPROB_BUILD_AVX2) && (defined(__x86_64__) || defined(_M_X64))

#include <immintrin.h>

namespace qprob::kernels {
namespace {

// Complex layout in a __m256d: (re0, im0, re1, im1) — two complex doubles.

// acc += w * v for two packed complex values, w broadcast as (wr, wi).
inline __m256d cmadd(__m256d wr, __m256d wi, __m256d v, __m256d acc) {
    // (wr*vr - wi*vi, wr*vi + wi*vr)
    const __m256d vswap = _mm256_permute_pd(v, 0x5);  // (im0, re0, im1, re1)
    const __m256d t = _mm256_mul_pd(wi, vswap);
    return _mm256_add_pd(acc, _mm256_fmaddsub_pd(wr, v, t));
}

void matmul_avx2(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
    const double* bd = reinterpret_cast<const double*>(b);
    double* cd = reinterpret_cast<double*>(c);
    for (std::size_t i = 0; i < n; ++i) {
        double* crow = cd + 2 * i * n;
        for (std::size_t j = 0; j < 2 * n; ++j) crow[j] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a[i * n + k];
            if (aik == cplx(0.0, 0.0)) continue;
            const __m256d wr = _mm256_set1_pd(aik.real());
            const __m256d wi = _mm256_set1_pd(aik.imag());
            const double* brow = bd + 2 * k * n;
            std::size_t j = 0;
            for (; j + 4 <= 2 * n; j += 4) {
                const __m256d v = _mm256_loadu_pd(brow + j);
                const __m256d acc = _mm256_loadu_pd(crow + j);
                _mm256_storeu_pd(crow + j, cmadd(wr, wi, v, acc));
            }
            if (j < 2 * n) {  // odd dimension: one complex tail
                const cplx bkj = b[k * n + j / 2];
                c[i * n + j / 2] += aik * bkj;
            }
        }
    }
}

void matvec_avx2(std::size_t n, const cplx* a, const cplx* x, cplx* y) {
    const double* xd = reinterpret_cast<const double*>(x);
    for (std::size_t i = 0; i < n; ++i) {
        const double* arow = reinterpret_cast<const double*>(a + i * n);
        __m256d acc = _mm256_setzero_pd();
        std::size_t k = 0;
        for (; k + 4 <= 2 * n; k += 4) {
            const __m256d av = _mm256_loadu_pd(arow + k);
            const __m256d xv = _mm256_loadu_pd(xd + k);
            // elementwise complex product, accumulated
            const __m256d are = _mm256_movedup_pd(av);
            const __m256d aim = _mm256_shuffle_pd(av, av, 0xF);
            const __m256d xswap = _mm256_permute_pd(xv, 0x5);
            const __m256d t = _mm256_mul_pd(aim, xswap);
            acc = _mm256_add_pd(acc, _mm256_fmaddsub_pd(are, xv, t));
        }
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, acc);
        cplx sum(lanes[0] + lanes[2], lanes[1] + lanes[3]);
        if (k < 2 * n) sum += a[i * n + k / 2] * x[k / 2];
        y[i] = sum;
    }
}

void axpy_avx2(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
    const __m256d wr = _mm256_set1_pd(alpha.real());
    const __m256d wi = _mm256_set1_pd(alpha.imag());
    const double* xd = reinterpret_cast<const double*>(x);
    double* yd = reinterpret_cast<double*>(y);
    std::size_t i = 0;
    for (; i + 4 <= 2 * n; i += 4) {
        const __m256d v = _mm256_loadu_pd(xd + i);
        const __m256d acc = _mm256_loadu_pd(yd + i);
        _mm256_storeu_pd(yd + i, cmadd(wr, wi, v, acc));
    }
    if (i < 2 * n) y[i / 2] += alpha * x[i / 2];
}

cplx dotc_avx2(std::size_t n, const cplx* x, const cplx* y) {
    const double* xd = reinterpret_cast<const double*>(x);
    const double* yd = reinterpret_cast<const double*>(y);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= 2 * n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(xd + i);
        const __m256d yv = _mm256_loadu_pd(yd + i);
        // conj(x) * y: (xr*yr + xi*yi, xr*yi - xi*yr)
        const __m256d xre = _mm256_movedup_pd(xv);
        const __m256d xim = _mm256_shuffle_pd(xv, xv, 0xF);
        const __m256d yswap = _mm256_permute_pd(yv, 0x5);
        const __m256d t = _mm256_mul_pd(xim, yswap);
        acc = _mm256_add_pd(acc, _mm256_fmsubadd_pd(xre, yv, t));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    cplx sum(lanes[0] + lanes[2], lanes[1] + lanes[3]);
    if (i < 2 * n) sum += std::conj(x[i / 2]) * y[i / 2];
    return sum;
}

void rotate_pair_avx2(std::size_t n, cplx* p, cplx* q, double c, cplx s) {
    const __m256d cv = _mm256_set1_pd(c);
    const __m256d sr = _mm256_set1_pd(s.real());
    const __m256d si = _mm256_set1_pd(s.imag());
    const __m256d scr = sr;                          // conj(s).real
    const __m256d sci = _mm256_set1_pd(-s.imag());   // conj(s).imag
    double* pd = reinterpret_cast<double*>(p);
    double* qd = reinterpret_cast<double*>(q);
    std::size_t i = 0;
    for (; i + 4 <= 2 * n; i += 4) {
        const __m256d pv = _mm256_loadu_pd(pd + i);
        const __m256d qv = _mm256_loadu_pd(qd + i);
        __m256d pnew = _mm256_mul_pd(cv, pv);
        pnew = cmadd(sr, si, qv, pnew);
        __m256d qnew = _mm256_mul_pd(cv, qv);
        qnew = _mm256_sub_pd(qnew, cmadd(scr, sci, pv, _mm256_setzero_pd()));
        _mm256_storeu_pd(pd + i, pnew);
        _mm256_storeu_pd(qd + i, qnew);
    }
    if (i < 2 * n) {
        const cplx pi = p[i / 2];
        const cplx qi = q[i / 2];
        p[i / 2] = c * pi + s * qi;
        q[i / 2] = -std::conj(s) * pi + c * qi;
    }
}

}  // namespace

const KernelTable* avx2_table() {
    static const KernelTable table{
        "avx2", matmul_avx2, matvec_avx2, axpy_avx2, dotc_avx2, rotate_pair_avx2,
    };
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &table;
    return nullptr;
}

}  // namespace qprob::kernels

#else

namespace qprob::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace qprob::kernels

#endif
