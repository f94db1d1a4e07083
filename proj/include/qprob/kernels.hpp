#pragma once

#include <complex>
#include <cstddef>

namespace qprob::kernels {

using cplx = std::complex<double>;

// Flat table of the arithmetic inner loops everything above is built on.
// All matrices are square, row-major, densely packed. Two implementations
// exist: a scalar reference and an AVX2+FMA variant; `active()` picks one
// at startup. The variants are equivalence-tested against each other
// (tests/test_kernels.cpp); they may differ by FMA rounding, never more.
struct KernelTable {
    const char* name;

    // c = a * b, n x n. c must not alias a or b.
    void (*matmul)(std::size_t n, const cplx* a, const cplx* b, cplx* c);

    // y = a * x, a is n x n. y must not alias x.
    void (*matvec)(std::size_t n, const cplx* a, const cplx* x, cplx* y);

    // y += alpha * x
    void (*axpy)(std::size_t n, cplx alpha, const cplx* x, cplx* y);

    // sum_i conj(x[i]) * y[i]
    cplx (*dotc)(std::size_t n, const cplx* x, const cplx* y);

    // Plane rotation of two rows: p <- c*p + s*q, q <- -conj(s)*p + c*q
    // (applied simultaneously; c is real).
    void (*rotate_pair)(std::size_t n, cplx* p, cplx* q, double c, cplx s);
};

// Scalar reference kernels. Always available.
const KernelTable& scalar_table();

// AVX2+FMA kernels, or nullptr when the build or the CPU lacks them.
const KernelTable* avx2_table();

// The table selected at first use: AVX2 when the CPU supports it, else
// scalar. Environment override QPROB_KERNELS=scalar|avx2 (a request for
// an unavailable variant falls back to scalar).
const KernelTable& active();

}  // namespace qprob::kernels
