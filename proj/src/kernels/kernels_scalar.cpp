#include "qprob/kernels.hpp"

namespace qprob::kernels {
namespace {

void matmul_scalar(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
    for (std::size_t i = 0; i < n; ++i) {
        cplx* crow = c + i * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] = cplx(0.0, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a[i * n + k];
            if (aik == cplx(0.0, 0.0)) continue;
            const cplx* brow = b + k * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
}

void matvec_scalar(std::size_t n, const cplx* a, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc(0.0, 0.0);
        const cplx* arow = a + i * n;
        for (std::size_t k = 0; k < n; ++k) acc += arow[k] * x[k];
        y[i] = acc;
    }
}

void axpy_scalar(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

cplx dotc_scalar(std::size_t n, const cplx* x, const cplx* y) {
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

void rotate_pair_scalar(std::size_t n, cplx* p, cplx* q, double c, cplx s) {
    const cplx sc = std::conj(s);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx pi = p[i];
        const cplx qi = q[i];
        p[i] = c * pi + s * qi;
        q[i] = -sc * pi + c * qi;
    }
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{
        "scalar", matmul_scalar, matvec_scalar, axpy_scalar, dotc_scalar, rotate_pair_scalar,
    };
    return table;
}

}  // namespace qprob::kernels
