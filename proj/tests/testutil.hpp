#pragma once

#include <cmath>
#include <vector>

#include "qprob/complex_matrix.hpp"
#include "qprob/linalg.hpp"
#include "qprob/quantum.hpp"
#include "qprob/rng.hpp"

namespace testutil {

using qprob::cplx;
using qprob::ComplexMatrix;
using qprob::cvector;

inline ComplexMatrix sigma_x() {
    return ComplexMatrix{{cplx(0, 0), cplx(1, 0)}, {cplx(1, 0), cplx(0, 0)}};
}
inline ComplexMatrix sigma_y() {
    return ComplexMatrix{{cplx(0, 0), cplx(0, -1)}, {cplx(0, 1), cplx(0, 0)}};
}
inline ComplexMatrix sigma_z() {
    return ComplexMatrix{{cplx(1, 0), cplx(0, 0)}, {cplx(0, 0), cplx(-1, 0)}};
}

inline cvector ket(std::size_t dim, std::size_t index) {
    cvector v(dim, cplx(0, 0));
    v[index] = cplx(1, 0);
    return v;
}

inline cvector plus_state() {
    const double s = 1.0 / std::sqrt(2.0);
    return {cplx(s, 0), cplx(s, 0)};
}

inline cvector minus_state() {
    const double s = 1.0 / std::sqrt(2.0);
    return {cplx(s, 0), cplx(-s, 0)};
}

// (|00> + |11>)/sqrt(2)
inline cvector bell_phi_plus() {
    const double s = 1.0 / std::sqrt(2.0);
    return {cplx(s, 0), cplx(0, 0), cplx(0, 0), cplx(s, 0)};
}

// (|01> - |10>)/sqrt(2)
inline cvector singlet() {
    const double s = 1.0 / std::sqrt(2.0);
    return {cplx(0, 0), cplx(s, 0), cplx(-s, 0), cplx(0, 0)};
}

inline ComplexMatrix random_hermitian(std::size_t dim, qprob::CounterRng& rng) {
    ComplexMatrix g(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) g(i, j) = cplx(rng.next_normal(), rng.next_normal());
    return (g + g.adjoint()) * cplx(0.5, 0.0);
}

inline cvector random_pure(std::size_t dim, qprob::CounterRng& rng) {
    cvector v(dim);
    for (auto& a : v) a = cplx(rng.next_normal(), rng.next_normal());
    const double n = qprob::vector_norm(v);
    for (auto& a : v) a /= n;
    return v;
}

// Two commuting observables sharing a random eigenbasis, non-degenerate.
inline std::pair<ComplexMatrix, ComplexMatrix> random_commuting_nondegenerate(
    std::size_t dim, qprob::CounterRng& rng) {
    const qprob::EigenSystem eig = qprob::hermitian_eigensystem(random_hermitian(dim, rng));
    auto build = [&](double spread) {
        ComplexMatrix m(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            const double value = static_cast<double>(k) * spread + rng.next_double() * 0.3;
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j)
                    m(i, j) += value * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
        }
        return m;
    };
    return {build(1.0), build(0.7)};
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).max_abs();
}

}  // namespace testutil
