#pragma once

#include <optional>
#include <tuple>
#include <vector>

#include "qprob/complex_matrix.hpp"

namespace qprob {

/// Eigenvalues (ascending) and orthogonal projectors of a Hermitian matrix,
/// with eigenvalues closer than the merge tolerance collapsed into a single
/// projector. `eigenbasis` keeps the unmerged orthonormal eigenvectors as
/// columns, ordered to match; `multiplicities[k]` says how many of them
/// belong to eigenvalue k.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    std::vector<ComplexMatrix> projectors;
    std::vector<std::size_t> multiplicities;
    ComplexMatrix eigenbasis;
    double merge_tol = 0.0;

    std::size_t dim() const { return eigenbasis.dim(); }
    std::size_t outcome_count() const { return eigenvalues.size(); }

    /// Index of the outcome matching `value` within the merge tolerance.
    std::optional<std::size_t> find_outcome(double value) const;

    /// Column index in `eigenbasis` where outcome k's eigenvectors start.
    std::size_t basis_offset(std::size_t k) const;

    ComplexMatrix reconstruct() const;  // sum_k lambda_k P_k
};

/// Raw Hermitian eigensolve (cyclic Jacobi): eigenvalues ascending,
/// eigenvectors as matching columns of a unitary.
struct EigenSystem {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};
EigenSystem hermitian_eigensystem(const ComplexMatrix& m);

/// Spectral decomposition of a Hermitian matrix. `tol` bounds the allowed
/// hermiticity deviation (NotHermitian beyond it). Eigenvalues within
/// `merge_tol` of each other share one projector; merge_tol defaults to
/// 1e-8 * max_abs(m) when unset.
SpectralDecomposition spectral_decompose(const ComplexMatrix& m, double tol = 1e-10,
                                         std::optional<double> merge_tol = std::nullopt);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product, first factor slowest: entry ((i*dimB+k),(j*dimB+l))
/// = A(i,j) * B(k,l).
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

enum class TensorFactor { First, Second };

/// Trace out one factor of a matrix on a dimS*dimK product space.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_first,
                            std::size_t dim_second, TensorFactor keep);

/// Matrix exponential. Hermitian and skew-Hermitian inputs go through the
/// spectral route (so exp(-iH) is unitary to machine precision); everything
/// else through Pade scaling-and-squaring.
ComplexMatrix matrix_exp(const ComplexMatrix& m);

/// Solve A X = B by partial-pivot LU.
ComplexMatrix lu_solve(const ComplexMatrix& a, const ComplexMatrix& b);

/// First non-commuting pair in a family, with its commutator max_abs norm,
/// or nullopt when all pairs commute within tol.
std::optional<std::tuple<std::size_t, std::size_t, double>> first_incompatible_pair(
    const std::vector<ComplexMatrix>& family, double tol);

/// A * v with an O(n) shortcut when A is exactly diagonal.
cvector apply_possibly_diagonal(const ComplexMatrix& a, bool a_is_diagonal, const cvector& v);

}  // namespace qprob
