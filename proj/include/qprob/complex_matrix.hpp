#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "qprob/errors.hpp"

namespace qprob {

using cplx = std::complex<double>;
using cvector = std::vector<cplx>;

/// Dense square complex matrix, row-major. The substrate for states,
/// observables and superoperators. Entries are validated finite on
/// construction from external data (JSON); arithmetic assumes validity.
class ComplexMatrix {
  public:
    ComplexMatrix() : dim_(0) {}
    explicit ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim, cplx(0.0, 0.0)) {}
    ComplexMatrix(std::size_t dim, cvector entries);

    // 2x2 / small literals: rows as nested initializer lists.
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(const std::vector<double>& values);

    std::size_t dim() const { return dim_; }
    cplx& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
    const cvector& entries() const { return entries_; }
    cplx* data() { return entries_.data(); }
    const cplx* data() const { return entries_.data(); }

    ComplexMatrix operator+(const ComplexMatrix& other) const;
    ComplexMatrix operator-(const ComplexMatrix& other) const;
    ComplexMatrix operator*(const ComplexMatrix& other) const;  // kernel-backed
    ComplexMatrix operator*(cplx scalar) const;
    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cplx scalar);

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conj() const;
    cplx trace() const;

    /// Largest entry modulus; the deviation norm used throughout.
    double max_abs() const;
    double frobenius_norm() const;
    /// Maximum column absolute sum (the operator 1-norm).
    double one_norm() const;

    bool is_hermitian(double tol) const;
    double hermiticity_deviation() const;  // max_abs(M - M^dagger)
    /// True when every off-diagonal entry is exactly zero (structure test,
    /// enables O(n^2) fast paths for tensor-product-of-diagonal families).
    bool is_exactly_diagonal() const;

    /// y = M x
    cvector apply(const cvector& x) const;

    bool all_finite() const;

    friend ComplexMatrix operator*(cplx scalar, const ComplexMatrix& m) { return m * scalar; }

  private:
    std::size_t dim_;
    cvector entries_;
};

void check_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op);

// Vector helpers shared by the modules (kernel-backed where it matters).
cplx inner_product(const cvector& x, const cvector& y);  // <x|y>, conjugate-linear in x
double vector_norm(const cvector& x);
ComplexMatrix outer_product(const cvector& x, const cvector& y);  // |x><y|

}  // namespace qprob
