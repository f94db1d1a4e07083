#include "qprob/complex_matrix.hpp"

#include <cmath>
#include <string>

#include "qprob/kernels.hpp"

namespace qprob {

ComplexMatrix::ComplexMatrix(std::size_t dim, cvector entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (dim_ == 0) throw DimMismatch("ComplexMatrix: dim must be >= 1");
    if (entries_.size() != dim_ * dim_)
        throw DimMismatch("ComplexMatrix: entry count " + std::to_string(entries_.size()) +
                          " does not match dim " + std::to_string(dim_));
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : dim_(rows.size()) {
    entries_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
        if (row.size() != dim_) throw DimMismatch("ComplexMatrix: ragged initializer");
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = cplx(1.0, 0.0);
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = cplx(values[i], 0.0);
    return m;
}

void check_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.dim() != b.dim())
        throw DimMismatch(std::string(op) + ": dims " + std::to_string(a.dim()) + " and " +
                          std::to_string(b.dim()) + " differ");
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& other) const {
    ComplexMatrix out(*this);
    out += other;
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& other) const {
    ComplexMatrix out(*this);
    out -= other;
    return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    check_same_dim(*this, other, "add");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    check_same_dim(*this, other, "subtract");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
    return *this;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& other) const {
    check_same_dim(*this, other, "multiply");
    ComplexMatrix out(dim_);
    kernels::active().matmul(dim_, data(), other.data(), out.data());
    return out;
}

ComplexMatrix ComplexMatrix::operator*(cplx scalar) const {
    ComplexMatrix out(*this);
    out *= scalar;
    return out;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scalar) {
    for (auto& e : entries_) e *= scalar;
    return *this;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

ComplexMatrix ComplexMatrix::conj() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = std::conj(entries_[i]);
    return out;
}

cplx ComplexMatrix::trace() const {
    cplx t(0.0, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e));
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& e : entries_) s += std::norm(e);
    return std::sqrt(s);
}

double ComplexMatrix::one_norm() const {
    double best = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) col += std::abs((*this)(i, j));
        best = std::max(best, col);
    }
    return best;
}

bool ComplexMatrix::is_hermitian(double tol) const { return hermiticity_deviation() <= tol; }

double ComplexMatrix::hermiticity_deviation() const {
    double dev = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i; j < dim_; ++j)
            dev = std::max(dev, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return dev;
}

bool ComplexMatrix::is_exactly_diagonal() const {
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            if (i != j && (*this)(i, j) != cplx(0.0, 0.0)) return false;
    return true;
}

cvector ComplexMatrix::apply(const cvector& x) const {
    if (x.size() != dim_)
        throw DimMismatch("apply: vector length " + std::to_string(x.size()) +
                          " does not match dim " + std::to_string(dim_));
    cvector y(dim_);
    kernels::active().matvec(dim_, data(), x.data(), y.data());
    return y;
}

bool ComplexMatrix::all_finite() const {
    for (const auto& e : entries_)
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
    return true;
}

cplx inner_product(const cvector& x, const cvector& y) {
    if (x.size() != y.size()) throw DimMismatch("inner_product: length mismatch");
    return kernels::active().dotc(x.size(), x.data(), y.data());
}

double vector_norm(const cvector& x) {
    double s = 0.0;
    for (const auto& e : x) s += std::norm(e);
    return std::sqrt(s);
}

ComplexMatrix outer_product(const cvector& x, const cvector& y) {
    if (x.size() != y.size()) throw DimMismatch("outer_product: length mismatch");
    ComplexMatrix out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const cplx xi = x[i];
        for (std::size_t j = 0; j < y.size(); ++j) out(i, j) = xi * std::conj(y[j]);
    }
    return out;
}

}  // namespace qprob
