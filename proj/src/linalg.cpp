#include "qprob/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qprob/kernels.hpp"

namespace qprob {

namespace {

// One cyclic-Jacobi rotation zeroing A(p,q). A is Hermitian and updated in
// place; W accumulates the adjoint of the eigenvector matrix (rows of W are
// conjugated eigenvectors), so both A-row and W-row updates stay contiguous.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& w, std::size_t p, std::size_t q) {
    const cplx apq = a(p, q);
    const double r = std::abs(apq);
    if (r == 0.0) return;

    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const cplx phase = apq / r;  // e^{i phi}

    const double tau = (aqq - app) / (2.0 * r);
    double t;
    if (tau >= 0.0)
        t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
    else
        t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const cplx s = (t * c) * phase;

    const std::size_t n = a.dim();
    auto& k = kernels::active();

    // Rows p,q of A: A <- J^dagger A with J = [[c, s], [-conj(s), c]].
    k.rotate_pair(n, a.data() + p * n, a.data() + q * n, c, -s);
    // Columns p,q of A: A <- A J (strided).
    for (std::size_t i = 0; i < n; ++i) {
        const cplx aip = a(i, p);
        const cplx aiq = a(i, q);
        a(i, p) = c * aip - std::conj(s) * aiq;
        a(i, q) = s * aip + c * aiq;
    }
    // Accumulate W <- J^dagger W.
    k.rotate_pair(n, w.data() + p * n, w.data() + q * n, c, -s);

    // Pin the zeroed pair and keep the diagonal exactly real.
    a(p, q) = cplx(0.0, 0.0);
    a(q, p) = cplx(0.0, 0.0);
    a(p, p) = cplx(a(p, p).real(), 0.0);
    a(q, q) = cplx(a(q, q).real(), 0.0);
}

double offdiag_frobenius(const ComplexMatrix& a) {
    double s = 0.0;
    const std::size_t n = a.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace

EigenSystem hermitian_eigensystem(const ComplexMatrix& m) {
    const std::size_t n = m.dim();
    // Hermitize once so rounding asymmetry in the input cannot drift.
    ComplexMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

    ComplexMatrix w = ComplexMatrix::identity(n);
    const double scale = std::max(a.frobenius_norm(), 1e-300);

    constexpr int kMaxSweeps = 60;
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        if (offdiag_frobenius(a) <= 1e-15 * scale) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (std::abs(a(p, q)) > 1e-18 * scale) jacobi_rotate(a, w, p, q);
    }
    if (sweep == kMaxSweeps && offdiag_frobenius(a) > 1e-12 * scale)
        throw NumericalIntegrity("hermitian_eigensystem: Jacobi failed to converge in " +
                                 std::to_string(kMaxSweeps) + " sweeps");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenSystem out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        // Row order[k] of W is the conjugate of eigenvector k.
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = std::conj(w(order[k], i));
    }
    return out;
}

std::optional<std::size_t> SpectralDecomposition::find_outcome(double value) const {
    const double tol = std::max(merge_tol, 1e-12);
    for (std::size_t k = 0; k < eigenvalues.size(); ++k)
        if (std::abs(eigenvalues[k] - value) <= tol) return k;
    return std::nullopt;
}

std::size_t SpectralDecomposition::basis_offset(std::size_t k) const {
    std::size_t off = 0;
    for (std::size_t i = 0; i < k; ++i) off += multiplicities[i];
    return off;
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
    ComplexMatrix sum(dim());
    for (std::size_t k = 0; k < eigenvalues.size(); ++k)
        sum += projectors[k] * cplx(eigenvalues[k], 0.0);
    return sum;
}

SpectralDecomposition spectral_decompose(const ComplexMatrix& m, double tol,
                                         std::optional<double> merge_tol) {
    const double dev = m.hermiticity_deviation();
    if (dev > tol)
        throw NotHermitian("spectral_decompose: hermiticity deviation " + std::to_string(dev) +
                               " exceeds tolerance " + std::to_string(tol),
                           dev);

    const double mtol = merge_tol.value_or(1e-8 * m.max_abs());
    EigenSystem eig = hermitian_eigensystem(m);
    const std::size_t n = m.dim();

    SpectralDecomposition out;
    out.eigenbasis = eig.eigenvectors;
    out.merge_tol = mtol;

    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        // Chain-merge: successive gaps within mtol belong to one outcome.
        while (end < n && eig.eigenvalues[end] - eig.eigenvalues[end - 1] <= mtol) ++end;

        double mean = 0.0;
        for (std::size_t i = start; i < end; ++i) mean += eig.eigenvalues[i];
        mean /= static_cast<double>(end - start);

        ComplexMatrix proj(n);
        for (std::size_t col = start; col < end; ++col)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    proj(i, j) += eig.eigenvectors(i, col) * std::conj(eig.eigenvectors(j, col));

        out.eigenvalues.push_back(mean);
        out.projectors.push_back(std::move(proj));
        out.multiplicities.push_back(end - start);
        start = end;
    }
    return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_dim(a, b, "commutator");
    if (a.is_exactly_diagonal() && b.is_exactly_diagonal()) return ComplexMatrix(a.dim());
    return a * b - b * a;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t na = a.dim();
    const std::size_t nb = b.dim();
    ComplexMatrix out(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0.0, 0.0)) continue;
            for (std::size_t k = 0; k < nb; ++k)
                for (std::size_t l = 0; l < nb; ++l)
                    out(i * nb + k, j * nb + l) = aij * b(k, l);
        }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_first,
                            std::size_t dim_second, TensorFactor keep) {
    if (m.dim() != dim_first * dim_second)
        throw DimMismatch("partial_trace: dim " + std::to_string(m.dim()) + " != " +
                          std::to_string(dim_first) + " * " + std::to_string(dim_second));
    if (keep == TensorFactor::First) {
        ComplexMatrix out(dim_first);
        for (std::size_t s = 0; s < dim_first; ++s)
            for (std::size_t t = 0; t < dim_first; ++t) {
                cplx acc(0.0, 0.0);
                for (std::size_t k = 0; k < dim_second; ++k)
                    acc += m(s * dim_second + k, t * dim_second + k);
                out(s, t) = acc;
            }
        return out;
    }
    ComplexMatrix out(dim_second);
    for (std::size_t k = 0; k < dim_second; ++k)
        for (std::size_t l = 0; l < dim_second; ++l) {
            cplx acc(0.0, 0.0);
            for (std::size_t s = 0; s < dim_first; ++s)
                acc += m(s * dim_second + k, s * dim_second + l);
            out(k, l) = acc;
        }
    return out;
}

namespace {

ComplexMatrix pade13_exp(const ComplexMatrix& m) {
    // Higham's [13/13] Pade approximant with scaling and squaring.
    static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;

    const double norm = m.one_norm();
    int squarings = 0;
    if (norm > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    ComplexMatrix a = m * cplx(std::ldexp(1.0, -squarings), 0.0);

    const std::size_t n = a.dim();
    const ComplexMatrix id = ComplexMatrix::identity(n);
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a2 * a4;

    ComplexMatrix u = a6 * (a6 * cplx(b[13], 0.0) + a4 * cplx(b[11], 0.0) + a2 * cplx(b[9], 0.0)) +
                      a6 * cplx(b[7], 0.0) + a4 * cplx(b[5], 0.0) + a2 * cplx(b[3], 0.0) +
                      id * cplx(b[1], 0.0);
    u = a * u;
    ComplexMatrix v = a6 * (a6 * cplx(b[12], 0.0) + a4 * cplx(b[10], 0.0) + a2 * cplx(b[8], 0.0)) +
                      a6 * cplx(b[6], 0.0) + a4 * cplx(b[4], 0.0) + a2 * cplx(b[2], 0.0) +
                      id * cplx(b[0], 0.0);

    ComplexMatrix r = lu_solve(v - u, v + u);
    for (int i = 0; i < squarings; ++i) r = r * r;
    return r;
}

}  // namespace

ComplexMatrix matrix_exp(const ComplexMatrix& m) {
    const std::size_t n = m.dim();
    const double scale = std::max(m.max_abs(), 1.0);

    if (m.hermiticity_deviation() <= 1e-12 * scale) {
        EigenSystem eig = hermitian_eigensystem(m);
        ComplexMatrix out(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double e = std::exp(eig.eigenvalues[k]);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    out(i, j) += e * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
        }
        return out;
    }

    // Skew-Hermitian: m = -iH with H Hermitian, exp(m) = V e^{-i lambda} V^dagger.
    ComplexMatrix h = m * cplx(0.0, 1.0);
    if (h.hermiticity_deviation() <= 1e-12 * scale) {
        EigenSystem eig = hermitian_eigensystem(h);
        ComplexMatrix out(n);
        for (std::size_t k = 0; k < n; ++k) {
            const cplx e = std::exp(cplx(0.0, -eig.eigenvalues[k]));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    out(i, j) += e * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
        }
        return out;
    }

    return pade13_exp(m);
}

ComplexMatrix lu_solve(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_dim(a, b, "lu_solve");
    const std::size_t n = a.dim();
    ComplexMatrix lu = a;
    ComplexMatrix x = b;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(lu(col, col));
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::abs(lu(i, col)) > best) {
                best = std::abs(lu(i, col));
                pivot = i;
            }
        if (best == 0.0) throw NumericalIntegrity("lu_solve: singular matrix");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(lu(col, j), lu(pivot, j));
                std::swap(x(col, j), x(pivot, j));
            }
        }
        const cplx inv = cplx(1.0, 0.0) / lu(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            const cplx f = lu(i, col) * inv;
            if (f == cplx(0.0, 0.0)) continue;
            lu(i, col) = f;
            for (std::size_t j = col + 1; j < n; ++j) lu(i, j) -= f * lu(col, j);
            for (std::size_t j = 0; j < n; ++j) x(i, j) -= f * x(col, j);
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        const cplx inv = cplx(1.0, 0.0) / lu(col, col);
        for (std::size_t j = 0; j < n; ++j) x(col, j) *= inv;
        for (std::size_t i = 0; i < col; ++i) {
            const cplx f = lu(i, col);
            if (f == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < n; ++j) x(i, j) -= f * x(col, j);
        }
    }
    return x;
}

std::optional<std::tuple<std::size_t, std::size_t, double>> first_incompatible_pair(
    const std::vector<ComplexMatrix>& family, double tol) {
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            const double norm = commutator(family[i], family[j]).max_abs();
            if (norm > tol) return std::make_tuple(i, j, norm);
        }
    return std::nullopt;
}

cvector apply_possibly_diagonal(const ComplexMatrix& a, bool a_is_diagonal, const cvector& v) {
    if (!a_is_diagonal) return a.apply(v);
    if (v.size() != a.dim()) throw DimMismatch("apply_possibly_diagonal: length mismatch");
    cvector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = a(i, i) * v[i];
    return out;
}

}  // namespace qprob
