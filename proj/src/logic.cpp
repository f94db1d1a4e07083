#include "qprob/logic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qprob {

namespace {

constexpr double kRankTol = 1e-8;       // residual / singular-value threshold
constexpr double kSharedCos = 1e-8;     // shared direction: cos(theta) >= 1 - this
constexpr double kEqualTol = 1e-8;

// Modified Gram-Schmidt with re-orthogonalization; drops columns whose
// residual falls below the rank tolerance.
std::vector<cvector> orthonormalize(const std::vector<cvector>& columns) {
    std::vector<cvector> basis;
    for (const cvector& candidate : columns) {
        cvector v = candidate;
        for (int pass = 0; pass < 2; ++pass)
            for (const cvector& u : basis) {
                const cplx overlap = inner_product(u, v);
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= overlap * u[i];
            }
        const double norm = vector_norm(v);
        if (norm <= kRankTol) continue;
        for (auto& e : v) e /= norm;
        basis.push_back(std::move(v));
    }
    return basis;
}

ComplexMatrix projector_from_basis(std::size_t dim, const std::vector<cvector>& basis) {
    ComplexMatrix p(dim);
    for (const cvector& v : basis)
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) p(i, j) += v[i] * std::conj(v[j]);
    return p;
}

}  // namespace

Subspace::Subspace(ComplexMatrix projector, double tol) : projector_(std::move(projector)) {
    const double hdev = projector_.hermiticity_deviation();
    if (hdev > tol) throw NotHermitian("Subspace: projector not Hermitian", hdev);
    const double idev = (projector_ * projector_ - projector_).max_abs();
    if (idev > tol)
        throw NumericalIntegrity("Subspace: projector not idempotent (deviation " +
                                 std::to_string(idev) + ")");
    rank_ = static_cast<std::size_t>(std::llround(projector_.trace().real()));
}

Subspace Subspace::span(std::size_t dim_ambient, const std::vector<cvector>& vectors) {
    for (const auto& v : vectors)
        if (v.size() != dim_ambient) throw DimMismatch("Subspace::span: vector length mismatch");
    const auto basis = orthonormalize(vectors);
    return Subspace(projector_from_basis(dim_ambient, basis));
}

Subspace Subspace::zero(std::size_t dim_ambient) { return Subspace(ComplexMatrix(dim_ambient)); }

Subspace Subspace::full(std::size_t dim_ambient) {
    return Subspace(ComplexMatrix::identity(dim_ambient));
}

std::vector<cvector> Subspace::basis() const {
    if (rank_ == 0) return {};
    const EigenSystem eig = hermitian_eigensystem(projector_);
    std::vector<cvector> out;
    const std::size_t n = projector_.dim();
    for (std::size_t k = 0; k < n; ++k) {
        if (eig.eigenvalues[k] < 0.5) continue;
        cvector v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = eig.eigenvectors(i, k);
        out.push_back(std::move(v));
    }
    return out;
}

Subspace meet(const Subspace& a, const Subspace& b, MeetDiagnostics* diagnostics) {
    check_same_dim(a.projector(), b.projector(), "meet");
    const std::size_t n = a.dim_ambient();
    if (a.rank() == 0 || b.rank() == 0) return Subspace::zero(n);

    // Eigenvalues of Pa + Pb on the joint span are 1 +- cos(theta) over the
    // principal angles; the intersection is the eigenvalue-2 eigenspace.
    const EigenSystem eig = hermitian_eigensystem(a.projector() + b.projector());
    std::vector<cvector> shared;
    for (std::size_t k = 0; k < n; ++k) {
        const double lambda = eig.eigenvalues[k];
        const double cosine = lambda - 1.0;
        if (diagnostics && cosine > 0.0 && cosine < 1.0 + 1e-6) {
            diagnostics->cosines.push_back(cosine);
            if (cosine >= 1.0 - 1e-6 && cosine < 1.0 - kSharedCos)
                diagnostics->borderline_cosines.push_back(cosine);
        }
        if (lambda >= 2.0 - kSharedCos) {
            cvector v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = eig.eigenvectors(i, k);
            shared.push_back(std::move(v));
        }
    }
    return Subspace(projector_from_basis(n, shared));
}

Subspace join(const Subspace& a, const Subspace& b) {
    check_same_dim(a.projector(), b.projector(), "join");
    std::vector<cvector> stacked = a.basis();
    for (auto& v : b.basis()) stacked.push_back(std::move(v));
    return Subspace::span(a.dim_ambient(), stacked);
}

bool subspace_leq(const Subspace& p, const Subspace& q, double tol) {
    return (q.projector() * p.projector() - p.projector()).max_abs() <= tol;
}

DistributivityResult distributivity_check(const Subspace& a, const Subspace& b,
                                          const Subspace& c) {
    check_same_dim(a.projector(), b.projector(), "distributivity_check");
    check_same_dim(a.projector(), c.projector(), "distributivity_check");

    DistributivityResult out{
        .lhs = meet(a, join(b, c)),
        .rhs = join(meet(a, b), meet(a, c)),
        .equal = false,
    };
    out.equal = (out.lhs.projector() - out.rhs.projector()).max_abs() <= kEqualTol;
    if (!subspace_leq(out.rhs, out.lhs))
        throw NumericalIntegrity(
            "distributivity_check: ordering rhs <= lhs violated; projector arithmetic is off");
    return out;
}

namespace {

// Restriction of `a` to the span of `block` columns: M = B^dagger A B.
ComplexMatrix restrict_to_block(const ComplexMatrix& a, bool a_diagonal,
                                const std::vector<cvector>& block) {
    const std::size_t r = block.size();
    ComplexMatrix m(r);
    std::vector<cvector> applied;
    applied.reserve(r);
    for (const auto& col : block) applied.push_back(apply_possibly_diagonal(a, a_diagonal, col));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) m(i, j) = inner_product(block[i], applied[j]);
    return m;
}

}  // namespace

BooleanAlgebra boolean_subalgebra(const std::vector<ComplexMatrix>& observables,
                                  bool materialize_atoms, std::optional<double> tol) {
    if (observables.empty()) throw ConfigInvalid("boolean_subalgebra: empty family");
    const std::size_t n = observables.front().dim();
    double scale = 1.0;
    for (const auto& obs : observables) {
        if (obs.dim() != n) throw DimMismatch("boolean_subalgebra: mixed dims");
        if (obs.hermiticity_deviation() > 1e-10)
            throw NotHermitian("boolean_subalgebra: non-Hermitian member",
                               obs.hermiticity_deviation());
        scale = std::max(scale, obs.max_abs());
    }
    const double commute_tol = tol.value_or(1e-8 * scale);
    if (const auto bad = first_incompatible_pair(observables, commute_tol)) {
        const auto [i, j, norm] = *bad;
        throw IncompatibleFamily("boolean_subalgebra: observables " + std::to_string(i) + " and " +
                                     std::to_string(j) + " do not commute (norm " +
                                     std::to_string(norm) + ")",
                                 i, j, norm);
    }

    bool all_diagonal = true;
    for (const auto& obs : observables)
        if (!obs.is_exactly_diagonal()) {
            all_diagonal = false;
            break;
        }
    if (all_diagonal) {
        // Simultaneously diagonal family: atoms are groups of basis indices
        // sharing the same (merged) diagonal-value tuple. Lexicographic
        // order matches what iterated refinement would produce.
        std::vector<std::vector<std::size_t>> groups(1);
        groups[0].resize(n);
        for (std::size_t i = 0; i < n; ++i) groups[0][i] = i;
        for (const auto& obs : observables) {
            const double merge_tol = 1e-8 * std::max(obs.max_abs(), 1.0);
            std::vector<std::vector<std::size_t>> refined;
            for (auto& group : groups) {
                std::sort(group.begin(), group.end(), [&](std::size_t x, std::size_t y) {
                    return obs(x, x).real() < obs(y, y).real();
                });
                std::size_t start = 0;
                while (start < group.size()) {
                    std::size_t end = start + 1;
                    while (end < group.size() &&
                           obs(group[end], group[end]).real() -
                                   obs(group[end - 1], group[end - 1]).real() <=
                               merge_tol)
                        ++end;
                    refined.emplace_back(group.begin() + start, group.begin() + end);
                    start = end;
                }
            }
            groups = std::move(refined);
        }
        BooleanAlgebra out;
        out.atom_count = groups.size();
        out.element_count_log2 = groups.size();
        for (auto& group : groups) {
            std::sort(group.begin(), group.end());
            std::vector<cvector> basis;
            for (std::size_t i : group) {
                cvector e(n, cplx(0.0, 0.0));
                e[i] = cplx(1.0, 0.0);
                basis.push_back(std::move(e));
            }
            out.atom_bases.push_back(std::move(basis));
        }
        if (materialize_atoms)
            for (const auto& basis : out.atom_bases)
                out.atoms.push_back(Subspace(projector_from_basis(n, basis)));
        return out;
    }

    // Start from the whole space and split every block by each observable's
    // eigenvalues restricted to it. Commutation keeps blocks invariant, so
    // the final blocks are the joint eigenspaces (the atoms).
    std::vector<std::vector<cvector>> blocks(1);
    blocks[0].reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        cvector e(n);
        e[i] = cplx(1.0, 0.0);
        blocks[0].push_back(std::move(e));
    }

    for (const auto& obs : observables) {
        const bool diag = obs.is_exactly_diagonal();
        const double merge_tol = 1e-8 * std::max(obs.max_abs(), 1.0);
        std::vector<std::vector<cvector>> refined;
        for (const auto& block : blocks) {
            if (block.size() == 1) {
                refined.push_back(block);
                continue;
            }
            const ComplexMatrix restricted = restrict_to_block(obs, diag, block);
            const EigenSystem eig = hermitian_eigensystem(restricted);
            const std::size_t r = block.size();

            std::size_t start = 0;
            while (start < r) {
                std::size_t end = start + 1;
                while (end < r && eig.eigenvalues[end] - eig.eigenvalues[end - 1] <= merge_tol)
                    ++end;
                std::vector<cvector> sub;
                for (std::size_t col = start; col < end; ++col) {
                    cvector v(n, cplx(0.0, 0.0));
                    for (std::size_t k = 0; k < r; ++k) {
                        const cplx w = eig.eigenvectors(k, col);
                        if (w == cplx(0.0, 0.0)) continue;
                        for (std::size_t i = 0; i < n; ++i) v[i] += w * block[k][i];
                    }
                    sub.push_back(std::move(v));
                }
                refined.push_back(std::move(sub));
                start = end;
            }
        }
        blocks = std::move(refined);
    }

    BooleanAlgebra out;
    out.atom_count = blocks.size();
    out.element_count_log2 = blocks.size();
    out.atom_bases = std::move(blocks);
    if (materialize_atoms) {
        out.atoms.reserve(out.atom_count);
        for (const auto& basis : out.atom_bases)
            out.atoms.push_back(Subspace(projector_from_basis(n, basis)));
    }
    return out;
}

BooleanAlgebra boolean_subalgebra(const std::vector<HermitianObservable>& observables,
                                  bool materialize_atoms, std::optional<double> tol) {
    std::vector<ComplexMatrix> mats;
    mats.reserve(observables.size());
    for (const auto& obs : observables) mats.push_back(obs.matrix());
    return boolean_subalgebra(mats, materialize_atoms, tol);
}

}  // namespace qprob
