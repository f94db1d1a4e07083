#pragma once

#include <optional>
#include <vector>

#include "qprob/quantum.hpp"

namespace qprob {

/// Closed subspace of a finite-dimensional space, held as its orthogonal
/// projector.
class Subspace {
  public:
    /// From a projector (validated Hermitian and idempotent).
    explicit Subspace(ComplexMatrix projector, double tol = 1e-10);
    /// From spanning vectors (orthonormalized internally; rank may drop).
    static Subspace span(std::size_t dim_ambient, const std::vector<cvector>& vectors);
    static Subspace zero(std::size_t dim_ambient);
    static Subspace full(std::size_t dim_ambient);

    std::size_t dim_ambient() const { return projector_.dim(); }
    std::size_t rank() const { return rank_; }
    const ComplexMatrix& projector() const { return projector_; }

    /// Orthonormal basis of the range (rank columns).
    std::vector<cvector> basis() const;

  private:
    ComplexMatrix projector_;
    std::size_t rank_;
};

/// Principal-angle cosines that fell close to the shared-direction
/// threshold; surfaced so near-degenerate intersections are visible
/// instead of silently resolved.
struct MeetDiagnostics {
    std::vector<double> cosines;             // all principal-angle cosines
    std::vector<double> borderline_cosines;  // within [1 - 1e-6, 1 - 1e-8)
};

/// Intersection of two subspaces (shared directions decided by principal
/// angles: cos(theta) >= 1 - 1e-8).
Subspace meet(const Subspace& a, const Subspace& b, MeetDiagnostics* diagnostics = nullptr);

/// Span of the union of two subspaces (rank from the stacked column space
/// with residual tolerance 1e-8).
Subspace join(const Subspace& a, const Subspace& b);

/// P <= Q in the projector order, i.e. ||Q P - P|| <= tol.
bool subspace_leq(const Subspace& p, const Subspace& q, double tol = 1e-8);

struct DistributivityResult {
    Subspace lhs;  // a ^ (b v c)
    Subspace rhs;  // (a ^ b) v (a ^ c)
    bool equal;    // projector max_abs difference <= 1e-8
};

/// Tests a ^ (b v c) = (a ^ b) v (a ^ c). The ordering rhs <= lhs holds in
/// any case and is asserted; equality fails for generic non-commuting
/// triples.
DistributivityResult distributivity_check(const Subspace& a, const Subspace& b,
                                          const Subspace& c);

struct BooleanAlgebra {
    std::size_t atom_count = 0;
    /// log2 of the generated algebra's element count (= atom_count).
    std::size_t element_count_log2 = 0;
    /// Atom projectors; filled only when materialization was requested
    /// (at large dims the projectors alone are the exponential cost).
    std::vector<Subspace> atoms;
    /// Orthonormal basis columns per atom, always available.
    std::vector<std::vector<cvector>> atom_bases;
};

/// Atoms (minimal joint eigenspaces) of a pairwise-commuting family,
/// by iterated block refinement in a shared basis. IncompatibleFamily when
/// a pair fails to commute within tol (default 1e-8 * max norm).
BooleanAlgebra boolean_subalgebra(const std::vector<ComplexMatrix>& observables,
                                  bool materialize_atoms = true,
                                  std::optional<double> tol = std::nullopt);
BooleanAlgebra boolean_subalgebra(const std::vector<HermitianObservable>& observables,
                                  bool materialize_atoms = true,
                                  std::optional<double> tol = std::nullopt);

}  // namespace qprob
