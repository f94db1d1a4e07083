#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qprob/classical.hpp"
#include "qprob/complex_matrix.hpp"
#include "qprob/linalg.hpp"

namespace qprob {

struct StateTolerances {
    double norm = 1e-10;        // pure-state normalization
    double hermiticity = 1e-10;
    double trace = 1e-10;
    double eigenvalue = 1e-10;  // allowed negativity of density eigenvalues
};

/// A pure state vector or a density operator. Validated on construction;
/// immutable afterwards.
class QuantumState {
  public:
    static QuantumState pure(cvector amplitudes, const StateTolerances& tol = {});
    static QuantumState mixed(ComplexMatrix density, const StateTolerances& tol = {});

    bool is_pure() const { return pure_.has_value(); }
    std::size_t dim() const;

    const cvector& amplitudes() const;          // pure states only
    ComplexMatrix density() const;              // |psi><psi| for pure states
    const ComplexMatrix& density_ref() const;   // mixed states only

  private:
    QuantumState() = default;
    std::optional<cvector> pure_;
    std::optional<ComplexMatrix> mixed_;
};

/// Observable with its spectral decomposition cached at construction.
class HermitianObservable {
  public:
    explicit HermitianObservable(ComplexMatrix matrix, std::string name = "obs",
                                 double herm_tol = 1e-10,
                                 std::optional<double> merge_tol = std::nullopt);

    const ComplexMatrix& matrix() const { return matrix_; }
    const SpectralDecomposition& spectrum() const { return spectrum_; }
    const std::string& name() const { return name_; }
    std::size_t dim() const { return matrix_.dim(); }
    bool non_degenerate() const;

  private:
    ComplexMatrix matrix_;
    SpectralDecomposition spectrum_;
    std::string name_;
};

/// Exact split of an outcome probability into the classical total-probability
/// part and the interference correction, with the underlying cross terms.
struct CrossTerm {
    std::size_t k;
    std::size_t j;         // k < j
    double magnitude;      // |c_k||c_j|
    double phase;          // arg(c_k conj(c_j))
};

struct InterferenceDecomposition {
    double target_outcome;
    double classical_part;
    double interference_term;
    double total;
    std::vector<CrossTerm> cross_terms;
};

/// Born probability of `outcome`: ||E psi||^2 for pure states,
/// Tr[rho E] for mixed ones. Values outside [-1e-12, 1+1e-12] raise
/// NumericalIntegrity; inside, they are clamped to [0, 1].
double born_probability(const QuantumState& state, const HermitianObservable& obs,
                        double outcome);

/// Projective update. With an outcome: the normalized projected state
/// (pure stays pure). Without: the non-selective mixture, always returned
/// as a density operator.
QuantumState luders_update(const QuantumState& state, const HermitianObservable& obs,
                           std::optional<double> outcome = std::nullopt);

/// Probability of `second`=y after observing `first`=x, i.e. the Born
/// probability in the updated state.
double conditional_probability(const QuantumState& state, const HermitianObservable& first,
                               double x, const HermitianObservable& second, double y);

/// Total-probability decomposition of q(B=target) over A's outcomes for a
/// pure state and non-degenerate A, B. classical_part + interference_term
/// reconstructs the Born probability exactly (up to rounding).
InterferenceDecomposition quantum_ftp(const QuantumState& state, const HermitianObservable& a,
                                      const HermitianObservable& b, double target);

/// The interference term alone: the gap between the quantum probability and
/// the classical FTP built from the same conditionals. Positive means
/// constructive interference.
double probability_gain(const QuantumState& state, const HermitianObservable& a,
                        const HermitianObservable& b, double target);

bool are_compatible(const HermitianObservable& a, const HermitianObservable& b, double tol);

/// Joint distribution of a pairwise-commuting family:
/// p(x1..xn) = Tr[rho E1(x1)...En(xn)]. Throws IncompatibleFamily (with the
/// offending pair and commutator norm) otherwise.
JointDistribution jpd_for_compatible(const QuantumState& state,
                                     const std::vector<HermitianObservable>& observables,
                                     std::optional<double> tol = std::nullopt);

}  // namespace qprob
