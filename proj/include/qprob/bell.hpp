#pragma once

#include <cstdint>
#include <vector>

#include "qprob/quantum.hpp"
#include "qprob/rng.hpp"

namespace qprob {

/// Two local measurement pairs with spectra bounded in [-1, 1]; the
/// correlation statistic is <A1 B1> + <A1 B2> + <A2 B1> - <A2 B2>.
struct CHSHSetting {
    HermitianObservable a1, a2;  // Alice
    HermitianObservable b1, b2;  // Bob
    std::size_t dim_a() const { return a1.dim(); }
    std::size_t dim_b() const { return b1.dim(); }

    CHSHSetting(HermitianObservable a1, HermitianObservable a2, HermitianObservable b1,
                HermitianObservable b2);
};

struct CHSHResult {
    double bell_operator_max;      // largest-|eigenvalue| of the Bell operator
    QuantumState optimal_state;    // matching unit eigenvector
    bool violated;                 // bell_operator_max > 2 + 1e-8
    bool locally_incompatible;
    double commutator_norm_a;
    double commutator_norm_b;
};

/// A1 (x) (B1+B2) + A2 (x) (B1-B2).
ComplexMatrix bell_operator(const CHSHSetting& setting);

/// The CHSH statistic of `state` under `setting`.
double chsh_value(const QuantumState& state, const CHSHSetting& setting);

/// Maximum of the statistic over all states: the largest-magnitude
/// eigenvalue of the Bell operator, achieved at an eigenstate.
CHSHResult max_chsh(const CHSHSetting& setting);

/// Both local pairs non-commuting beyond tol. A negative tol requests the
/// default 1e-8 * max observable norm.
bool local_incompatibility(const CHSHSetting& setting, double tol = -1.0);

enum class SweepConstraint {
    None,                // fully random settings
    CommutingAlice,      // force [A1, A2] = 0
    CommutingBob,        // force [B1, B2] = 0
    CommutingEitherSide  // per trial, one side (chosen at random) commutes
};

struct SweepTrial {
    std::size_t trial;
    double commutator_norm_a;
    double commutator_norm_b;
    double bell_max;
    bool violated;
    bool locally_incompatible;
};

struct SweepReport {
    std::vector<SweepTrial> trials;
    std::size_t count_compatible_violated = 0;    // must stay 0
    std::size_t count_compatible_ok = 0;
    std::size_t count_incompatible_violated = 0;
    std::size_t count_incompatible_ok = 0;        // counterexample candidates
    std::vector<std::size_t> counterexample_candidates;
    double max_bell = 0.0;
    /// Observed violation rate among locally incompatible settings (the
    /// direction the sweep reports rather than asserts).
    double violation_rate_incompatible = 0.0;
};

/// Random-settings sweep: Gaussian Hermitian observables rescaled to
/// spectra in [-1, 1], one RNG stream per trial so results are independent
/// of scheduling. Trials run in parallel up to QPROB_THREADS.
SweepReport incompatibility_sweep(std::size_t n_trials, std::size_t dim_a, std::size_t dim_b,
                                  std::uint64_t seed,
                                  SweepConstraint constraint = SweepConstraint::None);

/// Random Hermitian matrix with spectrum affinely rescaled into [-1, 1].
ComplexMatrix random_bounded_observable(std::size_t dim, CounterRng& rng);

}  // namespace qprob
