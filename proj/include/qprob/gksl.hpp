#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qprob/quantum.hpp"

namespace qprob {

struct JumpOperator {
    ComplexMatrix matrix;
    double rate;  // gamma_k >= 0
};

/// Master-equation model d rho/dt = -i[H, rho] + D(rho). The dissipator is
/// either assembled from jump operators,
///   D(rho) = sum_k gamma_k (L_k rho L_k^dagger - {L_k^dagger L_k, rho}/2),
/// or supplied directly as a dim^2 x dim^2 superoperator acting on
/// row-stacked density operators (checked to annihilate the trace).
class LindbladModel {
  public:
    LindbladModel(ComplexMatrix hamiltonian, std::vector<JumpOperator> jumps);
    static LindbladModel from_superoperator(ComplexMatrix hamiltonian,
                                            ComplexMatrix dissipator_superop);

    std::size_t dim() const { return hamiltonian_.dim(); }
    const ComplexMatrix& hamiltonian() const { return hamiltonian_; }
    /// Full generator as a dim^2 x dim^2 matrix on row-stacked operators.
    const ComplexMatrix& generator() const { return generator_; }

    /// G(rho) as a matrix.
    ComplexMatrix apply_generator(const ComplexMatrix& rho) const;

  private:
    LindbladModel() = default;
    void finalize(ComplexMatrix dissipator);

    ComplexMatrix hamiltonian_;
    ComplexMatrix generator_;
};

struct TrajectoryPoint {
    double t;
    QuantumState state;
};

struct IntegrateOptions {
    bool check_positivity = true;   // eigenvalue floor on stored points
    double trace_tol = 1e-8;
    double eigenvalue_floor = -1e-7;
    std::size_t record_stride = 1;  // store every k-th step (plus t = 0 and t_final)
};

/// Fixed-step RK4 on the vectorized equation. Stored points are validated
/// (trace within trace_tol of 1, eigenvalues above the floor); a drift
/// beyond tolerance raises StepTooLarge with a suggestion to shrink dt.
std::vector<TrajectoryPoint> integrate(const LindbladModel& model, const QuantumState& rho0,
                                       double t_final, double dt,
                                       const IntegrateOptions& options = {});

struct SteadyStateReport {
    QuantumState steady_state;
    double residual;               // max_abs(G(rho_A))
    bool diagonal_in_basis;        // off-diagonals in the observable eigenbasis <= 1e-8
    double max_offdiagonal;
    std::vector<double> eigen_populations;  // lambda_x per observable outcome
    bool unique;                   // false: population-indexed family, rho0-dependent limit returned
    std::size_t null_space_dimension;
    double convergence_rate;       // fitted exponent (NaN when nothing decays)
    double fit_quality;            // R^2 of the log-distance fit (NaN when nothing decays)
    double cross_check_distance;   // trace distance between extraction and long-time limit
};

struct SteadyStateOptions {
    double t_long = 40.0;
    double dt = 0.01;
    double residual_tol = 1e-8;
    double cross_check_tol = 1e-6;
    double null_tol = 1e-10;  // relative eigenvalue threshold on G^dagger G
};

/// Steady state via the null space of the vectorized generator, restricted
/// to trace-one Hermitian operators, cross-checked against long-time
/// integration from rho0. With a multi-dimensional null space the
/// rho0-dependent long-time limit is returned and unique=false. Populations
/// are read in the eigenbasis of `observable`.
SteadyStateReport steady_state(const LindbladModel& model, const HermitianObservable& observable,
                               const QuantumState& rho0, const SteadyStateOptions& options = {});

struct RateFitOptions {
    double t_final = 10.0;
    double dt = 0.005;
    double tail_fraction = 0.6;      // fit over the trailing part of the trajectory
    double transient_cut = 0.5;      // drop points before distance falls below cut * d(0)
    double noise_floor = 1e-13;      // and points below the floor
};

/// Least-squares fit of log ||rho(t) - rho_A||_F over the trajectory tail.
/// Returns (slope, R^2); slope < 0 for decaying dynamics. NoDecay when the
/// distance does not decrease over the fit window.
std::pair<double, double> convergence_rate(const LindbladModel& model, const QuantumState& rho0,
                                           const HermitianObservable& observable,
                                           const RateFitOptions& options = {});

/// The generator's unique normalizable null-space state, when the null
/// space is one-dimensional; nullopt for population-indexed families.
std::optional<ComplexMatrix> unique_steady_state(const LindbladModel& model);

}  // namespace qprob
