#pragma once

#include <cstdint>
#include <vector>

#include "qprob/quantum.hpp"

namespace qprob {

/// Probe space, initial probe state, coupling unitary on system(x)probe,
/// and the meter observable read out on the probe after the interaction.
class IndirectMeasurementModel {
  public:
    IndirectMeasurementModel(std::size_t probe_dim, QuantumState probe_state,
                             ComplexMatrix coupling, HermitianObservable meter);

    std::size_t probe_dim() const { return probe_dim_; }
    std::size_t system_dim() const { return coupling_.dim() / probe_dim_; }
    const QuantumState& probe_state() const { return probe_state_; }
    const ComplexMatrix& coupling() const { return coupling_; }
    const HermitianObservable& meter() const { return meter_; }

  private:
    std::size_t probe_dim_;
    QuantumState probe_state_;
    ComplexMatrix coupling_;
    HermitianObservable meter_;
};

/// Probability of meter outcome x: Tr[(I (x) E(x)) U (rho (x) R) U^dagger].
double outcome_probability(const IndirectMeasurementModel& model, const QuantumState& system,
                           double x);

/// The instrument map for outcome x: the unnormalized post-measurement
/// system operator Tr_probe[(I (x) E(x)) U (rho (x) R) U^dagger (I (x) E(x))].
/// Its trace equals outcome_probability (asserted as a runtime cross-check).
ComplexMatrix instrument_apply(const IndirectMeasurementModel& model, const QuantumState& system,
                               double x);

/// One meter outcome's worth of deviation from the projective scheme.
struct RealizationRow {
    double meter_outcome;
    double system_outcome;
    double max_probability_deviation;
    double max_trace_distance;
};

struct RealizationReport {
    std::vector<RealizationRow> rows;
    std::size_t states_tested = 0;
    bool passes = false;  // all deviations <= 1e-8
    double max_probability_deviation = 0.0;
    double max_trace_distance = 0.0;
};

/// Check whether the model realizes projective measurement of `observable`:
/// outcome probabilities and normalized post-states are compared against
/// the Born rule and the projective update on a grid of test states
/// (targeting the observable's eigenstates plus seeded random states).
/// `outcome_map` pairs each meter eigenvalue with a system eigenvalue and
/// must be a declared bijection.
RealizationReport verify_projective_realization(
    const HermitianObservable& observable, const IndirectMeasurementModel& model,
    const std::vector<std::pair<double, double>>& outcome_map, std::size_t grid_size = 20,
    std::uint64_t grid_seed = 20240901);

/// (1/2) ||rho - sigma||_1.
double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma);

}  // namespace qprob
