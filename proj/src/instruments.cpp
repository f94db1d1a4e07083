#include "qprob/instruments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qprob/rng.hpp"

namespace qprob {

IndirectMeasurementModel::IndirectMeasurementModel(std::size_t probe_dim, QuantumState probe_state,
                                                   ComplexMatrix coupling,
                                                   HermitianObservable meter)
    : probe_dim_(probe_dim),
      probe_state_(std::move(probe_state)),
      coupling_(std::move(coupling)),
      meter_(std::move(meter)) {
    if (probe_dim_ < 1) throw DimMismatch("IndirectMeasurementModel: probe_dim must be >= 1");
    if (probe_state_.dim() != probe_dim_)
        throw DimMismatch("IndirectMeasurementModel: probe state dim " +
                          std::to_string(probe_state_.dim()) + " != probe_dim " +
                          std::to_string(probe_dim_));
    if (meter_.dim() != probe_dim_)
        throw DimMismatch("IndirectMeasurementModel: meter acts on dim " +
                          std::to_string(meter_.dim()) + ", probe has dim " +
                          std::to_string(probe_dim_));
    if (coupling_.dim() % probe_dim_ != 0)
        throw DimMismatch("IndirectMeasurementModel: coupling dim " +
                          std::to_string(coupling_.dim()) + " is not a multiple of probe_dim");
    const ComplexMatrix uu = coupling_.adjoint() * coupling_;
    const double dev = (uu - ComplexMatrix::identity(coupling_.dim())).max_abs();
    if (dev > 1e-10)
        throw NumericalIntegrity("IndirectMeasurementModel: coupling not unitary (deviation " +
                                 std::to_string(dev) + ")");
}

namespace {

// U (rho (x) R) U^dagger on the composite.
ComplexMatrix coupled_state(const IndirectMeasurementModel& model, const QuantumState& system) {
    if (system.dim() != model.system_dim())
        throw DimMismatch("instrument: system dim " + std::to_string(system.dim()) +
                          " != model system dim " + std::to_string(model.system_dim()));
    const ComplexMatrix joint = tensor_product(system.density(), model.probe_state().density());
    return model.coupling() * joint * model.coupling().adjoint();
}

ComplexMatrix meter_projector_on_composite(const IndirectMeasurementModel& model, double x,
                                           const char* where) {
    const auto idx = model.meter().spectrum().find_outcome(x);
    if (!idx)
        throw OutcomeNotInSpectrum(std::string(where) + ": outcome " + std::to_string(x) +
                                   " not in the meter spectrum");
    return tensor_product(ComplexMatrix::identity(model.system_dim()),
                          model.meter().spectrum().projectors[*idx]);
}

}  // namespace

double outcome_probability(const IndirectMeasurementModel& model, const QuantumState& system,
                           double x) {
    const ComplexMatrix evolved = coupled_state(model, system);
    const ComplexMatrix proj = meter_projector_on_composite(model, x, "outcome_probability");
    const double p = (proj * evolved).trace().real();
    if (p < -1e-12 || p > 1.0 + 1e-12)
        throw NumericalIntegrity("outcome_probability: value " + std::to_string(p) +
                                 " outside the clamp window");
    return std::clamp(p, 0.0, 1.0);
}

ComplexMatrix instrument_apply(const IndirectMeasurementModel& model, const QuantumState& system,
                               double x) {
    const ComplexMatrix evolved = coupled_state(model, system);
    const ComplexMatrix proj = meter_projector_on_composite(model, x, "instrument_apply");
    // Projecting on both sides keeps the operator Hermitian; with a
    // projector commuting through the partial trace it equals the
    // one-sided form.
    const ComplexMatrix reduced =
        partial_trace(proj * evolved * proj, model.system_dim(), model.probe_dim(),
                      TensorFactor::First);

    const double p = (proj * evolved).trace().real();
    const double tr = reduced.trace().real();
    if (std::abs(tr - p) > 1e-12 * std::max(1.0, std::abs(p)))
        throw NumericalIntegrity("instrument_apply: trace " + std::to_string(tr) +
                                 " disagrees with outcome probability " + std::to_string(p));
    return reduced;
}

double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
    check_same_dim(rho, sigma, "trace_distance");
    const EigenSystem eig = hermitian_eigensystem(rho - sigma);
    double sum = 0.0;
    for (double ev : eig.eigenvalues) sum += std::abs(ev);
    return 0.5 * sum;
}

RealizationReport verify_projective_realization(
    const HermitianObservable& observable, const IndirectMeasurementModel& model,
    const std::vector<std::pair<double, double>>& outcome_map, std::size_t grid_size,
    std::uint64_t grid_seed) {
    const auto& meter_spectrum = model.meter().spectrum();
    const auto& system_spectrum = observable.spectrum();
    if (observable.dim() != model.system_dim())
        throw DimMismatch("verify_projective_realization: observable dim mismatch");

    if (outcome_map.size() != meter_spectrum.outcome_count() ||
        outcome_map.size() != system_spectrum.outcome_count())
        throw OutcomeMismatch(
            "verify_projective_realization: outcome map must pair every meter outcome (" +
            std::to_string(meter_spectrum.outcome_count()) + ") with every system outcome (" +
            std::to_string(system_spectrum.outcome_count()) + ")");
    std::vector<bool> meter_seen(meter_spectrum.outcome_count(), false);
    std::vector<bool> system_seen(system_spectrum.outcome_count(), false);
    for (const auto& [mx, sx] : outcome_map) {
        const auto mi = meter_spectrum.find_outcome(mx);
        const auto si = system_spectrum.find_outcome(sx);
        if (!mi || !si)
            throw OutcomeMismatch("verify_projective_realization: unmapped outcome pair (" +
                                  std::to_string(mx) + ", " + std::to_string(sx) + ")");
        if (meter_seen[*mi] || system_seen[*si])
            throw OutcomeMismatch("verify_projective_realization: outcome map is not a bijection");
        meter_seen[*mi] = true;
        system_seen[*si] = true;
    }

    // Test grid: the observable's eigenstates first, then seeded random
    // pure states.
    const std::size_t dim = observable.dim();
    std::vector<QuantumState> grid;
    for (std::size_t col = 0; col < dim && grid.size() < grid_size; ++col) {
        cvector v(dim);
        for (std::size_t i = 0; i < dim; ++i) v[i] = system_spectrum.eigenbasis(i, col);
        grid.push_back(QuantumState::pure(std::move(v)));
    }
    CounterRng rng(grid_seed);
    while (grid.size() < grid_size) {
        cvector v(dim);
        for (auto& a : v) a = cplx(rng.next_normal(), rng.next_normal());
        const double n = vector_norm(v);
        for (auto& a : v) a /= n;
        grid.push_back(QuantumState::pure(std::move(v)));
    }

    constexpr double kPassTol = 1e-8;
    RealizationReport report;
    report.states_tested = grid.size();
    for (const auto& [meter_x, system_x] : outcome_map) {
        RealizationRow row{meter_x, system_x, 0.0, 0.0};
        for (const auto& state : grid) {
            const double q_model = outcome_probability(model, state, meter_x);
            const double q_born = born_probability(state, observable, system_x);
            row.max_probability_deviation =
                std::max(row.max_probability_deviation, std::abs(q_model - q_born));

            // Post-states are only comparable on branches both sides take.
            if (std::min(q_model, q_born) <= 1e-10) continue;
            ComplexMatrix post = instrument_apply(model, state, meter_x);
            post *= cplx(1.0 / post.trace().real(), 0.0);
            const QuantumState luders = luders_update(state, observable, system_x);
            row.max_trace_distance =
                std::max(row.max_trace_distance, trace_distance(post, luders.density()));
        }
        report.max_probability_deviation =
            std::max(report.max_probability_deviation, row.max_probability_deviation);
        report.max_trace_distance = std::max(report.max_trace_distance, row.max_trace_distance);
        report.rows.push_back(row);
    }
    report.passes =
        report.max_probability_deviation <= kPassTol && report.max_trace_distance <= kPassTol;
    return report;
}

}  // namespace qprob
