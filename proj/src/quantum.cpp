#include "qprob/quantum.hpp"

#include <algorithm>
#include <cmath>

namespace qprob {

QuantumState QuantumState::pure(cvector amplitudes, const StateTolerances& tol) {
    if (amplitudes.empty()) throw DimMismatch("QuantumState::pure: empty vector");
    for (const auto& a : amplitudes)
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw NumericalIntegrity("QuantumState::pure: non-finite amplitude");
    const double norm = vector_norm(amplitudes);
    if (std::abs(norm - 1.0) > tol.norm)
        throw NumericalIntegrity("QuantumState::pure: norm " + std::to_string(norm) +
                                 " deviates from 1 beyond tolerance");
    QuantumState s;
    s.pure_ = std::move(amplitudes);
    return s;
}

QuantumState QuantumState::mixed(ComplexMatrix density, const StateTolerances& tol) {
    if (!density.all_finite())
        throw NumericalIntegrity("QuantumState::mixed: non-finite entry");
    const double hdev = density.hermiticity_deviation();
    if (hdev > tol.hermiticity)
        throw NotHermitian("QuantumState::mixed: density operator not Hermitian", hdev);
    const double tr = density.trace().real();
    if (std::abs(tr - 1.0) > tol.trace)
        throw NumericalIntegrity("QuantumState::mixed: trace " + std::to_string(tr) +
                                 " deviates from 1 beyond tolerance");
    const auto eig = hermitian_eigensystem(density);
    if (eig.eigenvalues.front() < -tol.eigenvalue)
        throw NumericalIntegrity("QuantumState::mixed: negative eigenvalue " +
                                 std::to_string(eig.eigenvalues.front()));
    QuantumState s;
    s.mixed_ = std::move(density);
    return s;
}

std::size_t QuantumState::dim() const {
    return pure_ ? pure_->size() : mixed_->dim();
}

const cvector& QuantumState::amplitudes() const {
    if (!pure_) throw Error("QuantumState: amplitudes() on a mixed state");
    return *pure_;
}

ComplexMatrix QuantumState::density() const {
    if (mixed_) return *mixed_;
    return outer_product(*pure_, *pure_);
}

const ComplexMatrix& QuantumState::density_ref() const {
    if (!mixed_) throw Error("QuantumState: density_ref() on a pure state");
    return *mixed_;
}

HermitianObservable::HermitianObservable(ComplexMatrix matrix, std::string name, double herm_tol,
                                         std::optional<double> merge_tol)
    : matrix_(std::move(matrix)),
      spectrum_(spectral_decompose(matrix_, herm_tol, merge_tol)),
      name_(std::move(name)) {}

bool HermitianObservable::non_degenerate() const {
    for (std::size_t m : spectrum_.multiplicities)
        if (m != 1) return false;
    return true;
}

namespace {

constexpr double kClampWindow = 1e-12;
constexpr double kZeroBranch = 1e-12;

double checked_probability(double value, const char* where) {
    if (value < -kClampWindow || value > 1.0 + kClampWindow)
        throw NumericalIntegrity(std::string(where) + ": probability " + std::to_string(value) +
                                 " outside the clamp window");
    return std::clamp(value, 0.0, 1.0);
}

std::size_t outcome_index(const HermitianObservable& obs, double outcome, const char* where) {
    const auto idx = obs.spectrum().find_outcome(outcome);
    if (!idx)
        throw OutcomeNotInSpectrum(std::string(where) + ": outcome " + std::to_string(outcome) +
                                   " is not in the spectrum of " + obs.name());
    return *idx;
}

// Column k of the eigenbasis as a vector.
cvector basis_column(const SpectralDecomposition& sd, std::size_t col) {
    cvector v(sd.dim());
    for (std::size_t i = 0; i < sd.dim(); ++i) v[i] = sd.eigenbasis(i, col);
    return v;
}

}  // namespace

double born_probability(const QuantumState& state, const HermitianObservable& obs,
                        double outcome) {
    if (state.dim() != obs.dim())
        throw DimMismatch("born_probability: state dim " + std::to_string(state.dim()) +
                          " vs observable dim " + std::to_string(obs.dim()));
    const std::size_t k = outcome_index(obs, outcome, "born_probability");
    const ComplexMatrix& proj = obs.spectrum().projectors[k];
    double value;
    if (state.is_pure()) {
        const cvector projected = proj.apply(state.amplitudes());
        const double n = vector_norm(projected);
        value = n * n;
    } else {
        value = (state.density_ref() * proj).trace().real();
    }
    return checked_probability(value, "born_probability");
}

QuantumState luders_update(const QuantumState& state, const HermitianObservable& obs,
                           std::optional<double> outcome) {
    if (state.dim() != obs.dim()) throw DimMismatch("luders_update: dim mismatch");

    if (!outcome) {
        // Non-selective: sum_x E rho E.
        const ComplexMatrix rho = state.density();
        ComplexMatrix mixed(state.dim());
        for (const auto& proj : obs.spectrum().projectors) mixed += proj * rho * proj;
        return QuantumState::mixed(std::move(mixed));
    }

    const std::size_t k = outcome_index(obs, *outcome, "luders_update");
    const ComplexMatrix& proj = obs.spectrum().projectors[k];
    const double prob = born_probability(state, obs, *outcome);
    if (prob <= kZeroBranch)
        throw ZeroProbabilityBranch("luders_update: outcome " + std::to_string(*outcome) +
                                    " has probability " + std::to_string(prob));

    if (state.is_pure()) {
        cvector projected = proj.apply(state.amplitudes());
        const double n = vector_norm(projected);
        for (auto& a : projected) a /= n;
        return QuantumState::pure(std::move(projected));
    }
    ComplexMatrix updated = proj * state.density_ref() * proj;
    updated *= cplx(1.0 / prob, 0.0);
    return QuantumState::mixed(std::move(updated));
}

double conditional_probability(const QuantumState& state, const HermitianObservable& first,
                               double x, const HermitianObservable& second, double y) {
    const QuantumState after = luders_update(state, first, x);
    return born_probability(after, second, y);
}

InterferenceDecomposition quantum_ftp(const QuantumState& state, const HermitianObservable& a,
                                      const HermitianObservable& b, double target) {
    if (!state.is_pure())
        throw Error("quantum_ftp: defined for pure states only");
    if (state.dim() != a.dim() || a.dim() != b.dim())
        throw DimMismatch("quantum_ftp: dim mismatch");
    if (!a.non_degenerate())
        throw DegenerateSpectrum("quantum_ftp: observable " + a.name() +
                                 " has a degenerate spectrum");
    if (!b.non_degenerate())
        throw DegenerateSpectrum("quantum_ftp: observable " + b.name() +
                                 " has a degenerate spectrum");

    const std::size_t target_idx = outcome_index(b, target, "quantum_ftp");
    const cvector beta = basis_column(b.spectrum(), b.spectrum().basis_offset(target_idx));
    const cvector& psi = state.amplitudes();

    // c_j = <beta|alpha_j><alpha_j|psi>; the arbitrary eigenvector phases
    // cancel inside each c_j, and the beta phase is common to all of them.
    const std::size_t n = a.spectrum().outcome_count();
    std::vector<cplx> amps(n);
    for (std::size_t j = 0; j < n; ++j) {
        const cvector alpha = basis_column(a.spectrum(), a.spectrum().basis_offset(j));
        amps[j] = inner_product(beta, alpha) * inner_product(alpha, psi);
    }

    InterferenceDecomposition out;
    out.target_outcome = b.spectrum().eigenvalues[target_idx];
    out.classical_part = 0.0;
    cplx sum(0.0, 0.0);
    for (const auto& c : amps) {
        out.classical_part += std::norm(c);
        sum += c;
    }
    out.total = std::norm(sum);
    out.interference_term = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = k + 1; j < n; ++j) {
            const cplx cross = amps[k] * std::conj(amps[j]);
            const double mag = std::abs(cross);
            const double phase = (mag > 0.0) ? std::arg(cross) : 0.0;
            out.cross_terms.push_back(CrossTerm{k, j, mag, phase});
            out.interference_term += 2.0 * cross.real();
        }
    return out;
}

double probability_gain(const QuantumState& state, const HermitianObservable& a,
                        const HermitianObservable& b, double target) {
    return quantum_ftp(state, a, b, target).interference_term;
}

bool are_compatible(const HermitianObservable& a, const HermitianObservable& b, double tol) {
    check_same_dim(a.matrix(), b.matrix(), "are_compatible");
    return commutator(a.matrix(), b.matrix()).max_abs() <= tol;
}

JointDistribution jpd_for_compatible(const QuantumState& state,
                                     const std::vector<HermitianObservable>& observables,
                                     std::optional<double> tol) {
    if (observables.empty())
        throw ConfigInvalid("jpd_for_compatible: empty observable family");
    for (const auto& obs : observables)
        if (obs.dim() != state.dim())
            throw DimMismatch("jpd_for_compatible: observable " + obs.name() + " dim mismatch");

    double scale = 0.0;
    std::vector<ComplexMatrix> mats;
    for (const auto& obs : observables) {
        mats.push_back(obs.matrix());
        scale = std::max(scale, obs.matrix().max_abs());
    }
    const double commute_tol = tol.value_or(1e-8 * std::max(scale, 1.0));
    if (const auto bad = first_incompatible_pair(mats, commute_tol)) {
        const auto [i, j, norm] = *bad;
        throw IncompatibleFamily("jpd_for_compatible: observables " + observables[i].name() +
                                     " and " + observables[j].name() +
                                     " do not commute (norm " + std::to_string(norm) + ")",
                                 i, j, norm);
    }

    const ComplexMatrix rho = state.density();
    JointDistribution out;
    for (const auto& obs : observables) out.variables.push_back(obs.name());

    // Walk the outcome grid; commuting projectors make the product order
    // irrelevant, which is asserted below on each cell.
    std::vector<std::size_t> idx(observables.size(), 0);
    const auto advance = [&]() -> bool {
        std::size_t k = idx.size();
        while (k-- > 0) {
            if (++idx[k] < observables[k].spectrum().outcome_count()) return true;
            idx[k] = 0;
        }
        return false;
    };
    do {
        ComplexMatrix forward = observables[0].spectrum().projectors[idx[0]];
        for (std::size_t k = 1; k < observables.size(); ++k)
            forward = forward * observables[k].spectrum().projectors[idx[k]];
        ComplexMatrix backward = observables.back().spectrum().projectors[idx.back()];
        for (std::size_t k = observables.size() - 1; k-- > 0;)
            backward = backward * observables[k].spectrum().projectors[idx[k]];

        const double p_fwd = (rho * forward).trace().real();
        const double p_bwd = (rho * backward).trace().real();
        if (std::abs(p_fwd - p_bwd) > 1e-10)
            throw NumericalIntegrity(
                "jpd_for_compatible: projector product is order-sensitive (" +
                std::to_string(p_fwd) + " vs " + std::to_string(p_bwd) + ")");

        const double p = checked_probability(p_fwd, "jpd_for_compatible");
        if (p > 0.0) {
            std::vector<double> tuple(observables.size());
            for (std::size_t k = 0; k < observables.size(); ++k)
                tuple[k] = observables[k].spectrum().eigenvalues[idx[k]];
            out.support.push_back(std::move(tuple));
            out.probabilities.push_back(p);
        }
    } while (advance());
    return out;
}

}  // namespace qprob
