#include "qprob/frequency.hpp"

#include <algorithm>
#include <cmath>

namespace qprob {

namespace {

struct BornCdf {
    std::vector<double> outcomes;
    std::vector<double> cumulative;  // last entry pinned to 1

    double draw(double u) const {
        for (std::size_t k = 0; k < cumulative.size(); ++k)
            if (u < cumulative[k]) return outcomes[k];
        return outcomes.back();
    }
};

BornCdf born_cdf(const QuantumState& state, const HermitianObservable& obs) {
    BornCdf cdf;
    double acc = 0.0;
    for (double outcome : obs.spectrum().eigenvalues) {
        acc += born_probability(state, obs, outcome);
        cdf.outcomes.push_back(outcome);
        cdf.cumulative.push_back(acc);
    }
    cdf.cumulative.back() = std::max(cdf.cumulative.back(), 1.0);
    return cdf;
}

}  // namespace

MeasurementRecord sample_outcomes(const QuantumState& state, const HermitianObservable& obs,
                                  std::size_t n, std::uint64_t seed, std::uint64_t stream) {
    if (n < 1) throw ConfigInvalid("sample_outcomes: need n >= 1");
    const BornCdf cdf = born_cdf(state, obs);
    MeasurementRecord record{.outcomes = std::vector<double>(n), .observable = obs.name(),
                             .seed = seed};
    const CounterRng rng(seed, stream);
    for (std::size_t i = 0; i < n; ++i) record.outcomes[i] = cdf.draw(rng.double_at(i));
    return record;
}

double empirical_frequency(const MeasurementRecord& record, double event_outcome) {
    if (record.outcomes.empty()) throw EmptyRecord("empirical_frequency: empty record");
    std::size_t count = 0;
    for (double o : record.outcomes)
        if (o == event_outcome) ++count;
    return static_cast<double>(count) / static_cast<double>(record.outcomes.size());
}

std::vector<LlnRow> lln_convergence(const QuantumState& state, const HermitianObservable& obs,
                                    double outcome, const std::vector<std::size_t>& n_grid,
                                    std::uint64_t seed) {
    if (n_grid.empty()) return {};
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1])
            throw ConfigInvalid("lln_convergence: n_grid must be increasing");

    // Compare draws against the spectrum's own representation of the outcome.
    const auto idx = obs.spectrum().find_outcome(outcome);
    if (!idx)
        throw OutcomeNotInSpectrum("lln_convergence: outcome " + std::to_string(outcome) +
                                   " not in the spectrum of " + obs.name());
    outcome = obs.spectrum().eigenvalues[*idx];

    const double p = born_probability(state, obs, outcome);
    const BornCdf cdf = born_cdf(state, obs);
    const CounterRng rng(seed, 0);

    std::vector<LlnRow> rows;
    std::size_t hits = 0;
    std::size_t drawn = 0;
    for (std::size_t n : n_grid) {
        for (; drawn < n; ++drawn)
            if (cdf.draw(rng.double_at(drawn)) == outcome) ++hits;
        const double freq = static_cast<double>(hits) / static_cast<double>(n);
        const double deviation = std::abs(freq - p);
        const double envelope = 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
        rows.push_back(LlnRow{n, freq, deviation, envelope, deviation <= envelope});
    }
    return rows;
}

ClickRecord simulate_clicks(ClickSource source, std::size_t n_windows, double mean_count,
                            std::uint64_t seed) {
    if (n_windows < 1) throw ConfigInvalid("simulate_clicks: need n_windows >= 1");
    if (!(mean_count > 0.0)) throw ConfigInvalid("simulate_clicks: mean_count must be > 0");

    ClickRecord record;
    record.source = source;
    record.detector_a.resize(n_windows);
    record.detector_b.resize(n_windows);

    // Streams: 3w for the shared/window draw, 3w+1 and 3w+2 for the two
    // detectors, so every window is independent of ordering.
    for (std::size_t w = 0; w < n_windows; ++w) {
        CounterRng shared(seed, 3 * w);
        CounterRng det_a(seed, 3 * w + 1);
        CounterRng det_b(seed, 3 * w + 2);
        switch (source) {
            case ClickSource::SinglePhoton: {
                const bool to_a = shared.next_double() < 0.5;
                record.detector_a[w] = to_a ? 1 : 0;
                record.detector_b[w] = to_a ? 0 : 1;
                break;
            }
            case ClickSource::Coherent: {
                record.detector_a[w] = det_a.next_poisson(mean_count / 2.0);
                record.detector_b[w] = det_b.next_poisson(mean_count / 2.0);
                break;
            }
            case ClickSource::Thermal: {
                const double intensity = shared.next_exponential(mean_count);
                record.detector_a[w] = det_a.next_poisson(intensity / 2.0);
                record.detector_b[w] = det_b.next_poisson(intensity / 2.0);
                break;
            }
        }
    }
    return record;
}

double g2_zero(const ClickRecord& clicks) {
    const std::size_t n = clicks.windows();
    if (n < 1 || clicks.detector_b.size() != n)
        throw ConfigInvalid("g2_zero: empty or ragged click record");
    double sum_a = 0.0, sum_b = 0.0, sum_ab = 0.0;
    for (std::size_t w = 0; w < n; ++w) {
        const double a = static_cast<double>(clicks.detector_a[w]);
        const double b = static_cast<double>(clicks.detector_b[w]);
        sum_a += a;
        sum_b += b;
        sum_ab += a * b;
    }
    if (sum_a == 0.0 || sum_b == 0.0)
        throw DegenerateRecord("g2_zero: a detector never clicked");
    const double nd = static_cast<double>(n);
    return (sum_ab / nd) / ((sum_a / nd) * (sum_b / nd));
}

}  // namespace qprob
