#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qprob/quantum.hpp"
#include "qprob/rng.hpp"

namespace qprob {

/// Outcome sequence of repeated measurements, reproducible from the seed.
struct MeasurementRecord {
    std::vector<double> outcomes;
    std::string observable;
    std::uint64_t seed;
    std::size_t n() const { return outcomes.size(); }
};

/// N i.i.d. draws from the Born distribution via inverse CDF on the
/// counter-based generator; outcome i depends only on (seed, stream, i).
MeasurementRecord sample_outcomes(const QuantumState& state, const HermitianObservable& obs,
                                  std::size_t n, std::uint64_t seed, std::uint64_t stream = 0);

/// k_N(E)/N for the event {outcome}.
double empirical_frequency(const MeasurementRecord& record, double event_outcome);

struct LlnRow {
    std::size_t n;
    double frequency;
    double deviation;     // |nu_N - p|
    double envelope;      // 4 sqrt(p(1-p)/N)
    bool within_envelope;
};

/// Frequencies over nested prefixes of one sample stream, against the
/// 4-sigma binomial envelope (per-point false-alarm rate about 6e-5).
std::vector<LlnRow> lln_convergence(const QuantumState& state, const HermitianObservable& obs,
                                    double outcome, const std::vector<std::size_t>& n_grid,
                                    std::uint64_t seed);

enum class ClickSource { SinglePhoton, Coherent, Thermal };

/// Per-window detector counts behind a 50/50 splitter.
struct ClickRecord {
    std::vector<std::uint64_t> detector_a;
    std::vector<std::uint64_t> detector_b;
    ClickSource source;
    std::size_t windows() const { return detector_a.size(); }
};

/// Single photon: exactly one click per window, routed a/b with
/// probability 1/2. Coherent: independent Poisson(mean/2) per detector.
/// Thermal: a shared exponential intensity drives both Poissons (bunching).
ClickRecord simulate_clicks(ClickSource source, std::size_t n_windows, double mean_count,
                            std::uint64_t seed);

/// Zero-delay second-order coherence estimated from same-window
/// coincidences: <n_a n_b> / (<n_a><n_b>).
double g2_zero(const ClickRecord& clicks);

}  // namespace qprob
