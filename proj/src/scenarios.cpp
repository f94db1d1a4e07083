#include "qprob/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "qprob/bell.hpp"
#include "qprob/frequency.hpp"
#include "qprob/gksl.hpp"
#include "qprob/instruments.hpp"
#include "qprob/io.hpp"
#include "qprob/logic.hpp"
#include "qprob/quantum.hpp"

namespace qprob {

namespace fs = std::filesystem;
using io::json;

namespace {

using Measured = std::map<std::string, double>;

std::string indexed(const std::string& base, std::size_t i) {
    return base + "[" + std::to_string(i) + "]";
}

std::uint64_t seed_field(const json& config, const std::string& where) {
    if (!config.contains("seed"))
        throw ConfigInvalid(where + ": sampling scenarios must declare a seed");
    return config["seed"].get<std::uint64_t>();
}

Measured run_ftp(const json& config, const std::string& where) {
    const QuantumState state = io::state_from_json(config.at("state"), where + ".state");
    const HermitianObservable a(io::matrix_from_json(config.at("observable_a"), where + ".observable_a"), "A");
    const HermitianObservable b(io::matrix_from_json(config.at("observable_b"), where + ".observable_b"), "B");

    Measured m;
    m["commutator_norm"] = commutator(a.matrix(), b.matrix()).max_abs();
    double totals_sum = 0.0;
    double max_interference = 0.0;
    double max_reconstruction_error = 0.0;
    const auto& outcomes = b.spectrum().eigenvalues;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const InterferenceDecomposition d = quantum_ftp(state, a, b, outcomes[i]);
        const double born = born_probability(state, b, outcomes[i]);
        m[indexed("outcome", i)] = outcomes[i];
        m[indexed("classical_part", i)] = d.classical_part;
        m[indexed("interference_term", i)] = d.interference_term;
        m[indexed("total", i)] = d.total;
        m[indexed("born", i)] = born;
        totals_sum += d.total;
        max_interference = std::max(max_interference, std::abs(d.interference_term));
        max_reconstruction_error =
            std::max({max_reconstruction_error,
                      std::abs(d.classical_part + d.interference_term - d.total),
                      std::abs(d.total - born)});
    }
    m["totals_sum"] = totals_sum;
    m["max_abs_interference"] = max_interference;
    m["max_reconstruction_error"] = max_reconstruction_error;
    return m;
}

Measured run_chsh(const json& config, const std::string& where) {
    const CHSHSetting setting(
        HermitianObservable(io::matrix_from_json(config.at("a1"), where + ".a1"), "A1"),
        HermitianObservable(io::matrix_from_json(config.at("a2"), where + ".a2"), "A2"),
        HermitianObservable(io::matrix_from_json(config.at("b1"), where + ".b1"), "B1"),
        HermitianObservable(io::matrix_from_json(config.at("b2"), where + ".b2"), "B2"));
    const CHSHResult result = max_chsh(setting);

    Measured m;
    m["bell_max"] = result.bell_operator_max;
    m["violated"] = result.violated ? 1.0 : 0.0;
    m["locally_incompatible"] = result.locally_incompatible ? 1.0 : 0.0;
    m["commutator_norm_a"] = result.commutator_norm_a;
    m["commutator_norm_b"] = result.commutator_norm_b;
    m["chsh_value_optimal_abs"] = std::abs(chsh_value(result.optimal_state, setting));
    if (config.contains("state"))
        m["chsh_value_state"] =
            chsh_value(io::state_from_json(config["state"], where + ".state"), setting);
    return m;
}

SweepConstraint constraint_from_string(const std::string& s, const std::string& where) {
    if (s == "none") return SweepConstraint::None;
    if (s == "commuting_alice") return SweepConstraint::CommutingAlice;
    if (s == "commuting_bob") return SweepConstraint::CommutingBob;
    if (s == "commuting_either") return SweepConstraint::CommutingEitherSide;
    throw ConfigInvalid(where + ".constraint: unknown value '" + s + "'");
}

Measured run_chsh_sweep(const json& config, const std::string& where) {
    const auto trials = config.at("trials").get<std::size_t>();
    const auto dim_a = config.value("dim_a", 2);
    const auto dim_b = config.value("dim_b", 2);
    const std::uint64_t seed = seed_field(config, where);
    const SweepConstraint constraint =
        constraint_from_string(config.value("constraint", "none"), where);

    const SweepReport report = incompatibility_sweep(trials, dim_a, dim_b, seed, constraint);
    Measured m;
    m["trials"] = static_cast<double>(trials);
    m["compatible_violated"] = static_cast<double>(report.count_compatible_violated);
    m["compatible_ok"] = static_cast<double>(report.count_compatible_ok);
    m["incompatible_violated"] = static_cast<double>(report.count_incompatible_violated);
    m["incompatible_ok"] = static_cast<double>(report.count_incompatible_ok);
    m["max_bell"] = report.max_bell;
    m["violation_rate_incompatible"] = report.violation_rate_incompatible;
    return m;
}

Measured run_instrument(const json& config, const std::string& where) {
    const IndirectMeasurementModel model =
        io::instrument_model_from_json(config.at("model"), where + ".model");
    const HermitianObservable observable(
        io::matrix_from_json(config.at("observable"), where + ".observable"), "A");
    std::vector<std::pair<double, double>> outcome_map;
    for (const auto& pair : config.at("outcome_map")) {
        if (!pair.is_array() || pair.size() != 2)
            throw ConfigInvalid(where + ".outcome_map: expected [meter, system] pairs");
        outcome_map.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    const auto grid_size = config.value("grid_size", 20);
    const std::uint64_t grid_seed = config.value("grid_seed", 20240901);

    const RealizationReport report =
        verify_projective_realization(observable, model, outcome_map, grid_size, grid_seed);

    // Meter-outcome normalization over the same grid.
    double prob_sum_max_error = 0.0;
    CounterRng rng(grid_seed);
    for (std::size_t s = 0; s < grid_size; ++s) {
        cvector v(model.system_dim());
        for (auto& amp : v) amp = cplx(rng.next_normal(), rng.next_normal());
        const double norm = vector_norm(v);
        for (auto& amp : v) amp /= norm;
        const QuantumState state = QuantumState::pure(std::move(v));
        double sum = 0.0;
        for (double x : model.meter().spectrum().eigenvalues)
            sum += outcome_probability(model, state, x);
        prob_sum_max_error = std::max(prob_sum_max_error, std::abs(sum - 1.0));
    }

    Measured m;
    m["max_probability_deviation"] = report.max_probability_deviation;
    m["max_trace_distance"] = report.max_trace_distance;
    m["passes"] = report.passes ? 1.0 : 0.0;
    m["states_tested"] = static_cast<double>(report.states_tested);
    m["prob_sum_max_error"] = prob_sum_max_error;
    return m;
}

Measured run_gksl(const json& config, const std::string& where) {
    const LindbladModel model = io::lindblad_model_from_json(config.at("model"), where + ".model");
    const QuantumState rho0 = io::state_from_json(config.at("rho0"), where + ".rho0");
    const HermitianObservable observable(
        io::matrix_from_json(config.at("observable"), where + ".observable"), "A");

    const SteadyStateReport report = steady_state(model, observable, rho0);

    Measured m;
    m["residual"] = report.residual;
    m["diagonal_in_basis"] = report.diagonal_in_basis ? 1.0 : 0.0;
    m["max_offdiagonal"] = report.max_offdiagonal;
    m["unique"] = report.unique ? 1.0 : 0.0;
    m["null_space_dimension"] = static_cast<double>(report.null_space_dimension);
    m["convergence_rate"] = report.convergence_rate;
    m["fit_quality"] = report.fit_quality;
    m["cross_check_distance"] = report.cross_check_distance;
    double pop_born_max_diff = 0.0;
    for (std::size_t k = 0; k < report.eigen_populations.size(); ++k) {
        m[indexed("population", k)] = report.eigen_populations[k];
        const double born = born_probability(report.steady_state, observable,
                                             observable.spectrum().eigenvalues[k]);
        pop_born_max_diff = std::max(pop_born_max_diff,
                                     std::abs(report.eigen_populations[k] - born));
    }
    m["population_born_max_diff"] = pop_born_max_diff;
    return m;
}

Measured run_lln(const json& config, const std::string& where) {
    const auto pairs = config.value("pairs", 50);
    const auto n = config.at("n").get<std::size_t>();
    const auto dim_lo = config.value("dim_lo", 2);
    const auto dim_hi = config.value("dim_hi", 4);
    const std::uint64_t seed = seed_field(config, where);

    std::size_t breaches = 0;
    std::size_t checks = 0;
    double max_ratio = 0.0;
    for (std::size_t p = 0; p < static_cast<std::size_t>(pairs); ++p) {
        CounterRng rng(seed, 1000 + p);
        const std::size_t dim = dim_lo + static_cast<std::size_t>(rng.next_double() *
                                                                  (dim_hi - dim_lo + 1));
        const HermitianObservable obs(random_bounded_observable(dim, rng), "obs");
        cvector v(dim);
        for (auto& amp : v) amp = cplx(rng.next_normal(), rng.next_normal());
        const double norm = vector_norm(v);
        for (auto& amp : v) amp /= norm;
        const QuantumState state = QuantumState::pure(std::move(v));

        const MeasurementRecord record = sample_outcomes(state, obs, n, seed, 2000000 + p);
        for (double outcome : obs.spectrum().eigenvalues) {
            const double prob = born_probability(state, obs, outcome);
            const double freq = empirical_frequency(record, outcome);
            const double envelope = 4.0 * std::sqrt(prob * (1.0 - prob) / static_cast<double>(n));
            const double deviation = std::abs(freq - prob);
            ++checks;
            if (deviation > envelope) ++breaches;
            if (envelope > 0.0) max_ratio = std::max(max_ratio, deviation / envelope);
        }
    }
    Measured m;
    m["pairs"] = static_cast<double>(pairs);
    m["checks"] = static_cast<double>(checks);
    m["breaches"] = static_cast<double>(breaches);
    m["max_envelope_ratio"] = max_ratio;
    return m;
}

Measured run_g2(const json& config, const std::string& where) {
    const auto windows = config.at("windows").get<std::size_t>();
    const double mean_count = config.value("mean_count", 1.0);
    const std::uint64_t seed = seed_field(config, where);

    Measured m;
    m["g2_single_photon"] =
        g2_zero(simulate_clicks(ClickSource::SinglePhoton, windows, mean_count, seed));
    m["g2_coherent"] = g2_zero(simulate_clicks(ClickSource::Coherent, windows, mean_count, seed));
    m["g2_thermal"] = g2_zero(simulate_clicks(ClickSource::Thermal, windows, mean_count, seed));
    m["windows"] = static_cast<double>(windows);
    return m;
}

Measured run_logic(const json& config, const std::string& where) {
    (void)where;
    const std::size_t commuting_trials = config.value("commuting_trials", 200);
    const std::size_t random_triples = config.value("random_triples", 500);
    const std::size_t dim = config.value("dim", 4);
    const std::uint64_t seed = config.value("seed", 7);

    Measured m;
    // Canonical counterexample: a along the first basis vector, b and c the
    // two diagonal directions of the same plane.
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Subspace a = Subspace::span(2, {{cplx(1, 0), cplx(0, 0)}});
    const Subspace b = Subspace::span(2, {{cplx(inv_sqrt2, 0), cplx(inv_sqrt2, 0)}});
    const Subspace c = Subspace::span(2, {{cplx(inv_sqrt2, 0), cplx(-inv_sqrt2, 0)}});
    const DistributivityResult canonical = distributivity_check(a, b, c);
    m["canonical_equal"] = canonical.equal ? 1.0 : 0.0;
    m["canonical_lhs_vs_a"] = (canonical.lhs.projector() - a.projector()).max_abs();
    m["canonical_rhs_rank"] = static_cast<double>(canonical.rhs.rank());
    m["canonical_lhs_rank"] = static_cast<double>(canonical.lhs.rank());

    // Pairwise-commuting triples must distribute.
    std::size_t commuting_failures = 0;
    double max_commuting_diff = 0.0;
    for (std::size_t t = 0; t < commuting_trials; ++t) {
        CounterRng rng(seed, t);
        const ComplexMatrix h = random_bounded_observable(dim, rng);
        const EigenSystem eig = hermitian_eigensystem(h);
        auto random_diag_subspace = [&]() {
            std::vector<cvector> vecs;
            for (std::size_t k = 0; k < dim; ++k) {
                if (rng.next_double() < 0.5) continue;
                cvector v(dim);
                for (std::size_t i = 0; i < dim; ++i) v[i] = eig.eigenvectors(i, k);
                vecs.push_back(std::move(v));
            }
            return Subspace::span(dim, vecs);
        };
        const DistributivityResult res =
            distributivity_check(random_diag_subspace(), random_diag_subspace(),
                                 random_diag_subspace());
        max_commuting_diff = std::max(
            max_commuting_diff, (res.lhs.projector() - res.rhs.projector()).max_abs());
        if (!res.equal) ++commuting_failures;
    }
    m["commuting_trials"] = static_cast<double>(commuting_trials);
    m["commuting_failures"] = static_cast<double>(commuting_failures);
    m["max_commuting_diff"] = max_commuting_diff;

    // Random triples: the half-distributive ordering is asserted inside
    // distributivity_check; count survivors.
    std::size_t ordering_checked = 0;
    for (std::size_t t = 0; t < random_triples; ++t) {
        CounterRng rng(seed, 100000 + t);
        auto random_subspace = [&]() {
            std::vector<cvector> vecs;
            const std::size_t count = 1 + static_cast<std::size_t>(rng.next_double() * (dim - 1));
            for (std::size_t k = 0; k < count; ++k) {
                cvector v(dim);
                for (auto& amp : v) amp = cplx(rng.next_normal(), rng.next_normal());
                vecs.push_back(std::move(v));
            }
            return Subspace::span(dim, vecs);
        };
        distributivity_check(random_subspace(), random_subspace(), random_subspace());
        ++ordering_checked;
    }
    m["ordering_checked"] = static_cast<double>(ordering_checked);
    return m;
}

Measured compute_measured(const Scenario& scenario) {
    const std::string where = "scenario " + scenario.name + " config";
    try {
        if (scenario.kind == "ftp") return run_ftp(scenario.config, where);
        if (scenario.kind == "chsh") return run_chsh(scenario.config, where);
        if (scenario.kind == "chsh_sweep") return run_chsh_sweep(scenario.config, where);
        if (scenario.kind == "instrument") return run_instrument(scenario.config, where);
        if (scenario.kind == "gksl") return run_gksl(scenario.config, where);
        if (scenario.kind == "lln") return run_lln(scenario.config, where);
        if (scenario.kind == "g2") return run_g2(scenario.config, where);
        if (scenario.kind == "logic") return run_logic(scenario.config, where);
    } catch (const json::exception& e) {
        throw ConfigInvalid(where + ": " + e.what());
    }
    throw ConfigInvalid("scenario " + scenario.name + ": unknown kind '" + scenario.kind + "'");
}

}  // namespace

Scenario scenario_from_json(const json& j, const std::string& where) {
    Scenario s;
    try {
        s.name = j.at("name").get<std::string>();
        s.description = j.value("description", "");
        s.kind = j.at("kind").get<std::string>();
        s.config = j.value("config", json::object());
        for (const auto& a : j.value("expected", json::array())) {
            Assertion assertion;
            assertion.name = a.at("name").get<std::string>();
            assertion.note = a.value("note", "");
            int modes = 0;
            if (a.contains("value")) {
                assertion.value = a["value"].get<double>();
                assertion.tol = a.value("tol", 0.0);
                ++modes;
            }
            if (a.contains("max")) {
                assertion.max = a["max"].get<double>();
                ++modes;
            }
            if (a.contains("min")) {
                assertion.min = a["min"].get<double>();
                ++modes;
            }
            if (a.contains("range")) {
                const auto& r = a["range"];
                assertion.range = std::make_pair(r.at(0).get<double>(), r.at(1).get<double>());
                ++modes;
            }
            if (modes != 1)
                throw ConfigInvalid(where + ".expected." + assertion.name +
                                    ": exactly one of value/max/min/range required");
            s.expected.push_back(std::move(assertion));
        }
    } catch (const json::exception& e) {
        throw ConfigInvalid(where + ": " + e.what());
    }
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    return scenario_from_json(io::load_json_file(path), path);
}

std::string find_scenario_dir(const std::string& explicit_dir) {
    if (!explicit_dir.empty()) {
        if (fs::is_directory(explicit_dir)) return explicit_dir;
        throw ConfigInvalid("scenario directory not found: " + explicit_dir);
    }
    if (const char* env = std::getenv("QPROB_SCENARIO_DIR")) {
        if (fs::is_directory(env)) return env;
        throw ConfigInvalid(std::string("QPROB_SCENARIO_DIR is not a directory: ") + env);
    }
    if (fs::is_directory("scenarios")) return "scenarios";

    std::error_code ec;
    fs::path exe = fs::read_symlink("/proc/self/exe", ec);
    if (!ec) {
        for (fs::path dir = exe.parent_path(); !dir.empty(); dir = dir.parent_path()) {
            if (fs::is_directory(dir / "scenarios")) return (dir / "scenarios").string();
            if (dir == dir.root_path()) break;
        }
    }
    throw ConfigInvalid("no scenario directory found (set QPROB_SCENARIO_DIR or pass --scenario-dir)");
}

std::vector<CatalogEntry> list_scenarios(const std::string& dir) {
    if (!fs::is_directory(dir)) throw ConfigInvalid("scenario directory not found: " + dir);
    std::vector<CatalogEntry> catalog;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        const Scenario s = load_scenario_file(entry.path().string());
        if (s.name != entry.path().stem().string())
            throw ConfigInvalid(entry.path().string() + ": scenario name '" + s.name +
                                "' does not match the file name");
        catalog.push_back(CatalogEntry{s.name, s.description});
    }
    std::sort(catalog.begin(), catalog.end(),
              [](const CatalogEntry& a, const CatalogEntry& b) { return a.name < b.name; });
    return catalog;
}

ScenarioReport run_scenario(const Scenario& scenario) {
    ScenarioReport report;
    report.name = scenario.name;
    report.kind = scenario.kind;
    report.measured = compute_measured(scenario);

    for (const Assertion& a : scenario.expected) {
        AssertionResult result;
        result.name = a.name;
        const auto it = report.measured.find(a.name);
        if (it == report.measured.end()) {
            result.measured = std::numeric_limits<double>::quiet_NaN();
            result.expectation = "quantity not computed by this scenario";
            result.pass = false;
        } else {
            result.measured = it->second;
            if (a.value) {
                result.expectation = io::format_number(*a.value) + " +- " + io::format_number(a.tol);
                result.pass = std::abs(result.measured - *a.value) <= a.tol;
            } else if (a.max) {
                result.expectation = "<= " + io::format_number(*a.max);
                result.pass = result.measured <= *a.max;
            } else if (a.min) {
                result.expectation = ">= " + io::format_number(*a.min);
                result.pass = result.measured >= *a.min;
            } else {
                result.expectation = "in [" + io::format_number(a.range->first) + ", " +
                                     io::format_number(a.range->second) + "]";
                result.pass = result.measured >= a.range->first &&
                              result.measured <= a.range->second;
            }
        }
        report.passed = report.passed && result.pass;
        report.assertions.push_back(std::move(result));
    }
    return report;
}

ScenarioReport run_named_scenario(const std::string& name, const std::string& dir) {
    const fs::path path = fs::path(dir) / (name + ".json");
    if (!fs::exists(path))
        throw ConfigInvalid("scenario '" + name + "' not found in " + dir);
    return run_scenario(load_scenario_file(path.string()));
}

json ScenarioReport::to_json() const {
    json rows = json::array();
    for (const auto& a : assertions)
        rows.push_back(json{{"name", a.name},
                            {"measured", a.measured},
                            {"expected", a.expectation},
                            {"pass", a.pass}});
    json measured_json = json::object();
    for (const auto& [key, value] : measured) measured_json[key] = value;
    return json{{"name", name},
                {"kind", kind},
                {"passed", passed},
                {"assertions", std::move(rows)},
                {"measured", std::move(measured_json)}};
}

std::string ScenarioReport::to_text() const {
    std::ostringstream out;
    out << "scenario " << name << " (" << kind << ")\n";
    for (const auto& a : assertions)
        out << "  " << (a.pass ? "PASS" : "FAIL") << "  " << a.name << " = "
            << io::format_number(a.measured) << "  expected " << a.expectation << "\n";
    out << (passed ? "PASSED" : "FAILED") << " (" << assertions.size() << " assertions)\n";
    return out.str();
}

}  // namespace qprob
