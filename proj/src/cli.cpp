#include "qprob/cli.hpp"

#include <chrono>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qprob/bell.hpp"
#include "qprob/frequency.hpp"
#include "qprob/gksl.hpp"
#include "qprob/instruments.hpp"
#include "qprob/io.hpp"
#include "qprob/logic.hpp"
#include "qprob/scenarios.hpp"

namespace qprob::cli {

namespace {

using io::format_number;
using io::json;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        io::write_text_file(out_path, text);
}

int cmd_ftp_compare(const std::string& config_path, const std::string& out_path) {
    const json config = io::load_json_file(config_path);
    const QuantumState state = io::state_from_json(config.at("state"), config_path + ".state");
    const HermitianObservable a(
        io::matrix_from_json(config.at("observable_a"), config_path + ".observable_a"), "A");
    const HermitianObservable b(
        io::matrix_from_json(config.at("observable_b"), config_path + ".observable_b"), "B");

    std::ostringstream csv;
    csv << "outcome,classical_part,interference_term,total\n";
    for (double outcome : b.spectrum().eigenvalues) {
        const InterferenceDecomposition d = quantum_ftp(state, a, b, outcome);
        csv << format_number(outcome) << "," << format_number(d.classical_part) << ","
            << format_number(d.interference_term) << "," << format_number(d.total) << "\n";
    }
    emit(csv.str(), out_path);
    return 0;
}

int cmd_chsh_sweep(std::size_t trials, std::size_t dim_a, std::size_t dim_b, std::uint64_t seed,
                   const std::string& constraint, const std::string& out_path) {
    SweepConstraint c = SweepConstraint::None;
    if (constraint == "commuting_alice") c = SweepConstraint::CommutingAlice;
    else if (constraint == "commuting_bob") c = SweepConstraint::CommutingBob;
    else if (constraint == "commuting_either") c = SweepConstraint::CommutingEitherSide;
    else if (constraint != "none")
        throw ConfigInvalid("chsh-sweep: unknown constraint '" + constraint + "'");

    const SweepReport report = incompatibility_sweep(trials, dim_a, dim_b, seed, c);
    std::ostringstream csv;
    csv << "trial,commutator_norm_A,commutator_norm_B,bell_max,violated\n";
    for (const auto& t : report.trials)
        csv << t.trial << "," << format_number(t.commutator_norm_a) << ","
            << format_number(t.commutator_norm_b) << "," << format_number(t.bell_max) << ","
            << (t.violated ? 1 : 0) << "\n";
    csv << "# compatible_violated=" << report.count_compatible_violated
        << " incompatible_violated=" << report.count_incompatible_violated
        << " incompatible_ok=" << report.count_incompatible_ok
        << " max_bell=" << format_number(report.max_bell)
        << " violation_rate_incompatible=" << format_number(report.violation_rate_incompatible)
        << "\n";
    emit(csv.str(), out_path);
    return report.count_compatible_violated == 0 ? 0 : 1;
}

int cmd_instrument_check(const std::string& config_path, const std::string& out_path) {
    const json config = io::load_json_file(config_path);
    const IndirectMeasurementModel model =
        io::instrument_model_from_json(config.at("model"), config_path + ".model");
    const HermitianObservable observable(
        io::matrix_from_json(config.at("observable"), config_path + ".observable"), "A");
    std::vector<std::pair<double, double>> outcome_map;
    for (const auto& pair : config.at("outcome_map"))
        outcome_map.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    const std::size_t grid_size = config.value("grid_size", 20);
    const std::uint64_t grid_seed = config.value("grid_seed", 20240901);

    const RealizationReport report =
        verify_projective_realization(observable, model, outcome_map, grid_size, grid_seed);
    std::ostringstream csv;
    csv << "meter_outcome,system_outcome,max_prob_deviation,max_trace_distance\n";
    for (const auto& row : report.rows)
        csv << format_number(row.meter_outcome) << "," << format_number(row.system_outcome) << ","
            << format_number(row.max_probability_deviation) << ","
            << format_number(row.max_trace_distance) << "\n";
    csv << "# states_tested=" << report.states_tested << " passes=" << (report.passes ? 1 : 0)
        << "\n";
    emit(csv.str(), out_path);
    return report.passes ? 0 : 1;
}

int cmd_gksl_run(const std::string& model_path, const std::string& rho0_path, double t_final,
                 double dt, std::size_t stride, const std::string& out_path) {
    const LindbladModel model =
        io::lindblad_model_from_json(io::load_json_file(model_path), model_path);
    const QuantumState rho0 = io::state_from_json(io::load_json_file(rho0_path), rho0_path);

    IntegrateOptions opts;
    opts.record_stride = stride;
    const auto trajectory = integrate(model, rho0, t_final, dt, opts);
    const auto reference = unique_steady_state(model);
    const ComplexMatrix steady =
        reference ? *reference : trajectory.back().state.density();

    const std::size_t d = model.dim();
    std::ostringstream csv;
    csv << "t";
    for (std::size_t i = 0; i < d; ++i) csv << ",pop_" << i;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) csv << ",offdiag_" << i << "_" << j;
    csv << ",dist_to_steady\n";
    for (const auto& point : trajectory) {
        const ComplexMatrix rho = point.state.density();
        csv << format_number(point.t);
        for (std::size_t i = 0; i < d; ++i) csv << "," << format_number(rho(i, i).real());
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j)
                csv << "," << format_number(std::abs(rho(i, j)));
        csv << "," << format_number((rho - steady).frobenius_norm()) << "\n";
    }
    emit(csv.str(), out_path);
    return 0;
}

int cmd_gksl_steady(const std::string& model_path, const std::string& rho0_path,
                    const std::string& observable_path, const std::string& out_path) {
    const LindbladModel model =
        io::lindblad_model_from_json(io::load_json_file(model_path), model_path);
    const QuantumState rho0 = io::state_from_json(io::load_json_file(rho0_path), rho0_path);
    const HermitianObservable observable(
        io::matrix_from_json(io::load_json_file(observable_path), observable_path), "A");

    const SteadyStateReport report = steady_state(model, observable, rho0);
    emit(io::steady_report_to_json(report).dump(2) + "\n", out_path);
    return 0;
}

int cmd_lln_sample(const std::string& state_path, const std::string& observable_path,
                   double outcome, const std::string& grid_spec, std::uint64_t seed,
                   const std::string& out_path) {
    const QuantumState state = io::state_from_json(io::load_json_file(state_path), state_path);
    const HermitianObservable obs(
        io::matrix_from_json(io::load_json_file(observable_path), observable_path), "obs");

    std::vector<std::size_t> grid;
    std::stringstream ss(grid_spec);
    std::string token;
    while (std::getline(ss, token, ','))
        if (!token.empty()) grid.push_back(std::stoull(token));
    if (grid.empty()) throw ConfigInvalid("lln-sample: empty --n-grid");

    const auto rows = lln_convergence(state, obs, outcome, grid, seed);
    std::ostringstream csv;
    csv << "N,frequency,deviation,envelope\n";
    for (const auto& row : rows)
        csv << row.n << "," << format_number(row.frequency) << ","
            << format_number(row.deviation) << "," << format_number(row.envelope) << "\n";
    emit(csv.str(), out_path);
    bool ok = true;
    for (const auto& row : rows) ok = ok && row.within_envelope;
    return ok ? 0 : 1;
}

int cmd_g2_demo(std::size_t windows, double mean_count, std::uint64_t seed,
                const std::string& out_path) {
    std::ostringstream csv;
    csv << "source,windows,g2_estimate\n";
    const std::pair<const char*, ClickSource> sources[] = {
        {"single_photon", ClickSource::SinglePhoton},
        {"coherent", ClickSource::Coherent},
        {"thermal", ClickSource::Thermal},
    };
    for (const auto& [label, source] : sources) {
        const double g2 = g2_zero(simulate_clicks(source, windows, mean_count, seed));
        csv << label << "," << windows << "," << format_number(g2) << "\n";
    }
    emit(csv.str(), out_path);
    return 0;
}

// sigma_z on tensor factor k of n qubits (first factor slowest), kept
// diagonal so the commuting-family fast paths apply.
ComplexMatrix tensor_sigma_z(std::size_t n_factors, std::size_t k) {
    const std::size_t dim = std::size_t{1} << n_factors;
    ComplexMatrix m(dim);
    const std::size_t bit = n_factors - 1 - k;
    for (std::size_t i = 0; i < dim; ++i)
        m(i, i) = cplx(((i >> bit) & 1) ? -1.0 : 1.0, 0.0);
    return m;
}

int cmd_logic_demo(std::size_t max_factors, const std::string& out_path) {
    std::ostringstream out;

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Subspace a = Subspace::span(2, {{cplx(1, 0), cplx(0, 0)}});
    const Subspace b = Subspace::span(2, {{cplx(inv_sqrt2, 0), cplx(inv_sqrt2, 0)}});
    const Subspace c = Subspace::span(2, {{cplx(inv_sqrt2, 0), cplx(-inv_sqrt2, 0)}});
    const DistributivityResult res = distributivity_check(a, b, c);
    out << "# distributivity counterexample: a = span(e0), b = span(e0+e1), c = span(e0-e1)\n";
    out << "# lhs = a ^ (b v c): rank " << res.lhs.rank() << "\n";
    out << "# rhs = (a ^ b) v (a ^ c): rank " << res.rhs.rank() << "\n";
    out << "# equal: " << (res.equal ? "yes" : "no") << " (difference "
        << format_number((res.lhs.projector() - res.rhs.projector()).max_abs()) << ")\n";

    out << "n,atom_count,wall_seconds\n";
    for (std::size_t n = 2; n <= max_factors; ++n) {
        std::vector<ComplexMatrix> family;
        for (std::size_t k = 0; k < n; ++k) family.push_back(tensor_sigma_z(n, k));
        const auto start = std::chrono::steady_clock::now();
        const BooleanAlgebra algebra = boolean_subalgebra(family, /*materialize_atoms=*/false);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        out << n << "," << algebra.atom_count << "," << format_number(elapsed.count()) << "\n";
    }
    emit(out.str(), out_path);
    return res.equal ? 1 : 0;  // the counterexample is supposed to fail equality
}

int cmd_run(const std::string& name, const std::string& dir_flag, const std::string& out_path) {
    const std::string dir = find_scenario_dir(dir_flag);
    const ScenarioReport report = run_named_scenario(name, dir);
    std::cout << report.to_text();
    if (!out_path.empty()) io::write_text_file(out_path, report.to_json().dump(2) + "\n");
    return report.passed ? 0 : 1;
}

int cmd_list(const std::string& dir_flag) {
    const std::string dir = find_scenario_dir(dir_flag);
    for (const auto& entry : list_scenarios(dir))
        std::cout << entry.name << ": " << entry.description << "\n";
    return 0;
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"quantum vs classical probability calculus workbench"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    std::string config_path, out_path, model_path, rho0_path, observable_path, state_path;
    std::string scenario_name, scenario_dir, constraint = "none", grid_spec;
    std::size_t trials = 1000, dim_a = 2, dim_b = 2, windows = 100000, stride = 1,
                max_factors = 10;
    std::uint64_t seed = 0;
    double t_final = 10.0, dt = 0.001, outcome = 0.0, mean_count = 1.0;

    auto* ftp = app.add_subcommand("ftp-compare",
                                   "interference decomposition per outcome of B");
    ftp->add_option("--config", config_path, "JSON with state/observable_a/observable_b")
        ->required();
    ftp->add_option("--out", out_path, "write CSV here instead of stdout");

    auto* sweep = app.add_subcommand("chsh-sweep", "random-settings CHSH sweep");
    sweep->add_option("--trials", trials)->required();
    sweep->add_option("--dim-a", dim_a);
    sweep->add_option("--dim-b", dim_b);
    sweep->add_option("--seed", seed)->required();
    sweep->add_option("--constraint", constraint,
                      "none|commuting_alice|commuting_bob|commuting_either");
    sweep->add_option("--out", out_path);

    auto* icheck = app.add_subcommand("instrument-check",
                                      "projective-realization check of an indirect model");
    icheck->add_option("--config", config_path, "JSON with model/observable/outcome_map")
        ->required();
    icheck->add_option("--out", out_path);

    auto* grun = app.add_subcommand("gksl-run", "integrate a master equation");
    grun->add_option("--model", model_path)->required();
    grun->add_option("--rho0", rho0_path)->required();
    grun->add_option("--t", t_final);
    grun->add_option("--dt", dt);
    grun->add_option("--stride", stride, "record every k-th step");
    grun->add_option("--out", out_path);

    auto* gsteady = app.add_subcommand("gksl-steady", "steady-state report as JSON");
    gsteady->add_option("--model", model_path)->required();
    gsteady->add_option("--rho0", rho0_path)->required();
    gsteady->add_option("--observable", observable_path)->required();
    gsteady->add_option("--out", out_path);

    auto* lln = app.add_subcommand("lln-sample", "law-of-large-numbers frequency table");
    lln->add_option("--state", state_path)->required();
    lln->add_option("--observable", observable_path)->required();
    lln->add_option("--outcome", outcome)->required();
    lln->add_option("--n-grid", grid_spec, "comma-separated increasing N values")->required();
    lln->add_option("--seed", seed)->required();
    lln->add_option("--out", out_path);

    auto* g2 = app.add_subcommand("g2-demo", "second-order coherence of three click models");
    g2->add_option("--windows", windows);
    g2->add_option("--mean-count", mean_count);
    g2->add_option("--seed", seed)->required();
    g2->add_option("--out", out_path);

    auto* logic = app.add_subcommand("logic-demo",
                                     "distributivity counterexample and atom growth");
    logic->add_option("--max-factors", max_factors, "largest commuting family size");
    logic->add_option("--out", out_path);

    auto* run = app.add_subcommand("run", "run a bundled scenario");
    run->add_option("--scenario", scenario_name)->required();
    run->add_option("--scenario-dir", scenario_dir);
    run->add_option("--out", out_path, "write the JSON report here");

    auto* list = app.add_subcommand("list", "list bundled scenarios");
    list->add_option("--scenario-dir", scenario_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (ftp->parsed()) return cmd_ftp_compare(config_path, out_path);
        if (sweep->parsed())
            return cmd_chsh_sweep(trials, dim_a, dim_b, seed, constraint, out_path);
        if (icheck->parsed()) return cmd_instrument_check(config_path, out_path);
        if (grun->parsed())
            return cmd_gksl_run(model_path, rho0_path, t_final, dt, stride, out_path);
        if (gsteady->parsed())
            return cmd_gksl_steady(model_path, rho0_path, observable_path, out_path);
        if (lln->parsed())
            return cmd_lln_sample(state_path, observable_path, outcome, grid_spec, seed, out_path);
        if (g2->parsed()) return cmd_g2_demo(windows, mean_count, seed, out_path);
        if (logic->parsed()) return cmd_logic_demo(max_factors, out_path);
        if (run->parsed()) return cmd_run(scenario_name, scenario_dir, out_path);
        if (list->parsed()) return cmd_list(scenario_dir);
    } catch (const ConfigInvalid& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace qprob::cli
