#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qprob {

/// One expected-value check inside a scenario file. Exactly one of the
/// comparison modes is set: value+tol, max, min, or range.
struct Assertion {
    std::string name;
    std::string note;
    std::optional<double> value;
    double tol = 0.0;
    std::optional<double> max;
    std::optional<double> min;
    std::optional<std::pair<double, double>> range;
};

struct Scenario {
    std::string name;
    std::string description;
    std::string kind;
    nlohmann::ordered_json config;
    std::vector<Assertion> expected;
};

struct AssertionResult {
    std::string name;
    double measured;
    std::string expectation;  // human-readable form of the check
    bool pass;
};

struct ScenarioReport {
    std::string name;
    std::string kind;
    std::vector<AssertionResult> assertions;
    bool passed = true;
    /// Every quantity the scenario computed, for inspection.
    std::map<std::string, double> measured;

    nlohmann::ordered_json to_json() const;
    std::string to_text() const;
};

Scenario scenario_from_json(const nlohmann::ordered_json& j, const std::string& where);
Scenario load_scenario_file(const std::string& path);

/// Locate the bundled scenario directory: an explicit path wins, then
/// $QPROB_SCENARIO_DIR, then ./scenarios, then scenarios/ next to or above
/// the running executable.
std::string find_scenario_dir(const std::string& explicit_dir = "");

struct CatalogEntry {
    std::string name;
    std::string description;
};
std::vector<CatalogEntry> list_scenarios(const std::string& dir);

/// Deterministic under the scenario's seeds; a report row per assertion.
ScenarioReport run_scenario(const Scenario& scenario);

/// Load by catalog name from a scenario directory and run.
ScenarioReport run_named_scenario(const std::string& name, const std::string& dir);

}  // namespace qprob
