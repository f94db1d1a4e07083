#pragma once

#include <string>

#include <json.hpp>

#include "qprob/bell.hpp"
#include "qprob/classical.hpp"
#include "qprob/frequency.hpp"
#include "qprob/gksl.hpp"
#include "qprob/instruments.hpp"
#include "qprob/quantum.hpp"

namespace qprob::io {

using json = nlohmann::ordered_json;

// Matrices travel as {"dim": n, "re": [[..]], "im": [[..]]}; states as
// {"kind": "pure", "dim", "re", "im"} or {"kind": "mixed", "density": ...}.
// Parsers throw ConfigInvalid naming the offending field. docs/formats.md
// is the reference for every schema here.

json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j, const std::string& where);

json state_to_json(const QuantumState& s);
QuantumState state_from_json(const json& j, const std::string& where);

json space_to_json(const FiniteProbabilitySpace& s);
FiniteProbabilitySpace space_from_json(const json& j, const std::string& where);

json interference_to_json(const InterferenceDecomposition& d);

json lindblad_model_to_json(const LindbladModel& m);
LindbladModel lindblad_model_from_json(const json& j, const std::string& where);

json instrument_model_to_json(const IndirectMeasurementModel& m);
IndirectMeasurementModel instrument_model_from_json(const json& j, const std::string& where);

json steady_report_to_json(const SteadyStateReport& r);

std::string jpd_to_csv(const JointDistribution& jpd);

/// 12 significant digits, the CLI-wide numeric format.
std::string format_number(double v);

json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qprob::io
