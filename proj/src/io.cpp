#include "qprob/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qprob::io {

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) throw ConfigInvalid(where + ": missing field '" + key + "'");
    return *it;
}

double number_field(const json& j, const char* key, const std::string& where) {
    const json& f = field(j, key, where);
    if (!f.is_number()) throw ConfigInvalid(where + "." + key + ": expected a number");
    return f.get<double>();
}

std::vector<std::vector<double>> grid_field(const json& j, const char* key,
                                            const std::string& where, std::size_t dim) {
    const json& f = field(j, key, where);
    if (!f.is_array() || f.size() != dim)
        throw ConfigInvalid(where + "." + key + ": expected " + std::to_string(dim) + " rows");
    std::vector<std::vector<double>> rows;
    for (const auto& row : f) {
        if (!row.is_array() || row.size() != dim)
            throw ConfigInvalid(where + "." + key + ": ragged row");
        rows.push_back(row.get<std::vector<double>>());
    }
    return rows;
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
    json re = json::array(), im = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json rrow = json::array(), irow = json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) {
            rrow.push_back(m(i, j).real());
            irow.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    return json{{"dim", m.dim()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigInvalid(where + ": expected a matrix object");
    const auto dim = static_cast<std::size_t>(number_field(j, "dim", where));
    if (dim < 1 || dim > 4096) throw ConfigInvalid(where + ".dim: out of range");
    const auto re = grid_field(j, "re", where, dim);
    const auto im = grid_field(j, "im", where, dim);
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k) m(i, k) = cplx(re[i][k], im[i][k]);
    if (!m.all_finite()) throw ConfigInvalid(where + ": non-finite matrix entry");
    return m;
}

json state_to_json(const QuantumState& s) {
    if (s.is_pure()) {
        json re = json::array(), im = json::array();
        for (const auto& a : s.amplitudes()) {
            re.push_back(a.real());
            im.push_back(a.imag());
        }
        return json{{"kind", "pure"}, {"dim", s.dim()}, {"re", std::move(re)},
                    {"im", std::move(im)}};
    }
    return json{{"kind", "mixed"}, {"density", matrix_to_json(s.density_ref())}};
}

QuantumState state_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigInvalid(where + ": expected a state object");
    const std::string kind = field(j, "kind", where).get<std::string>();
    if (kind == "pure") {
        const auto dim = static_cast<std::size_t>(number_field(j, "dim", where));
        const json& re = field(j, "re", where);
        const json& im = field(j, "im", where);
        if (!re.is_array() || !im.is_array() || re.size() != dim || im.size() != dim)
            throw ConfigInvalid(where + ": pure state needs re/im arrays of length dim");
        cvector amps(dim);
        for (std::size_t i = 0; i < dim; ++i)
            amps[i] = cplx(re[i].get<double>(), im[i].get<double>());
        return QuantumState::pure(std::move(amps));
    }
    if (kind == "mixed")
        return QuantumState::mixed(matrix_from_json(field(j, "density", where), where + ".density"));
    throw ConfigInvalid(where + ".kind: expected 'pure' or 'mixed'");
}

json space_to_json(const FiniteProbabilitySpace& s) {
    return json{{"points", s.points()}, {"weights", s.weights()}};
}

FiniteProbabilitySpace space_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigInvalid(where + ": expected a space object");
    const json& points = field(j, "points", where);
    const json& weights = field(j, "weights", where);
    if (!points.is_array() || !weights.is_array())
        throw ConfigInvalid(where + ": points/weights must be arrays");
    std::vector<std::string> labels;
    for (const auto& p : points)
        labels.push_back(p.is_string() ? p.get<std::string>() : p.dump());
    return FiniteProbabilitySpace(std::move(labels), weights.get<std::vector<double>>());
}

json interference_to_json(const InterferenceDecomposition& d) {
    json cross = json::array();
    for (const auto& term : d.cross_terms)
        cross.push_back(json{{"k", term.k},
                             {"j", term.j},
                             {"magnitude", term.magnitude},
                             {"phase", term.phase}});
    return json{{"target_outcome", d.target_outcome},
                {"classical_part", d.classical_part},
                {"interference_term", d.interference_term},
                {"total", d.total},
                {"cross_terms", std::move(cross)}};
}

json lindblad_model_to_json(const LindbladModel& m) {
    // Emitted in superoperator form; jump structure is not retained.
    const std::size_t d = m.dim();
    const ComplexMatrix id = ComplexMatrix::identity(d);
    const ComplexMatrix unitary_part =
        (tensor_product(m.hamiltonian(), id) - tensor_product(id, m.hamiltonian().transpose())) *
        cplx(0.0, -1.0);
    return json{{"hamiltonian", matrix_to_json(m.hamiltonian())},
                {"superoperator", matrix_to_json(m.generator() - unitary_part)}};
}

LindbladModel lindblad_model_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigInvalid(where + ": expected a model object");
    ComplexMatrix h = matrix_from_json(field(j, "hamiltonian", where), where + ".hamiltonian");
    if (j.contains("superoperator")) {
        if (j.contains("jumps"))
            throw ConfigInvalid(where + ": give either 'jumps' or 'superoperator', not both");
        return LindbladModel::from_superoperator(
            std::move(h), matrix_from_json(j["superoperator"], where + ".superoperator"));
    }
    const json& jumps = field(j, "jumps", where);
    if (!jumps.is_array()) throw ConfigInvalid(where + ".jumps: expected an array");
    std::vector<JumpOperator> ops;
    std::size_t idx = 0;
    for (const auto& entry : jumps) {
        const std::string label = where + ".jumps[" + std::to_string(idx++) + "]";
        ops.push_back(JumpOperator{matrix_from_json(field(entry, "matrix", label), label),
                                   number_field(entry, "rate", label)});
    }
    return LindbladModel(std::move(h), std::move(ops));
}

json instrument_model_to_json(const IndirectMeasurementModel& m) {
    return json{{"probe_dim", m.probe_dim()},
                {"probe_state", state_to_json(m.probe_state())},
                {"coupling", matrix_to_json(m.coupling())},
                {"meter", matrix_to_json(m.meter().matrix())}};
}

IndirectMeasurementModel instrument_model_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigInvalid(where + ": expected a model object");
    const auto probe_dim = static_cast<std::size_t>(number_field(j, "probe_dim", where));
    return IndirectMeasurementModel(
        probe_dim, state_from_json(field(j, "probe_state", where), where + ".probe_state"),
        matrix_from_json(field(j, "coupling", where), where + ".coupling"),
        HermitianObservable(matrix_from_json(field(j, "meter", where), where + ".meter"),
                            "meter"));
}

json steady_report_to_json(const SteadyStateReport& r) {
    return json{{"steady_state", state_to_json(r.steady_state)},
                {"residual", r.residual},
                {"diagonal_in_basis", r.diagonal_in_basis},
                {"max_offdiagonal", r.max_offdiagonal},
                {"eigen_populations", r.eigen_populations},
                {"unique", r.unique},
                {"null_space_dimension", r.null_space_dimension},
                {"convergence_rate", r.convergence_rate},
                {"fit_quality", r.fit_quality},
                {"cross_check_distance", r.cross_check_distance}};
}

std::string jpd_to_csv(const JointDistribution& jpd) {
    std::ostringstream out;
    for (std::size_t k = 0; k < jpd.variables.size(); ++k) out << jpd.variables[k] << ",";
    out << "probability\n";
    for (std::size_t r = 0; r < jpd.support.size(); ++r) {
        for (double v : jpd.support[r]) out << format_number(v) << ",";
        out << format_number(jpd.probabilities[r]) << "\n";
    }
    return out.str();
}

std::string format_number(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", v);
    return buffer;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigInvalid(path + ": JSON parse error: " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigInvalid("cannot open file for writing: " + path);
    out << content;
}

}  // namespace qprob::io
