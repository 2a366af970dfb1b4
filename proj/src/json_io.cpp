#include "blockcoh/json_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

namespace blockcoh {

using nlohmann::json;

namespace {

Eigen::Index require_dim(const json& j, const char* what) {
    if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer())
        throw ParseError(std::string(what) + ": missing integer \"dim\"");
    auto dim = j["dim"].get<Eigen::Index>();
    if (dim <= 0) throw ParseError(std::string(what) + ": \"dim\" must be positive");
    return dim;
}

RealMatrix real_grid_from_json(const json& j, Eigen::Index rows, Eigen::Index cols,
                               const char* what) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
        throw ParseError(std::string(what) + ": wrong row count");
    RealMatrix out(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw ParseError(std::string(what) + ": wrong column count");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json& cell = row[static_cast<std::size_t>(c)];
            if (!cell.is_number()) throw ParseError(std::string(what) + ": non-numeric entry");
            out(r, c) = cell.get<double>();
        }
    }
    return out;
}

json real_grid_to_json(const RealMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

json matrix_to_json(const Matrix& m) {
    json j;
    j["dim"] = m.rows();
    j["re"] = real_grid_to_json(m.real());
    j["im"] = real_grid_to_json(m.imag());
    return j;
}

Matrix matrix_from_json(const json& j) {
    Eigen::Index dim = require_dim(j, "operator");
    if (!j.contains("re")) throw ParseError("operator: missing \"re\"");
    RealMatrix re = real_grid_from_json(j["re"], dim, dim, "operator re");
    RealMatrix im = RealMatrix::Zero(dim, dim);
    if (j.contains("im")) im = real_grid_from_json(j["im"], dim, dim, "operator im");
    Matrix out(dim, dim);
    out.real() = re;
    out.imag() = im;
    return out;
}

json measurement_to_json(const ProjectiveMeasurement& p) {
    json j;
    j["dim"] = p.dim();
    json projectors = json::array();
    for (const auto& proj : p.projectors()) projectors.push_back(matrix_to_json(proj.matrix()));
    j["projectors"] = std::move(projectors);
    return j;
}

ProjectiveMeasurement measurement_from_json(const json& j) {
    Eigen::Index dim = require_dim(j, "measurement");
    if (j.contains("blocks")) {
        if (!j["blocks"].is_array()) throw ParseError("measurement: \"blocks\" must be an array");
        std::vector<std::vector<int>> blocks;
        for (const json& raw : j["blocks"]) {
            if (!raw.is_array()) throw ParseError("measurement: each block must be an array");
            std::vector<int> block;
            for (const json& idx : raw) {
                if (!idx.is_number_integer())
                    throw ParseError("measurement: block indices must be integers");
                block.push_back(idx.get<int>() - 1);  // 1-based on disk
            }
            blocks.push_back(std::move(block));
        }
        try {
            return ProjectiveMeasurement::from_partition(BlockPartition(dim, std::move(blocks)));
        } catch (const InvariantError& err) {
            throw ParseError(std::string("measurement: ") + err.what());
        }
    }
    if (j.contains("projectors")) {
        std::vector<HermitianOperator> projectors;
        for (const json& raw : j["projectors"]) projectors.emplace_back(matrix_from_json(raw));
        return ProjectiveMeasurement(std::move(projectors));
    }
    throw ParseError("measurement: need \"blocks\" or \"projectors\"");
}

json state_to_json(const DensityOperator& rho) { return matrix_to_json(rho.matrix()); }

json state_to_json(const PureState& psi) {
    json j;
    j["dim"] = psi.dim();
    json amps = json::array();
    for (Eigen::Index i = 0; i < psi.dim(); ++i)
        amps.push_back({psi.amplitudes()[i].real(), psi.amplitudes()[i].imag()});
    j["amplitudes"] = std::move(amps);
    return j;
}

DensityOperator density_from_json(const json& j) {
    Eigen::Index dim = require_dim(j, "state");
    if (j.contains("amplitudes")) {
        const json& amps = j["amplitudes"];
        if (!amps.is_array() || static_cast<Eigen::Index>(amps.size()) != dim)
            throw ParseError("state: wrong amplitude count");
        Vector v(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            const json& cell = amps[static_cast<std::size_t>(i)];
            if (cell.is_number()) {
                v[i] = Complex(cell.get<double>(), 0.0);
            } else if (cell.is_array() && cell.size() == 2 && cell[0].is_number() &&
                       cell[1].is_number()) {
                v[i] = Complex(cell[0].get<double>(), cell[1].get<double>());
            } else {
                throw ParseError("state: amplitude entries must be numbers or [re, im] pairs");
            }
        }
        try {
            return PureState(std::move(v)).projector();
        } catch (const InvariantError& err) {
            throw ParseError(std::string("state: ") + err.what());
        }
    }
    try {
        return DensityOperator(matrix_from_json(j));
    } catch (const InvariantError& err) {
        throw ParseError(std::string("state: ") + err.what());
    }
}

json povm_to_json(const Povm& e) {
    json j;
    j["dim"] = e.dim();
    json elements = json::array();
    for (const auto& element : e.elements()) elements.push_back(matrix_to_json(element.matrix()));
    j["elements"] = std::move(elements);
    return j;
}

Povm povm_from_json(const json& j) {
    require_dim(j, "povm");
    if (!j.contains("elements") || !j["elements"].is_array())
        throw ParseError("povm: missing \"elements\" array");
    std::vector<HermitianOperator> elements;
    for (const json& raw : j["elements"]) {
        try {
            elements.emplace_back(matrix_from_json(raw));
        } catch (const InvariantError& err) {
            throw ParseError(std::string("povm: ") + err.what());
        }
    }
    try {
        return Povm(std::move(elements));
    } catch (const InvariantError& err) {
        throw ParseError(std::string("povm: ") + err.what());
    }
}

json target_to_json(const DilutionTarget& target) {
    json j;
    j["dim"] = target.dim();
    json coeffs = json::array();
    for (Eigen::Index i = 0; i < target.dim(); ++i) coeffs.push_back(target.coefficients()[i]);
    j["coefficients"] = std::move(coeffs);
    return j;
}

DilutionTarget target_from_json(const json& j) {
    Eigen::Index dim = require_dim(j, "target");
    if (!j.contains("coefficients") || !j["coefficients"].is_array() ||
        static_cast<Eigen::Index>(j["coefficients"].size()) != dim)
        throw ParseError("target: need \"coefficients\" of length dim");
    RealVector coeffs(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const json& cell = j["coefficients"][static_cast<std::size_t>(i)];
        if (!cell.is_number()) throw ParseError("target: non-numeric coefficient");
        coeffs[i] = cell.get<double>();
    }
    try {
        return DilutionTarget(std::move(coeffs));
    } catch (const InvariantError& err) {
        throw ParseError(std::string("target: ") + err.what());
    }
}

json protocol_to_json(const DilutionProtocol& protocol) {
    json j;
    j["dim"] = protocol.dim;
    json perms = json::array();
    for (const auto& perm : protocol.permutations) {
        json map = json::array();
        for (int v : perm) map.push_back(v + 1);  // 1-based on disk
        perms.push_back(std::move(map));
    }
    j["permutations"] = std::move(perms);
    json probs = json::array();
    for (Eigen::Index i = 0; i < protocol.probabilities.size(); ++i)
        probs.push_back(protocol.probabilities[i]);
    j["probabilities"] = std::move(probs);
    j["c_matrix"] = real_grid_to_json(protocol.c_matrix);
    json kraus = json::array();
    for (const Matrix& k : protocol.kraus.operators) kraus.push_back(matrix_to_json(k));
    j["kraus"] = std::move(kraus);
    return j;
}

DilutionProtocol protocol_from_json(const json& j) {
    Eigen::Index dim = require_dim(j, "protocol");
    DilutionProtocol protocol;
    protocol.dim = dim;
    if (!j.contains("permutations") || !j.contains("probabilities") || !j.contains("kraus"))
        throw ParseError("protocol: need \"permutations\", \"probabilities\" and \"kraus\"");
    for (const json& raw : j["permutations"]) {
        std::vector<int> perm;
        for (const json& idx : raw) {
            if (!idx.is_number_integer()) throw ParseError("protocol: non-integer permutation");
            perm.push_back(idx.get<int>() - 1);
        }
        protocol.permutations.push_back(std::move(perm));
    }
    const json& probs = j["probabilities"];
    protocol.probabilities = RealVector(static_cast<Eigen::Index>(probs.size()));
    for (Eigen::Index i = 0; i < protocol.probabilities.size(); ++i)
        protocol.probabilities[i] = probs[static_cast<std::size_t>(i)].get<double>();
    if (j.contains("c_matrix"))
        protocol.c_matrix = real_grid_from_json(j["c_matrix"], dim, dim, "protocol c_matrix");
    protocol.kraus.dim = dim;
    for (const json& raw : j["kraus"]) protocol.kraus.operators.push_back(matrix_from_json(raw));
    return protocol;
}

json extension_to_json(const NaimarkExtension& ext) {
    json j;
    j["outcomes"] = ext.outcomes;
    j["base_dim"] = ext.base_dim;
    j["dim"] = ext.dim();
    j["V"] = matrix_to_json(ext.V);
    json projectors = json::array();
    for (const auto& p : ext.projectors.projectors())
        projectors.push_back(matrix_to_json(p.matrix()));
    j["projectors"] = std::move(projectors);
    return j;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& err) {
        throw ParseError(path + ": " + err.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace blockcoh
