#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "blockcoh/block.hpp"
#include "blockcoh/dilution.hpp"
#include "blockcoh/matrix.hpp"
#include "blockcoh/naimark.hpp"

// JSON schemas shared by the CLI and the file formats:
//   operator     {"dim": n, "re": [[...]], "im": [[...]]}
//   measurement  {"dim": n, "blocks": [[1,2],[3,4]]} or {"dim": n, "projectors": [op, ...]}
//   state        operator schema, or {"dim": n, "amplitudes": [[re,im], ...]}
//   povm         {"dim": d, "elements": [op, ...]}
//   target       {"dim": d, "coefficients": [...]}
//   protocol     {"dim": d, "permutations": [[...]], "probabilities": [...],
//                 "c_matrix": [[...]], "kraus": [op, ...]}
// Block and permutation indices are 1-based on disk, 0-based in memory.

namespace blockcoh {

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json measurement_to_json(const ProjectiveMeasurement& p);
ProjectiveMeasurement measurement_from_json(const nlohmann::json& j);

nlohmann::json state_to_json(const DensityOperator& rho);
nlohmann::json state_to_json(const PureState& psi);

// Accepts both density-operator and amplitude schemas.
DensityOperator density_from_json(const nlohmann::json& j);

nlohmann::json povm_to_json(const Povm& e);
Povm povm_from_json(const nlohmann::json& j);

nlohmann::json target_to_json(const DilutionTarget& target);
DilutionTarget target_from_json(const nlohmann::json& j);

nlohmann::json protocol_to_json(const DilutionProtocol& protocol);
DilutionProtocol protocol_from_json(const nlohmann::json& j);

nlohmann::json extension_to_json(const NaimarkExtension& ext);

nlohmann::json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace blockcoh
