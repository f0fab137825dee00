#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qcoh/dilation.hpp"

namespace qcoh::io {

using json = nlohmann::json;

// One JSON document per object. Complex entries are [re, im] pairs, row-major.
// Malformed documents throw ParseError; well-formed documents describing an
// invalid object throw the validating constructor's error.

json to_json(const ComplexMatrix& m);
json to_json(const DensityMatrix& rho);
json to_json(const BipartiteState& rho);
json to_json(const Observable& r);
json to_json(const KrausChannel& ch);
json to_json(const Povm& m);
json to_json(const DilationModel& m);

ComplexMatrix matrix_from_json(const json& j);
DensityMatrix state_from_json(const json& j);
BipartiteState bipartite_from_json(const json& j);
/// Accepts either {"matrix": ...} (decomposed on load) or explicit
/// {"eigenvalues": [...], "projectors": [...]}.
Observable observable_from_json(const json& j);
KrausChannel channel_from_json(const json& j);
Povm povm_from_json(const json& j);
DilationModel model_from_json(const json& j);
/// A bare matrix document or a state document; used for basis files.
ComplexMatrix basis_from_json(const json& j);

json read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const json& j);

}  // namespace qcoh::io
