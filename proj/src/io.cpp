#include "qcoh/io.hpp"

#include <fstream>
#include <sstream>

namespace qcoh::io {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

void expect_type(const json& j, const char* type) {
  const json& t = field(j, "type");
  if (!t.is_string() || t.get<std::string>() != type) {
    parse_fail(std::string("expected a document of type \"") + type + "\"");
  }
}

double number(const json& j) {
  if (!j.is_number()) parse_fail("expected a number");
  return j.get<double>();
}

int count(const json& j) {
  if (!j.is_number_integer() || j.get<long long>() < 0) parse_fail("expected a non-negative integer");
  return static_cast<int>(j.get<long long>());
}

std::vector<ComplexMatrix> matrix_list(const json& j) {
  if (!j.is_array() || j.empty()) parse_fail("expected a non-empty array of matrices");
  std::vector<ComplexMatrix> out;
  for (const auto& m : j) out.push_back(matrix_from_json(m));
  return out;
}

json matrix_list_json(const std::vector<ComplexMatrix>& ms) {
  json arr = json::array();
  for (const auto& m : ms) arr.push_back(to_json(m));
  return arr;
}

json vector_json(const ComplexVector& v) { return to_json(ComplexMatrix(v)); }

ComplexVector vector_from_json(const json& j) {
  const ComplexMatrix m = matrix_from_json(j);
  if (m.cols() != 1) parse_fail("expected a column vector");
  return m.col(0);
}

}  // namespace

json to_json(const ComplexMatrix& m) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) entries.push_back({m(i, k).real(), m(i, k).imag()});
  }
  return {{"type", "matrix"}, {"dim", {m.rows(), m.cols()}}, {"entries", entries}};
}

json to_json(const DensityMatrix& rho) { return {{"type", "state"}, {"matrix", to_json(rho.matrix())}}; }

json to_json(const BipartiteState& rho) {
  json j = to_json(rho.state);
  j["dims"] = {rho.dim_a, rho.dim_b};
  return j;
}

json to_json(const Observable& r) {
  return {{"type", "observable"},
          {"eigenvalues", r.eigenvalues()},
          {"projectors", matrix_list_json(r.projectors())}};
}

json to_json(const KrausChannel& ch) {
  return {{"type", "channel"}, {"kraus", matrix_list_json(ch.kraus_ops())}};
}

json to_json(const Povm& m) { return {{"type", "povm"}, {"effects", matrix_list_json(m.effects())}}; }

json to_json(const DilationModel& m) {
  return {{"type", "dilation"},
          {"system_dim", m.system_dim},
          {"ancilla_dim", m.ancilla_dim},
          {"apparatus_init", vector_json(m.apparatus_init)},
          {"joint_unitary", to_json(m.joint_unitary)},
          {"readout", to_json(m.readout)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  expect_type(j, "matrix");
  const json& dim = field(j, "dim");
  if (!dim.is_array() || dim.size() != 2) parse_fail("matrix \"dim\" must be [rows, cols]");
  const int rows = count(dim[0]);
  const int cols = count(dim[1]);
  const json& entries = field(j, "entries");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(rows) * cols) {
    parse_fail("matrix has " + std::to_string(entries.is_array() ? entries.size() : 0) +
               " entries, expected " + std::to_string(rows * cols));
  }
  ComplexMatrix m(rows, cols);
  std::size_t idx = 0;
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < cols; ++k) {
      const json& e = entries[idx++];
      if (!e.is_array() || e.size() != 2) parse_fail("matrix entries must be [re, im] pairs");
      m(i, k) = Complex(number(e[0]), number(e[1]));
    }
  }
  return m;
}

DensityMatrix state_from_json(const json& j) {
  expect_type(j, "state");
  return DensityMatrix(matrix_from_json(field(j, "matrix")));
}

BipartiteState bipartite_from_json(const json& j) {
  expect_type(j, "state");
  const json& dims = field(j, "dims");
  if (!dims.is_array() || dims.size() != 2) parse_fail("\"dims\" must be [dA, dB]");
  return BipartiteState(count(dims[0]), count(dims[1]), state_from_json(j));
}

Observable observable_from_json(const json& j) {
  expect_type(j, "observable");
  if (j.contains("matrix")) return spectral_decompose(matrix_from_json(j.at("matrix")));
  const json& values = field(j, "eigenvalues");
  if (!values.is_array()) parse_fail("\"eigenvalues\" must be an array");
  RealVector r;
  for (const auto& v : values) r.push_back(number(v));
  return Observable::from_projectors(r, matrix_list(field(j, "projectors")));
}

KrausChannel channel_from_json(const json& j) {
  expect_type(j, "channel");
  return KrausChannel(matrix_list(field(j, "kraus")));
}

Povm povm_from_json(const json& j) {
  expect_type(j, "povm");
  return Povm(matrix_list(field(j, "effects")));
}

DilationModel model_from_json(const json& j) {
  expect_type(j, "dilation");
  DilationModel m;
  m.system_dim = count(field(j, "system_dim"));
  m.ancilla_dim = count(field(j, "ancilla_dim"));
  m.apparatus_init = vector_from_json(field(j, "apparatus_init"));
  m.joint_unitary = matrix_from_json(field(j, "joint_unitary"));
  m.readout = matrix_from_json(field(j, "readout"));
  m.validate();
  return m;
}

ComplexMatrix basis_from_json(const json& j) {
  const json& t = field(j, "type");
  if (t == "matrix") return matrix_from_json(j);
  if (t == "basis") return matrix_from_json(field(j, "matrix"));
  parse_fail("expected a matrix document for the basis");
}

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    parse_fail(path.string() + ": " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::BadParameter, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace qcoh::io
