#include <cstdio>
#include <filesystem>

#include "qcoh/io.hpp"
#include "support.hpp"

using namespace qcoh;
using qtest::dist;
using qtest::mat;
namespace qio = qcoh::io;

TEST_CASE("matrix round trip is exact") {
  Rng rng(4);
  const ComplexMatrix m = rng.ginibre(3, 2);
  CHECK(qio::matrix_from_json(qio::to_json(m)) == m);
  const auto text = qio::to_json(m).dump();
  CHECK(qio::matrix_from_json(qio::json::parse(text)) == m);
}

TEST_CASE("object round trips") {
  Rng rng(5);
  const DensityMatrix rho = random_density(3, 2, rng);
  CHECK(qio::state_from_json(qio::to_json(rho)).matrix() == rho.matrix());

  const BipartiteState ab = random_bipartite(2, 3, 6, rng);
  const BipartiteState back = qio::bipartite_from_json(qio::to_json(ab));
  CHECK(back.dim_a == 2);
  CHECK(back.dim_b == 3);

  const Observable r = random_observable(4, {2, 1, 1}, rng);
  const Observable r2 = qio::observable_from_json(qio::to_json(r));
  CHECK(r2.degeneracies() == r.degeneracies());
  CHECK(dist(r2.matrix(), r.matrix()) < 1e-14);

  const KrausChannel ch = random_io(3, 2, rng);
  const KrausChannel ch2 = qio::channel_from_json(qio::to_json(ch));
  CHECK(ch2.rank() == ch.rank());
  CHECK(action_distance(ch, ch2) == 0.0);

  const Povm m = random_povm(3, 4, rng);
  CHECK(qio::povm_from_json(qio::to_json(m)).effects().size() == 4);

  const DilationModel dm = dilate_von_neumann(computational_basis(3));
  const DilationModel dm2 = qio::model_from_json(qio::to_json(dm));
  CHECK(dm2.joint_unitary == dm.joint_unitary);
  CHECK(dm2.ancilla_dim == 3);
}

TEST_CASE("observable given as a matrix is decomposed") {
  qio::json j = {{"type", "observable"}, {"matrix", qio::to_json(mat(2, 2, {1, 0, 0, -1}))}};
  const Observable r = qio::observable_from_json(j);
  CHECK(r.outcomes() == 2);
  CHECK(r.eigenvalues()[0] == doctest::Approx(1.0));
}

TEST_CASE("basis documents") {
  const ComplexMatrix u = computational_basis(2);
  CHECK(qio::basis_from_json(qio::to_json(u)) == u);
  CHECK(qio::basis_from_json({{"type", "basis"}, {"matrix", qio::to_json(u)}}) == u);
  CHECK_CODE(qio::basis_from_json({{"type", "state"}}), ErrorCode::ParseError);
}

TEST_CASE("malformed documents raise ParseError") {
  CHECK_CODE(qio::matrix_from_json(qio::json::array()), ErrorCode::ParseError);
  CHECK_CODE(qio::matrix_from_json({{"type", "matrix"}, {"dim", {2, 2}}, {"entries", {{1, 0}}}}),
             ErrorCode::ParseError);
  CHECK_CODE(qio::matrix_from_json({{"type", "matrix"}, {"dim", {1, 1}}, {"entries", {{"a", 0}}}}),
             ErrorCode::ParseError);
  CHECK_CODE(qio::matrix_from_json({{"type", "matrix"}, {"dim", {-1, 1}}, {"entries", qio::json::array()}}),
             ErrorCode::ParseError);
  CHECK_CODE(qio::state_from_json(qio::to_json(identity_channel(2))), ErrorCode::ParseError);
  CHECK_CODE(qio::channel_from_json({{"type", "channel"}, {"kraus", qio::json::array()}}),
             ErrorCode::ParseError);
  CHECK_CODE(qio::read_file("/nonexistent/qcoh.json"), ErrorCode::ParseError);

  const auto path = std::filesystem::temp_directory_path() / "qcoh_bad.json";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("{\"type\": ", f);
    std::fclose(f);
  }
  CHECK_CODE(qio::read_file(path), ErrorCode::ParseError);
  std::filesystem::remove(path);
}

TEST_CASE("well-formed but invalid objects carry the validation error") {
  const ComplexMatrix not_psd = mat(2, 2, {1.5, 0, 0, -0.5});
  CHECK_CODE(qio::state_from_json({{"type", "state"}, {"matrix", qio::to_json(not_psd)}}),
             ErrorCode::NotPositive);
  const ComplexMatrix half = std::sqrt(0.5) * ComplexMatrix::Identity(2, 2);
  const KrausChannel ch = qio::channel_from_json({{"type", "channel"}, {"kraus", {qio::to_json(half)}}});
  CHECK_FALSE(ch.trace_preserving());
  DilationModel dm = dilate_von_neumann(computational_basis(2));
  dm.joint_unitary *= 2.0;
  CHECK_CODE(qio::model_from_json(qio::to_json(dm)), ErrorCode::InvalidModel);
}

TEST_CASE("file round trip") {
  const auto path = std::filesystem::temp_directory_path() / "qcoh_rt.json";
  const KrausChannel ch = phase_damping(0.75);
  qio::write_file(path, qio::to_json(ch));
  CHECK(action_distance(qio::channel_from_json(qio::read_file(path)), ch) == 0.0);
  std::filesystem::remove(path);
}
