#include <cmath>

#include "qcoh/dilation.hpp"
#include "qcoh/instruments.hpp"
#include "support.hpp"

using namespace qcoh;
using qtest::dist;
using qtest::mat;

namespace {

double kraus_action_gap(const KrausChannel& a, const KrausChannel& b, Rng& rng) {
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    const DensityMatrix rho = random_density(a.dim(), a.dim(), rng);
    worst = std::max(worst, dist(a(rho.matrix()), b(rho.matrix())));
  }
  return worst;
}

}  // namespace

TEST_CASE("generalized CNOT") {
  const ComplexMatrix cnot = mat(4, 4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0});
  CHECK(generalized_cnot(2) == cnot);
  const ComplexMatrix u3 = generalized_cnot(3);
  CHECK(dist(u3.adjoint() * u3, ComplexMatrix::Identity(9, 9)) == 0.0);
  // |2> (x) |1> goes to |2> (x) |0>.
  CHECK(u3(2 * 3 + 0, 2 * 3 + 1) == Complex(1.0));
  CHECK_CODE(generalized_cnot(1), ErrorCode::BadDimension);
}

TEST_CASE("Householder completion maps e0 to c") {
  Rng rng(8);
  for (int d : {1, 2, 5}) {
    const ComplexVector c = rng.unit_vector(d);
    const ComplexMatrix u = householder_completion(c);
    CHECK(dist(u.col(0), c) < 1e-14);
    CHECK(dist(u.adjoint() * u, ComplexMatrix::Identity(d, d)) < 1e-13);
  }
  ComplexVector e0 = ComplexVector::Zero(3);
  e0(0) = 1.0;
  CHECK(householder_completion(e0) == ComplexMatrix::Identity(3, 3));
  ComplexVector minus = -e0;
  CHECK(dist(householder_completion(minus).col(0), minus) < 1e-15);
}

TEST_CASE("extend_to_unitary keeps V and rejects non-isometries") {
  Rng rng(9);
  const KrausChannel ch = random_sio(3, 2, rng);
  const ComplexMatrix v = effective_isometry(ch, computational_basis(3));
  ComplexVector a0 = ComplexVector::Zero(2);
  a0(0) = 1.0;
  const ComplexMatrix u = extend_to_unitary(v, a0);
  CHECK(dist(u.adjoint() * u, ComplexMatrix::Identity(6, 6)) < 1e-12);
  CHECK(dist(u * tensor(ComplexMatrix::Identity(3, 3), ComplexMatrix(a0)), v) < 1e-12);
  CHECK_CODE(extend_to_unitary(2.0 * v, a0), ErrorCode::NotIsometry);
}

TEST_CASE("von Neumann premeasurement copies the basis into the apparatus") {
  Rng rng(10);
  const ComplexMatrix basis = random_unitary(3, rng);
  const DilationModel m = dilate_von_neumann(basis);
  m.validate();
  const DensityMatrix rho = random_density(3, 3, rng);
  const Observable r = Observable::from_basis(basis, {3.0, 2.0, 1.0});
  const RealVector p = born_probabilities(rho, r);
  const ComplexMatrix a = apparatus_state(m, rho);
  for (int n = 0; n < 3; ++n) CHECK(a(n, n).real() == doctest::Approx(p[n]).epsilon(1e-12));
  CHECK(kraus_action_gap(extract_kraus(m), complete_dephasing(basis), rng) < 1e-12);
  CHECK(dist(system_state(m, rho), dephase(rho, basis).matrix()) < 1e-12);
  CHECK(std::abs(conditional_system_state(m, rho, 1).trace() - p[1]) < 1e-12);
}

TEST_CASE("Lüders dilation needs a refining basis") {
  Rng rng(11);
  const Observable r = random_observable(4, {2, 1, 1}, rng);
  const DilationModel m = dilate_luders(r, FineGraining::of(r));
  CHECK(m.ancilla_dim == 3);
  CHECK(kraus_action_gap(extract_kraus(m), luders_channel(r), rng) < 1e-12);
  const Observable other = random_observable(4, {2, 2}, rng);
  CHECK_CODE(dilate_luders(r, FineGraining::of(other)), ErrorCode::IncompatibleFineGraining);
}

TEST_CASE("repeatable dilation reproduces the instrument") {
  Rng rng(12);
  const Observable r = random_observable(4, {2, 2}, rng);
  const auto theta = random_theta(r, rng);
  const DilationModel m = dilate_repeatable(r, theta);
  CHECK(kraus_action_gap(extract_kraus(m), repeatable_instrument(r, theta), rng) < 1e-12);
}

TEST_CASE("GIO dilation is a controlled unitary that leaves populations alone") {
  Rng rng(13);
  const KrausChannel ch = random_gio(4, 3, rng);
  const DilationModel m = dilate(ch, computational_basis(4));
  CHECK(m.ancilla_dim == 3);
  CHECK(kraus_action_gap(extract_kraus(m), ch, rng) < 1e-12);
  const DensityMatrix rho = random_density(4, 4, rng);
  const ComplexMatrix out = system_state(m, rho);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(out(i, i) - rho.matrix()(i, i)) < 1e-12);
  // Rank one still gets a two-level apparatus.
  CHECK(dilate(identity_channel(2), computational_basis(2)).ancilla_dim == 2);
}

TEST_CASE("SIO and IO dilations round-trip") {
  Rng rng(14);
  for (const auto& ch : {random_sio(3, 2, rng), random_io(3, 2, rng), amplitude_damping(0.3),
                         relabeling_example()}) {
    const DilationModel m = dilate(ch, computational_basis(ch.dim()));
    m.validate();
    CHECK(kraus_action_gap(extract_kraus(m), ch, rng) < 1e-12);
  }
}

TEST_CASE("dilation rejects channels outside IO and broken models") {
  const double s = 1.0 / std::sqrt(2.0);
  const KrausChannel hadamard({mat(2, 2, {s, s, s, -s})});
  CHECK_CODE(dilate(hadamard, computational_basis(2)), ErrorCode::UnsupportedClass);
  CHECK_CODE(effective_isometry(hadamard, computational_basis(2)), ErrorCode::NotIOForm);
  DilationModel m = dilate_von_neumann(computational_basis(2));
  m.joint_unitary(0, 0) = 2.0;
  CHECK_CODE(m.validate(), ErrorCode::InvalidModel);
  DilationModel n = dilate_von_neumann(computational_basis(2));
  n.apparatus_init *= 2.0;
  CHECK_CODE(n.validate(), ErrorCode::InvalidModel);
}
