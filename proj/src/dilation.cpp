#include "qcoh/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcoh/instruments.hpp"

namespace qcoh {

namespace {

ComplexVector unit(int dim, int k) {
  ComplexVector e = ComplexVector::Zero(dim);
  e[k] = 1.0;
  return e;
}

ComplexMatrix kron_vec(const ComplexVector& a, const ComplexVector& b) {
  return tensor(ComplexMatrix(a), ComplexMatrix(b));
}

ComplexMatrix isometry_from_kraus(const std::vector<ComplexMatrix>& ops, int ancilla_dim) {
  const auto d = ops.front().rows();
  ComplexMatrix v = ComplexMatrix::Zero(d * ancilla_dim, d);
  for (std::size_t n = 0; n < ops.size(); ++n) {
    v += tensor(ops[n], ComplexMatrix(unit(ancilla_dim, static_cast<int>(n))));
  }
  return v;
}

// Orthonormal basis of C^dim whose first column is the unit vector a0.
ComplexMatrix basis_starting_with(const ComplexVector& a0) {
  const auto dim = static_cast<int>(a0.size());
  ComplexMatrix g(dim, dim);
  g.col(0) = a0;
  int filled = 1;
  for (int k = 0; k < dim && filled < dim; ++k) {
    ComplexVector cand = unit(dim, k);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < filled; ++j) cand -= g.col(j).dot(cand) * g.col(j);
    }
    const double n = cand.norm();
    if (n < 1e-8) continue;
    g.col(filled++) = cand / n;
  }
  return g;
}

DilationModel make_model(int system_dim, int ancilla_dim, const ComplexMatrix& v, int live) {
  DilationModel m;
  m.system_dim = system_dim;
  m.ancilla_dim = ancilla_dim;
  m.apparatus_init = unit(ancilla_dim, 0);
  m.joint_unitary = extend_to_unitary(v, m.apparatus_init);
  m.readout = ComplexMatrix::Identity(ancilla_dim, ancilla_dim).leftCols(live);
  return m;
}

}  // namespace

void DilationModel::validate(double tol) const {
  const int total = system_dim * ancilla_dim;
  if (system_dim <= 0 || ancilla_dim <= 0 || joint_unitary.rows() != total ||
      joint_unitary.cols() != total) {
    throw Error(ErrorCode::InvalidModel, "joint unitary does not act on d_S * d_A");
  }
  if (!is_unitary(joint_unitary, tol)) {
    throw Error(ErrorCode::InvalidModel, "joint operator is not unitary");
  }
  if (apparatus_init.size() != ancilla_dim || std::abs(apparatus_init.norm() - 1.0) > tol) {
    throw Error(ErrorCode::InvalidModel, "apparatus ready state is not a unit vector");
  }
  if (readout.rows() != ancilla_dim || readout.cols() == 0 || isometry_defect(readout) > tol) {
    throw Error(ErrorCode::InvalidModel, "readout vectors are not orthonormal");
  }
}

KrausChannel extract_kraus(const DilationModel& m) {
  m.validate();
  const ComplexMatrix id = ComplexMatrix::Identity(m.system_dim, m.system_dim);
  const ComplexMatrix w = m.joint_unitary * tensor(id, ComplexMatrix(m.apparatus_init));
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index n = 0; n < m.readout.cols(); ++n) {
    ops.push_back(tensor(id, ComplexMatrix(m.readout.col(n).adjoint())) * w);
  }
  return KrausChannel(std::move(ops));
}

namespace {

ComplexMatrix joint_output(const DilationModel& m, const DensityMatrix& rho) {
  if (rho.dim() != m.system_dim) {
    throw Error(ErrorCode::DimMismatch, "state does not match the model's system");
  }
  const ComplexMatrix ready = outer(m.apparatus_init, m.apparatus_init);
  return m.joint_unitary * tensor(rho.matrix(), ready) * m.joint_unitary.adjoint();
}

}  // namespace

ComplexMatrix conditional_system_state(const DilationModel& m, const DensityMatrix& rho,
                                       int outcome) {
  if (outcome < 0 || outcome >= m.readout.cols()) {
    throw Error(ErrorCode::BadParameter, "readout outcome out of range");
  }
  const ComplexMatrix id = ComplexMatrix::Identity(m.system_dim, m.system_dim);
  const ComplexMatrix bra = tensor(id, ComplexMatrix(m.readout.col(outcome).adjoint()));
  return bra * joint_output(m, rho) * bra.adjoint();
}

ComplexMatrix apparatus_state(const DilationModel& m, const DensityMatrix& rho) {
  return partial_trace(joint_output(m, rho), m.system_dim, m.ancilla_dim, Subsystem::B);
}

ComplexMatrix system_state(const DilationModel& m, const DensityMatrix& rho) {
  return partial_trace(joint_output(m, rho), m.system_dim, m.ancilla_dim, Subsystem::A);
}

DilationModel dilate_von_neumann(const ComplexMatrix& basis) {
  const auto d = static_cast<int>(basis.rows());
  if (d == 0 || basis.cols() != d || !is_unitary(basis)) {
    throw Error(ErrorCode::BadBasis, "von Neumann model needs a complete orthonormal basis");
  }
  const int da = std::max(d, 2);
  ComplexMatrix v = ComplexMatrix::Zero(d * da, d);
  for (int n = 0; n < d; ++n) {
    v += kron_vec(basis.col(n), unit(da, n)) * basis.col(n).adjoint();
  }
  return make_model(d, da, v, d);
}

DilationModel dilate_luders(const Observable& r, const FineGraining& fg) {
  if (!fg.refines(r)) {
    throw Error(ErrorCode::IncompatibleFineGraining, "fine-graining does not refine R");
  }
  const int d = r.dim();
  const int da = std::max(r.outcomes(), 2);
  ComplexMatrix v = ComplexMatrix::Zero(d * da, d);
  for (int k = 0; k < d; ++k) {
    const ComplexVector phi = fg.basis().col(k);
    v += kron_vec(phi, unit(da, fg.block_of_column()[k])) * phi.adjoint();
  }
  return make_model(d, da, v, r.outcomes());
}

DilationModel dilate_repeatable(const Observable& r, const std::vector<ComplexMatrix>& theta) {
  const KrausChannel inst = repeatable_instrument(r, theta);
  const int da = std::max(r.outcomes(), 2);
  return make_model(r.dim(), da, isometry_from_kraus(inst.kraus_ops(), da), r.outcomes());
}

ComplexMatrix householder_completion(const ComplexVector& c) {
  const auto dim = static_cast<int>(c.size());
  if (dim == 0 || std::abs(c.norm() - 1.0) > kDefaultTol) {
    throw Error(ErrorCode::BadParameter, "Householder target must be a unit vector");
  }
  if (dim == 1) return ComplexMatrix::Constant(1, 1, c[0]);
  if (c[0] == Complex(1.0, 0.0) && c.tail(dim - 1).isZero(0.0)) return ComplexMatrix::Identity(dim, dim);
  // Phase s with conj(s) c_0 = |c_0| makes u = s e_0 + c free of cancellation.
  const double mag = std::abs(c[0]);
  const Complex s = mag > 0.0 ? c[0] / mag : Complex(1.0, 0.0);
  ComplexVector u = c;
  u[0] += s;
  const ComplexMatrix h =
      ComplexMatrix::Identity(dim, dim) - (2.0 / u.squaredNorm()) * (u * u.adjoint());
  // h (s e_0) = -c, so -s h maps e_0 to c.
  return -s * h;
}

DilationModel dilate_gio(const KrausChannel& ch, const ComplexMatrix& basis) {
  const CorrelationMatrix corr = correlation_matrix_of(ch, basis);  // throws NotGIO
  const int d = ch.dim();
  ComplexMatrix vectors = gram_factor(corr.entries);
  if (vectors.rows() == ch.rank()) {
    vectors.resize(ch.rank(), d);
    for (int i = 0; i < d; ++i) vectors.col(i) = corr.dynamical_vectors[i];
  }
  const auto r = static_cast<int>(vectors.rows());
  const int da = std::max(r, 2);

  DilationModel m;
  m.system_dim = d;
  m.ancilla_dim = da;
  m.apparatus_init = unit(da, 0);
  m.joint_unitary = ComplexMatrix::Zero(d * da, d * da);
  for (int n = 0; n < d; ++n) {
    ComplexVector c = ComplexVector::Zero(da);
    c.head(r) = vectors.col(n);
    c /= c.norm();
    const ComplexMatrix un = householder_completion(c);
    m.joint_unitary += tensor(outer(basis.col(n), basis.col(n)), un);
  }
  m.readout = ComplexMatrix::Identity(da, da).leftCols(r);
  return m;
}

ComplexMatrix effective_isometry(const KrausChannel& ch, const ComplexMatrix& basis,
                                 int ancilla_dim) {
  if (classify(ch, basis) == IncoherenceClass::NotIO) {
    throw Error(ErrorCode::NotIOForm, "effective isometry is built for IO channels");
  }
  const int da = std::max(ancilla_dim, ch.rank());
  return isometry_from_kraus(ch.kraus_ops(), da);
}

ComplexMatrix extend_to_unitary(const ComplexMatrix& v, const ComplexVector& a0, double tol) {
  const auto ds = static_cast<int>(v.cols());
  if (ds == 0 || v.rows() % ds != 0) {
    throw Error(ErrorCode::NotIsometry, "isometry rows must be a multiple of its columns");
  }
  const auto da = static_cast<int>(v.rows() / ds);
  if (a0.size() != da || std::abs(a0.norm() - 1.0) > tol) {
    throw Error(ErrorCode::BadParameter, "a0 must be a unit vector on the ancilla");
  }
  const double defect = isometry_defect(v);
  if (defect > tol) {
    throw Error(ErrorCode::NotIsometry, "V^dagger V - I has norm " + std::to_string(defect));
  }
  const int total = ds * da;

  // Completion columns orthogonal to range(V), in lexicographic candidate order.
  ComplexMatrix found(total, total);
  found.leftCols(ds) = v;
  int filled = ds;
  for (int s = 0; s < ds && filled < total; ++s) {
    for (int a = 0; a < da && filled < total; ++a) {
      ComplexVector cand = unit(total, s * da + a);
      for (int pass = 0; pass < 2; ++pass) {
        cand -= found.leftCols(filled) * (found.leftCols(filled).adjoint() * cand);
      }
      const double n = cand.norm();
      if (n < 1e-8) continue;
      found.col(filled++) = cand / n;
    }
  }
  if (filled != total) throw Error(ErrorCode::NotIsometry, "Gram-Schmidt completion failed");

  // Column (s, 0) of U' carries V e_s; (s, k >= 1) take the completion vectors in order.
  ComplexMatrix u_prime(total, total);
  int next = ds;
  for (int s = 0; s < ds; ++s) {
    u_prime.col(s * da) = v.col(s);
    for (int k = 1; k < da; ++k) u_prime.col(s * da + k) = found.col(next++);
  }
  const ComplexMatrix g = basis_starting_with(a0 / a0.norm());
  return u_prime * tensor(ComplexMatrix::Identity(ds, ds), g).adjoint();
}

DilationModel dilate_incoherent(const KrausChannel& ch, const ComplexMatrix& basis) {
  const int da = std::max(ch.rank(), 2);
  const ComplexMatrix v = effective_isometry(ch, basis, da);
  return make_model(ch.dim(), da, v, ch.rank());
}

DilationModel dilate(const KrausChannel& ch, const ComplexMatrix& basis) {
  switch (classify(ch, basis)) {
    case IncoherenceClass::GIO:
      return dilate_gio(ch, basis);
    case IncoherenceClass::SIO:
    case IncoherenceClass::IO:
      return dilate_incoherent(ch, basis);
    case IncoherenceClass::NotIO:
      break;
  }
  throw Error(ErrorCode::UnsupportedClass, "no dilation builder for not-IO channels");
}

ComplexMatrix generalized_cnot(int d) {
  if (d < 2) throw Error(ErrorCode::BadDimension, "generalized CNOT needs d >= 2");
  ComplexMatrix u = ComplexMatrix::Zero(d * d, d * d);
  for (int n = 0; n < d; ++n) {
    for (int i = 0; i < d; ++i) u(n * d + (i + n) % d, n * d + i) = 1.0;
  }
  return u;
}

}  // namespace qcoh
