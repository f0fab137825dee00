#include "qcoh/coherence.hpp"

#include <string>

namespace qcoh {

namespace {

void require_basis_for(const DensityMatrix& rho, const ComplexMatrix& basis) {
  if (basis.rows() != rho.dim() || basis.cols() != rho.dim() || !is_unitary(basis)) {
    throw Error(ErrorCode::BadBasis, "coherence basis must be complete and orthonormal");
  }
}

void require_refines(const FineGraining& fg, const Observable& r) {
  if (!fg.refines(r)) {
    throw Error(ErrorCode::IncompatibleFineGraining, "fine-graining does not refine R");
  }
}

void require_b_dim(const BipartiteState& rho, const Observable& r) {
  if (r.dim() != rho.dim_b) {
    throw Error(ErrorCode::DimMismatch, "observable on B has dimension " +
                                            std::to_string(r.dim()) + ", subsystem B has " +
                                            std::to_string(rho.dim_b));
  }
}

}  // namespace

double c_l1(const DensityMatrix& rho, const ComplexMatrix& basis) {
  require_basis_for(rho, basis);
  return entrywise_l1(basis.adjoint() * rho.matrix() * basis, true);
}

double c_re(const DensityMatrix& rho, const ComplexMatrix& basis) {
  require_basis_for(rho, basis);
  const ComplexMatrix m = basis.adjoint() * rho.matrix() * basis;
  RealVector diag(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) diag[static_cast<std::size_t>(i)] = m(i, i).real();
  return shannon_entropy(diag) - von_neumann_entropy(rho);
}

double c_l1_coarse(const DensityMatrix& rho, const Observable& r, const FineGraining& fg) {
  require_refines(fg, r);
  const ComplexMatrix m = fg.basis().adjoint() * rho.matrix() * fg.basis();
  const auto& block = fg.block_of_column();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (block[i] != block[j]) acc += std::abs(m(i, j));
    }
  }
  return acc;
}

double c_re_coarse(const DensityMatrix& rho, const Observable& r) {
  return von_neumann_entropy(luders(rho, r)) - von_neumann_entropy(rho);
}

double hierarchy_gap(const DensityMatrix& rho, const Observable& r, const FineGraining& fg) {
  require_refines(fg, r);
  return relative_entropy(luders(rho, r), dephase(rho, fg.basis()));
}

DensityMatrix luders_on_b(const BipartiteState& rho, const Observable& r_on_b) {
  require_b_dim(rho, r_on_b);
  const ComplexMatrix id_a = ComplexMatrix::Identity(rho.dim_a, rho.dim_a);
  const int d = rho.state.dim();
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (const auto& p : r_on_b.projectors()) {
    const ComplexMatrix lifted = tensor(id_a, p);
    out += lifted * rho.state.matrix() * lifted;
  }
  return DensityMatrix::assume_valid(out);
}

double qi_coherence(const BipartiteState& rho, const Observable& r_on_b) {
  return von_neumann_entropy(luders_on_b(rho, r_on_b)) - von_neumann_entropy(rho.state);
}

double luders_discord(const BipartiteState& rho, const Observable& r_on_b) {
  const BipartiteState measured(rho.dim_a, rho.dim_b, luders_on_b(rho, r_on_b));
  return mutual_information(rho) - mutual_information(measured);
}

ClassicalCorrelationTerms classical_correlation_terms(const BipartiteState& rho,
                                                      const Observable& r_on_b) {
  require_b_dim(rho, r_on_b);
  const ComplexMatrix id_a = ComplexMatrix::Identity(rho.dim_a, rho.dim_a);
  const DensityMatrix rho_a = rho.reduced_a();
  ClassicalCorrelationTerms terms{0.0, 0.0};
  for (const auto& p : r_on_b.projectors()) {
    const ComplexMatrix lifted = tensor(id_a, p);
    const ComplexMatrix branch = lifted * rho.state.matrix() * lifted;
    const double prob = branch.trace().real();
    if (prob < 1e-12) continue;
    const BipartiteState conditional(rho.dim_a, rho.dim_b,
                                     DensityMatrix::assume_valid(branch / prob));
    terms.holevo += prob * relative_entropy(conditional.reduced_a(), rho_a);
    terms.residual += prob * mutual_information(conditional);
  }
  return terms;
}

double classical_correlation(const BipartiteState& rho, const Observable& r_on_b) {
  return classical_correlation_terms(rho, r_on_b).total();
}

double povm_coherence(const DensityMatrix& rho, const Povm& m) {
  if (rho.dim() != m.dim()) throw Error(ErrorCode::DimMismatch, "POVM and state dimensions differ");
  ComplexMatrix sigma = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& e : m.effects()) sigma += e * rho.matrix() * e;
  return relative_entropy_psd(rho.matrix(), 0.5 * (sigma + sigma.adjoint()));
}

double povm_coherence_modified(const DensityMatrix& rho, const Povm& m) {
  return relative_entropy(rho, generalized_luders(rho, m));
}

}  // namespace qcoh
