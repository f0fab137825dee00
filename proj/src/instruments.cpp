#include "qcoh/instruments.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qcoh {

namespace {

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::DimMismatch, std::string(what) + ": dimensions " + std::to_string(a) +
                                            " and " + std::to_string(b) + " differ");
  }
}

// Columns of fg belonging to block n, in fg order.
ComplexMatrix fg_block(const FineGraining& fg, int n) {
  std::vector<Eigen::Index> cols;
  for (int k = 0; k < fg.dim(); ++k) {
    if (fg.block_of_column()[k] == n) cols.push_back(k);
  }
  ComplexMatrix out(fg.dim(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = fg.basis().col(cols[i]);
  }
  return out;
}

}  // namespace

RealVector born_probabilities(const DensityMatrix& rho, const Observable& r) {
  require_same_dim(rho.dim(), r.dim(), "born_probabilities");
  RealVector p;
  for (const auto& proj : r.projectors()) p.push_back((rho.matrix() * proj).trace().real());
  return p;
}

RealVector born_probabilities(const DensityMatrix& rho, const Povm& m) {
  require_same_dim(rho.dim(), m.dim(), "born_probabilities");
  RealVector p;
  for (const auto& e : m.effects()) p.push_back((rho.matrix() * e).trace().real());
  return p;
}

DensityMatrix dephase(const DensityMatrix& rho, const ComplexMatrix& basis) {
  if (basis.rows() != rho.dim() || basis.cols() != rho.dim() || !is_unitary(basis)) {
    throw Error(ErrorCode::BadBasis, "dephasing basis must be complete and orthonormal");
  }
  const ComplexMatrix in_basis = basis.adjoint() * rho.matrix() * basis;
  const ComplexVector diag = in_basis.diagonal();
  return DensityMatrix::assume_valid(basis * diag.asDiagonal() * basis.adjoint());
}

DensityMatrix luders(const DensityMatrix& rho, const Observable& r) {
  require_same_dim(rho.dim(), r.dim(), "luders");
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& p : r.projectors()) out += p * rho.matrix() * p;
  return DensityMatrix::assume_valid(out);
}

LudersOutcome luders_outcome(const DensityMatrix& rho, const Observable& r, int outcome) {
  require_same_dim(rho.dim(), r.dim(), "luders_outcome");
  if (outcome < 0 || outcome >= r.outcomes()) {
    throw Error(ErrorCode::BadParameter, "outcome index out of range");
  }
  const ComplexMatrix& p = r.projector(outcome);
  const ComplexMatrix branch = p * rho.matrix() * p;
  const double prob = branch.trace().real();
  if (prob <= 1e-12) {
    throw Error(ErrorCode::ZeroProbabilityOutcome,
                "outcome " + std::to_string(outcome) + " has zero probability");
  }
  return {prob, DensityMatrix::assume_valid(branch / prob)};
}

FineGraining optimal_fine_grain(const Observable& r, const DensityMatrix& rho) {
  require_same_dim(rho.dim(), r.dim(), "optimal_fine_grain");
  ComplexMatrix basis(r.dim(), r.dim());
  int col = 0;
  for (int n = 0; n < r.outcomes(); ++n) {
    const ComplexMatrix b = r.block_basis(n);
    const ComplexMatrix block = b.adjoint() * rho.matrix() * b;
    const Spectrum spec = hermitian_eig(0.5 * (block + block.adjoint()), 1e-6);
    basis.middleCols(col, b.cols()) = b * spec.eigenvectors;
    col += static_cast<int>(b.cols());
  }
  return FineGraining::from_basis(r, basis);
}

KrausChannel repeatable_instrument(const Observable& r, const FineGraining& phi,
                                   const std::vector<ComplexMatrix>& theta, double tol) {
  if (!phi.refines(r, tol)) {
    throw Error(ErrorCode::IncompatibleFineGraining, "phi basis does not refine R");
  }
  if (static_cast<int>(theta.size()) != r.outcomes()) {
    throw Error(ErrorCode::BadParameter, "one theta block per outcome is required");
  }
  std::vector<ComplexMatrix> ops;
  for (int n = 0; n < r.outcomes(); ++n) {
    const ComplexMatrix& t = theta[n];
    if (t.rows() != r.dim() || t.cols() != r.degeneracies()[n]) {
      throw Error(ErrorCode::DimMismatch, "theta block " + std::to_string(n) + " has wrong shape");
    }
    require_finite(t, "theta block");
    if ((r.projector(n) * t - t).norm() > tol) {
      throw Error(ErrorCode::VectorOutsideEigenspace,
                  "theta block " + std::to_string(n) + " leaves its eigenspace");
    }
    if (isometry_defect(t) > tol) {
      throw Error(ErrorCode::NonOrthonormal,
                  "theta block " + std::to_string(n) + " is not orthonormal");
    }
    ops.push_back(t * fg_block(phi, n).adjoint());
  }
  return KrausChannel(std::move(ops));
}

KrausChannel repeatable_instrument(const Observable& r, const std::vector<ComplexMatrix>& theta,
                                   double tol) {
  return repeatable_instrument(r, FineGraining::of(r), theta, tol);
}

std::vector<ComplexMatrix> random_theta(const Observable& r, Rng& rng) {
  std::vector<ComplexMatrix> theta;
  for (int n = 0; n < r.outcomes(); ++n) {
    theta.push_back(r.block_basis(n) * random_unitary(r.degeneracies()[n], rng));
  }
  return theta;
}

DensityMatrix generalized_luders(const DensityMatrix& rho, const Povm& m) {
  require_same_dim(rho.dim(), m.dim(), "generalized_luders");
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& root : m.sqrt_effects()) out += root * rho.matrix() * root;
  return DensityMatrix::assume_valid(out);
}

std::vector<ComplexMatrix> unitary_mixing(const Observable& r) {
  const int n_out = r.outcomes();
  std::vector<ComplexMatrix> out;
  for (int k = 1; k <= n_out; ++k) {
    ComplexMatrix u = ComplexMatrix::Zero(r.dim(), r.dim());
    for (int j = 1; j <= n_out; ++j) {
      // Reduce jk mod N first so the phase argument stays small.
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % n_out) / n_out;
      u += std::polar(1.0, angle) * r.projector(j - 1);
    }
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace qcoh
