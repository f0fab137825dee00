#include "qcoh/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qcoh {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::AmbiguousGrouping: return "AmbiguousGrouping";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::TraceNotOne: return "TraceNotOne";
    case ErrorCode::BadProfile: return "BadProfile";
    case ErrorCode::BadBasis: return "BadBasis";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::BadDimension: return "BadDimension";
    case ErrorCode::InvalidObservable: return "InvalidObservable";
    case ErrorCode::InvalidPovm: return "InvalidPovm";
    case ErrorCode::ZeroProbabilityOutcome: return "ZeroProbabilityOutcome";
    case ErrorCode::IncompatibleFineGraining: return "IncompatibleFineGraining";
    case ErrorCode::VectorOutsideEigenspace: return "VectorOutsideEigenspace";
    case ErrorCode::NonOrthonormal: return "NonOrthonormal";
    case ErrorCode::InvalidChannel: return "InvalidChannel";
    case ErrorCode::NotTracePreserving: return "NotTracePreserving";
    case ErrorCode::NotUnital: return "NotUnital";
    case ErrorCode::NotGIO: return "NotGIO";
    case ErrorCode::NotIOForm: return "NotIOForm";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::DiagonalNotOne: return "DiagonalNotOne";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::NotIsometry: return "NotIsometry";
    case ErrorCode::UnsupportedClass: return "UnsupportedClass";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

void require_finite(const ComplexMatrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::NonFinite, std::string(what) + " has NaN or infinite entries");
  }
}

void require_square(const ComplexMatrix& m, std::string_view what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::ShapeMismatch,
                std::string(what) + " must be square and non-empty, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

double hermiticity_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).norm();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

double isometry_defect(const ComplexMatrix& v) {
  return (v.adjoint() * v - ComplexMatrix::Identity(v.cols(), v.cols())).norm();
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  return u.rows() == u.cols() && isometry_defect(u) <= tol;
}

Spectrum hermitian_eig(const ComplexMatrix& m, double tol) {
  require_square(m);
  require_finite(m);
  const double defect = hermiticity_defect(m);
  if (defect > tol) {
    throw Error(ErrorCode::NotHermitian, "||M - M^dagger|| = " + std::to_string(defect));
  }
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "Hermitian eigensolver did not converge");
  }
  const auto n = static_cast<int>(h.rows());
  const Eigen::VectorXd& values = solver.eigenvalues();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] > values[b]; });

  Spectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.eigenvalues[k] = values[order[k]];
    out.eigenvectors.col(k) = solver.eigenvectors().col(order[k]);
  }
  return out;
}

ComplexMatrix schur_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "Schur product needs equal shapes");
  }
  return a.cwiseProduct(b);
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_a, int dim_b, Subsystem keep) {
  if (dim_a <= 0 || dim_b <= 0 || m.rows() != m.cols() || m.rows() != dim_a * dim_b) {
    throw Error(ErrorCode::DimMismatch, "operator of size " + std::to_string(m.rows()) +
                                            " does not factor as " + std::to_string(dim_a) +
                                            "x" + std::to_string(dim_b));
  }
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i) {
      for (int j = 0; j < dim_a; ++j) {
        Complex acc = 0.0;
        for (int b = 0; b < dim_b; ++b) acc += m(i * dim_b + b, j * dim_b + b);
        out(i, j) = acc;
      }
    }
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
  for (int a = 0; a < dim_a; ++a) {
    out += m.block(a * dim_b, a * dim_b, dim_b, dim_b);
  }
  return out;
}

double entrywise_l1(const ComplexMatrix& m, bool offdiag_only) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (offdiag_only && i == j) continue;
      acc += std::abs(m(i, j));
    }
  }
  return acc;
}

double hs_norm(const ComplexMatrix& m) { return m.norm(); }

double shannon_entropy(std::span<const double> probs) {
  double s = 0.0;
  for (double p : probs) {
    if (p > kZeroClamp) s -= p * std::log2(p);
  }
  return s;
}

double entropy_of_psd(const ComplexMatrix& m) {
  const Spectrum spec = hermitian_eig(m, 1e-6);
  return shannon_entropy(spec.eigenvalues);
}

double relative_entropy_psd(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw Error(ErrorCode::DimMismatch, "relative entropy needs equal dimensions");
  }
  const Spectrum r = hermitian_eig(rho, 1e-6);
  const Spectrum s = hermitian_eig(sigma, 1e-6);
  const auto n = static_cast<int>(rho.rows());

  double rho_log_rho = 0.0;
  for (double lam : r.eigenvalues) {
    if (lam > kZeroClamp) rho_log_rho += lam * std::log2(lam);
  }

  // weight[l] = <s_l| rho |s_l> computed through rho's clamped spectrum.
  const ComplexMatrix overlap = r.eigenvectors.adjoint() * s.eigenvectors;
  double rho_log_sigma = 0.0;
  for (int l = 0; l < n; ++l) {
    double weight = 0.0;
    for (int k = 0; k < n; ++k) {
      const double lam = r.eigenvalues[k];
      if (lam > kZeroClamp) weight += lam * std::norm(overlap(k, l));
    }
    const double mu = s.eigenvalues[l];
    if (mu <= kZeroClamp) {
      if (weight > kDefaultTol) return std::numeric_limits<double>::infinity();
      continue;
    }
    rho_log_sigma += weight * std::log2(mu);
  }
  return rho_log_rho - rho_log_sigma;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const Spectrum spec = hermitian_eig(m, 1e-6);
  // Eigenvalues at round-off level, 64 eps times the spectral scale, count as zero.
  double scale = 1.0;
  for (double e : spec.eigenvalues) scale = std::max(scale, std::abs(e));
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  Eigen::VectorXd roots(spec.eigenvalues.size());
  for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) {
    const double e = spec.eigenvalues[k];
    roots[static_cast<Eigen::Index>(k)] = e > floor ? std::sqrt(e) : 0.0;
  }
  return spec.eigenvectors * roots.asDiagonal() * spec.eigenvectors.adjoint();
}

RealVector sorted_desc(RealVector v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

MajorizationDefect majorization_defect(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, "majorization needs vectors of equal length");
  }
  const RealVector xs = sorted_desc(RealVector(x.begin(), x.end()));
  const RealVector ys = sorted_desc(RealVector(y.begin(), y.end()));
  double sx = 0.0;
  double sy = 0.0;
  double excess = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < xs.size(); ++m) {
    sx += xs[m];
    sy += ys[m];
    excess = std::max(excess, sy - sx);
  }
  if (xs.empty()) excess = 0.0;
  return {excess, std::abs(sx - sy)};
}

bool majorizes(std::span<const double> x, std::span<const double> y, double tol) {
  const MajorizationDefect d = majorization_defect(x, y);
  return d.partial_sum_excess <= tol && d.total_mismatch <= tol;
}

bool weakly_majorizes(std::span<const double> x, std::span<const double> y, double tol) {
  return majorization_defect(x, y).partial_sum_excess <= tol;
}

ComplexMatrix computational_basis(int d) { return ComplexMatrix::Identity(d, d); }

ComplexMatrix matrix_unit(int d, int i, int j) {
  ComplexMatrix e = ComplexMatrix::Zero(d, d);
  e(i, j) = 1.0;
  return e;
}

ComplexMatrix outer(const ComplexVector& a, const ComplexVector& b) { return a * b.adjoint(); }

}  // namespace qcoh
