#include "qcoh/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qcoh {

namespace {

void require_basis(const ComplexMatrix& basis, int dim) {
  if (basis.rows() != dim || basis.cols() != dim || !is_unitary(basis, kDefaultTol)) {
    throw Error(ErrorCode::BadBasis, "basis must be a complete orthonormal set of dimension " +
                                         std::to_string(dim));
  }
}

bool structural(Complex z) { return std::abs(z) > kStructuralZero; }

struct ColumnPattern {
  bool diagonal = true;
  bool io = true;
  bool sio = true;
};

ColumnPattern pattern_of(const ComplexMatrix& k) {
  ColumnPattern p;
  const auto d = k.rows();
  std::vector<int> row_count(d, 0);
  for (Eigen::Index j = 0; j < d; ++j) {
    int col_count = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (!structural(k(i, j))) continue;
      ++col_count;
      ++row_count[i];
      if (i != j) p.diagonal = false;
    }
    if (col_count > 1) p.io = false;
  }
  p.sio = p.io && std::all_of(row_count.begin(), row_count.end(), [](int c) { return c <= 1; });
  return p;
}

ComplexMatrix unvec(const ComplexVector& v, int d) {
  ComplexMatrix x(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) x(i, j) = v[i + j * d];
  }
  return x;
}

constexpr double kNullCutoff = 1e-9;

}  // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus_ops, double tol)
    : ops_(std::move(kraus_ops)) {
  if (ops_.empty()) throw Error(ErrorCode::InvalidChannel, "channel needs at least one operator");
  dim_ = static_cast<int>(ops_.front().rows());
  ComplexMatrix s = ComplexMatrix::Zero(dim_, dim_);
  ComplexMatrix u = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& k : ops_) {
    require_square(k, "Kraus operator");
    require_finite(k, "Kraus operator");
    if (k.rows() != dim_) throw Error(ErrorCode::InvalidChannel, "Kraus operators differ in size");
    s += k.adjoint() * k;
    u += k * k.adjoint();
  }
  const ComplexMatrix id = ComplexMatrix::Identity(dim_, dim_);
  const double max_eig = hermitian_eig(0.5 * (s + s.adjoint()), 1e-6).eigenvalues.front();
  if (max_eig > 1.0 + tol) {
    throw Error(ErrorCode::InvalidChannel,
                "sum K^dagger K exceeds the identity (max eigenvalue " +
                    std::to_string(max_eig) + ")");
  }
  trace_preserving_ = (s - id).norm() <= tol;
  unital_ = (u - id).norm() <= tol;
}

ComplexMatrix KrausChannel::operator()(const ComplexMatrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) {
    throw Error(ErrorCode::DimMismatch, "operator dimension does not match channel");
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& k : ops_) out.noalias() += k * x * k.adjoint();
  return out;
}

KrausChannel identity_channel(int dim) { return KrausChannel({ComplexMatrix::Identity(dim, dim)}); }

KrausChannel complete_dephasing(const ComplexMatrix& basis) {
  require_basis(basis, static_cast<int>(basis.rows()));
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index n = 0; n < basis.cols(); ++n) ops.push_back(outer(basis.col(n), basis.col(n)));
  return KrausChannel(std::move(ops));
}

KrausChannel luders_channel(const Observable& r) { return KrausChannel(r.projectors()); }

KrausChannel phase_damping(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::BadParameter, "p must lie in [0, 1]");
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return KrausChannel({std::sqrt(p) * ComplexMatrix::Identity(2, 2), std::sqrt(1.0 - p) * z});
}

KrausChannel bit_flip(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::BadParameter, "p must lie in [0, 1]");
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  return KrausChannel({std::sqrt(p) * ComplexMatrix::Identity(2, 2), std::sqrt(1.0 - p) * x});
}

KrausChannel amplitude_damping(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw Error(ErrorCode::BadParameter, "gamma must lie in [0, 1]");
  }
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(gamma);
  return KrausChannel({k0, k1});
}

KrausChannel relabeling_example() {
  const double s = 1.0 / std::sqrt(2.0);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k1(0, 0) = s;
  k1(0, 1) = s;
  ComplexMatrix k2 = ComplexMatrix::Zero(2, 2);
  k2(1, 0) = s;
  k2(1, 1) = -s;
  return KrausChannel({k1, k2});
}

KrausChannel unitary_mixture(const std::vector<ComplexMatrix>& unitaries,
                             const std::vector<double>& weights) {
  if (unitaries.size() != weights.size() || unitaries.empty()) {
    throw Error(ErrorCode::BadParameter, "one weight per unitary is required");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > kDefaultTol ||
      std::any_of(weights.begin(), weights.end(), [](double w) { return w < 0.0; })) {
    throw Error(ErrorCode::BadParameter, "mixture weights must be a probability vector");
  }
  std::vector<ComplexMatrix> ops;
  for (std::size_t k = 0; k < unitaries.size(); ++k) {
    ops.push_back(std::sqrt(weights[k]) * unitaries[k]);
  }
  return KrausChannel(std::move(ops));
}

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho) {
  if (!ch.trace_preserving()) {
    throw Error(ErrorCode::NotTracePreserving, "use apply_operation for trace-decreasing maps");
  }
  return DensityMatrix::assume_valid(ch(rho.matrix()));
}

ChannelOutput apply_operation(const KrausChannel& ch, const DensityMatrix& rho) {
  ComplexMatrix out = ch(rho.matrix());
  const double tr = out.trace().real();
  return {std::move(out), tr};
}

double action_distance(const KrausChannel& a, const KrausChannel& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimMismatch, "channels differ in dimension");
  const int d = a.dim();
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const ComplexMatrix e = matrix_unit(d, i, j);
      worst = std::max(worst, (a(e) - b(e)).norm());
    }
  }
  return worst;
}

std::string_view to_string(IncoherenceClass c) {
  switch (c) {
    case IncoherenceClass::GIO: return "GIO";
    case IncoherenceClass::SIO: return "SIO-not-GIO";
    case IncoherenceClass::IO: return "IO-not-SIO";
    case IncoherenceClass::NotIO: return "not-IO";
  }
  return "unknown";
}

IncoherenceClass classify(const KrausChannel& ch, const ComplexMatrix& basis) {
  require_basis(basis, ch.dim());
  if (!ch.trace_preserving()) {
    throw Error(ErrorCode::NotTracePreserving, "classification needs a trace-preserving channel");
  }
  bool all_diag = true;
  bool all_sio = true;
  bool all_io = true;
  for (const auto& k : ch.kraus_ops()) {
    const ColumnPattern p = pattern_of(basis.adjoint() * k * basis);
    all_diag = all_diag && p.diagonal;
    all_sio = all_sio && p.sio;
    all_io = all_io && p.io;
  }
  if (all_diag) return IncoherenceClass::GIO;
  if (all_sio) return IncoherenceClass::SIO;
  if (all_io) return IncoherenceClass::IO;
  return IncoherenceClass::NotIO;
}

IncoherenceClass classify(const KrausChannel& ch) {
  return classify(ch, computational_basis(ch.dim()));
}

CorrelationMatrix correlation_matrix_of(const KrausChannel& ch, const ComplexMatrix& basis) {
  if (classify(ch, basis) != IncoherenceClass::GIO) {
    throw Error(ErrorCode::NotGIO, "correlation matrix is defined for GIO only");
  }
  const int d = ch.dim();
  const int r = ch.rank();
  CorrelationMatrix out;
  out.dynamical_vectors.assign(d, ComplexVector::Zero(r));
  for (int n = 0; n < r; ++n) {
    const ComplexMatrix k = basis.adjoint() * ch.kraus_ops()[n] * basis;
    for (int i = 0; i < d; ++i) out.dynamical_vectors[i][n] = k(i, i);
  }
  out.entries.resize(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      out.entries(i, j) = out.dynamical_vectors[i].dot(out.dynamical_vectors[j]);
    }
  }
  return out;
}

CorrelationMatrix correlation_matrix_of(const KrausChannel& ch) {
  return correlation_matrix_of(ch, computational_basis(ch.dim()));
}

ComplexMatrix gram_factor(const ComplexMatrix& c, double tol) {
  require_square(c, "correlation matrix");
  require_finite(c, "correlation matrix");
  if (hermiticity_defect(c) > tol) throw Error(ErrorCode::NotPSD, "correlation matrix not Hermitian");
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    if (std::abs(c(i, i) - Complex(1.0, 0.0)) > tol) {
      throw Error(ErrorCode::DiagonalNotOne, "correlation matrix diagonal entry " +
                                                 std::to_string(i) + " differs from 1");
    }
  }
  const Spectrum spec = hermitian_eig(c, tol);
  if (spec.eigenvalues.back() < -tol) {
    throw Error(ErrorCode::NotPSD,
                "correlation matrix eigenvalue " + std::to_string(spec.eigenvalues.back()));
  }
  int rank = 0;
  for (double lam : spec.eigenvalues) rank += lam > 1e-12 ? 1 : 0;
  ComplexMatrix v(rank, c.cols());
  for (int n = 0; n < rank; ++n) {
    v.row(n) = std::sqrt(spec.eigenvalues[n]) * spec.eigenvectors.col(n).adjoint();
  }
  return v;
}

KrausChannel gio_from_vectors(const ComplexMatrix& v, const ComplexMatrix& basis) {
  require_basis(basis, static_cast<int>(v.cols()));
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index n = 0; n < v.rows(); ++n) {
    const ComplexVector diag = v.row(n).transpose();
    ops.push_back(basis * diag.asDiagonal() * basis.adjoint());
  }
  return KrausChannel(std::move(ops));
}

KrausChannel gio_from_vectors(const ComplexMatrix& v) {
  return gio_from_vectors(v, computational_basis(static_cast<int>(v.cols())));
}

KrausChannel gio_from_correlation(const ComplexMatrix& c, const ComplexMatrix& basis, double tol) {
  const ComplexMatrix v = gram_factor(c, tol);
  return gio_from_vectors(v, basis);
}

KrausChannel gio_from_correlation(const ComplexMatrix& c, double tol) {
  return gio_from_correlation(c, computational_basis(static_cast<int>(c.rows())), tol);
}

ComplexMatrix IndexMap::matrix() const {
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) m(map[i], i) = 1.0;
  return m;
}

KrausFactor factor_kraus(const ComplexMatrix& k, const ComplexMatrix& basis) {
  require_square(k, "Kraus operator");
  const int d = static_cast<int>(k.rows());
  require_basis(basis, d);
  const ComplexMatrix kb = basis.adjoint() * k * basis;

  std::vector<int> f(d, -1);
  ComplexVector c = ComplexVector::Zero(d);
  for (int i = 0; i < d; ++i) {
    for (int row = 0; row < d; ++row) {
      if (!structural(kb(row, i))) continue;
      if (f[i] >= 0) {
        throw Error(ErrorCode::NotIOForm,
                    "column " + std::to_string(i) + " has more than one structural entry");
      }
      f[i] = row;
      c[i] = kb(row, i);
    }
  }

  std::vector<bool> used(d, false);
  bool injective = true;
  for (int i = 0; i < d; ++i) {
    if (f[i] < 0) continue;
    if (used[f[i]]) injective = false;
    used[f[i]] = true;
  }
  int next_free = 0;
  for (int i = 0; i < d; ++i) {
    if (f[i] >= 0) continue;
    if (injective) {
      while (used[next_free]) ++next_free;
      f[i] = next_free;
      used[next_free] = true;
    } else {
      f[i] = i;
    }
  }
  std::vector<bool> hit(d, false);
  for (int i = 0; i < d; ++i) hit[f[i]] = true;
  const bool bijective = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });

  KrausFactor out;
  out.index_map = {d, f, bijective ? IndexMapKind::Permutation : IndexMapKind::Relabeling};
  out.diagonal = c.asDiagonal();
  return out;
}

KrausFactor factor_kraus(const ComplexMatrix& k) {
  return factor_kraus(k, computational_basis(static_cast<int>(k.rows())));
}

double io_completeness_residual(const KrausChannel& ch, const ComplexMatrix& basis) {
  const int d = ch.dim();
  ComplexMatrix g = ComplexMatrix::Zero(d, d);
  for (const auto& k : ch.kraus_ops()) {
    const KrausFactor fac = factor_kraus(k, basis);
    const auto& f = fac.index_map.map;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (f[i] == f[j]) g(i, j) += std::conj(fac.diagonal(i, i)) * fac.diagonal(j, j);
      }
    }
  }
  return (g - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

bool io_completeness_check(const KrausChannel& ch, const ComplexMatrix& basis, double tol) {
  return io_completeness_residual(ch, basis) <= tol;
}

std::vector<ComplexMatrix> commutant(const KrausChannel& ch) {
  if (!ch.unital() || !ch.trace_preserving()) {
    throw Error(ErrorCode::NotUnital, "commutant equals the fixed points only for unital channels");
  }
  const int d = ch.dim();
  const int d2 = d * d;
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const int blocks = 2 * ch.rank();
  ComplexMatrix system(d2 * blocks, d2);
  int row = 0;
  for (const auto& k : ch.kraus_ops()) {
    for (const ComplexMatrix& a : {k, ComplexMatrix(k.adjoint())}) {
      // vec(XA - AX) = (A^T (x) I - I (x) A) vec(X), column-major vec.
      system.middleRows(row, d2) = tensor(a.transpose(), id) - tensor(id, a);
      row += d2;
    }
  }
  // Same singular values as the real embedding, each with multiplicity two.
  Eigen::JacobiSVD<ComplexMatrix> svd(system, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();

  std::vector<ComplexMatrix> basis;
  for (int k = 0; k < d2; ++k) {
    const double s = k < sv.size() ? sv[k] : 0.0;
    if (s > kNullCutoff) continue;
    basis.push_back(unvec(svd.matrixV().col(k), d));
  }
  return basis;
}

int fixed_point_dimension(const KrausChannel& ch) {
  const int d = ch.dim();
  const int d2 = d * d;
  // vec(K X K^dagger) = (conj(K) (x) K) vec(X).
  ComplexMatrix super = ComplexMatrix::Zero(d2, d2);
  for (const auto& k : ch.kraus_ops()) super += tensor(k.conjugate(), k);
  super -= ComplexMatrix::Identity(d2, d2);
  Eigen::JacobiSVD<ComplexMatrix> svd(super);
  int nullity = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    nullity += svd.singularValues()[k] <= kNullCutoff ? 1 : 0;
  }
  return nullity;
}

FixedPointResiduals fixed_point_check(const KrausChannel& ch, const ComplexMatrix& x) {
  if (x.rows() != ch.dim() || x.cols() != ch.dim()) {
    throw Error(ErrorCode::DimMismatch, "operator dimension does not match channel");
  }
  if (!ch.trace_preserving()) {
    throw Error(ErrorCode::NotTracePreserving, "fixed-point identity needs a trace-preserving map");
  }
  const int d = ch.dim();
  ComplexMatrix lhs = ComplexMatrix::Zero(d, d);
  for (const auto& k : ch.kraus_ops()) {
    const ComplexMatrix c = x * k - k * x;
    lhs += c * c.adjoint();
  }
  const ComplexMatrix xxd = x * x.adjoint();
  const ComplexMatrix phi_x = ch(x);
  const ComplexMatrix phi_xxd = ch(xxd);
  const ComplexMatrix phi_xd = ch(ComplexMatrix(x.adjoint()));
  const ComplexMatrix phi_id = ch(ComplexMatrix::Identity(d, d));

  FixedPointResiduals out;
  out.fixedness = (phi_x - x).norm();
  out.identity = (lhs - phi_xxd + xxd).norm();
  out.expanded_identity =
      (lhs - (phi_xxd - phi_x * x.adjoint() - x * phi_xd + x * phi_id * x.adjoint())).norm();
  return out;
}

DensityMatrix iterate(const KrausChannel& ch, const DensityMatrix& rho, int steps,
                      const ComplexMatrix& basis) {
  if (classify(ch, basis) != IncoherenceClass::GIO) {
    throw Error(ErrorCode::NotGIO, "iterate is defined for GIO");
  }
  if (steps < 0) throw Error(ErrorCode::BadParameter, "step count must be non-negative");
  ComplexMatrix state = rho.matrix();
  for (int n = 0; n < steps; ++n) state = ch(state);
  return DensityMatrix::assume_valid(state);
}

DensityMatrix iterate(const KrausChannel& ch, const DensityMatrix& rho, int steps) {
  return iterate(ch, rho, steps, computational_basis(ch.dim()));
}

double max_offdiagonal(const ComplexMatrix& rho, const ComplexMatrix& basis) {
  const ComplexMatrix m = basis.adjoint() * rho * basis;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != j) worst = std::max(worst, std::abs(m(i, j)));
    }
  }
  return worst;
}

namespace {

std::vector<int> random_permutation(int dim, Rng& rng) {
  std::vector<int> p(dim);
  for (int i = 0; i < dim; ++i) p[i] = i;
  for (int i = dim - 1; i > 0; --i) std::swap(p[i], p[rng.uniform_int(0, i)]);
  return p;
}

std::vector<ComplexMatrix> sio_operators(int dim, int r, Rng& rng) {
  ComplexMatrix w(r, dim);
  for (int i = 0; i < dim; ++i) w.col(i) = rng.unit_vector(r);
  std::vector<ComplexMatrix> ops;
  for (int n = 0; n < r; ++n) {
    std::vector<int> perm = random_permutation(dim, rng);
    if (n == 1 && dim >= 2) {
      bool identity = true;
      for (int i = 0; i < dim; ++i) identity = identity && perm[i] == i;
      if (identity) std::swap(perm[0], perm[1]);
    }
    ComplexMatrix k = ComplexMatrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) k(perm[i], i) = w(n, i);
    ops.push_back(std::move(k));
  }
  return ops;
}

}  // namespace

KrausChannel random_gio(int dim, int r, Rng& rng) {
  if (dim < 1 || r < 1) throw Error(ErrorCode::BadDimension, "random_gio needs dim, r >= 1");
  ComplexMatrix v(r, dim);
  for (int i = 0; i < dim; ++i) v.col(i) = rng.unit_vector(r);
  return gio_from_vectors(v);
}

KrausChannel random_sio(int dim, int r, Rng& rng) {
  if (dim < 1 || r < 1) throw Error(ErrorCode::BadDimension, "random_sio needs dim, r >= 1");
  return KrausChannel(sio_operators(dim, r, rng));
}

KrausChannel random_io(int dim, int sio_rank, Rng& rng) {
  if (dim < 1 || sio_rank < 1) throw Error(ErrorCode::BadDimension, "random_io needs dim, rank >= 1");
  const double weight = rng.uniform(0.2, 0.8);
  const ComplexMatrix v = random_unitary(dim, rng);
  std::vector<ComplexMatrix> ops;
  for (int k = 0; k < dim; ++k) {
    const int target = rng.uniform_int(0, dim - 1);
    ComplexMatrix op = ComplexMatrix::Zero(dim, dim);
    op.row(target) = std::sqrt(weight) * v.col(k).adjoint();
    ops.push_back(std::move(op));
  }
  for (auto& k : sio_operators(dim, sio_rank, rng)) ops.push_back(std::sqrt(1.0 - weight) * k);
  return KrausChannel(std::move(ops));
}

KrausChannel random_unitary_mixture(int dim, int count, Rng& rng) {
  if (dim < 1 || count < 1) throw Error(ErrorCode::BadDimension, "mixture needs dim, count >= 1");
  std::vector<ComplexMatrix> us;
  std::vector<double> w;
  double total = 0.0;
  for (int k = 0; k < count; ++k) {
    us.push_back(random_unitary(dim, rng));
    w.push_back(rng.uniform(0.05, 1.0));
    total += w.back();
  }
  for (auto& x : w) x /= total;
  return unitary_mixture(us, w);
}

}  // namespace qcoh
