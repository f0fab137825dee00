#include "qcoh/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qcoh {

namespace {

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

ComplexMatrix block_diagonal(const std::vector<ComplexMatrix>& blocks) {
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  Eigen::Index offset = 0;
  for (const auto& b : blocks) {
    out.block(offset, offset, b.rows(), b.cols()) = b;
    offset += b.rows();
  }
  return out;
}

}  // namespace

DensityMatrix::DensityMatrix(const ComplexMatrix& m, double tol) {
  require_square(m, "density matrix");
  require_finite(m, "density matrix");
  const double defect = hermiticity_defect(m);
  if (defect > tol) {
    throw Error(ErrorCode::NotHermitian, "density matrix ||M - M^dagger|| = " +
                                             std::to_string(defect));
  }
  const Complex tr = m.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol) {
    throw Error(ErrorCode::TraceNotOne, "trace = " + std::to_string(tr.real()));
  }
  const ComplexMatrix h = hermitian_part(m);
  const double min_eig = hermitian_eig(h, tol).eigenvalues.back();
  if (min_eig < -tol) {
    throw Error(ErrorCode::NotPositive, "minimum eigenvalue " + std::to_string(min_eig));
  }
  m_ = h;
}

DensityMatrix DensityMatrix::assume_valid(const ComplexMatrix& m) {
  require_square(m, "density matrix");
  return DensityMatrix(Trusted{}, hermitian_part(m));
}

DensityMatrix validate_density(const ComplexMatrix& m, double tol) { return DensityMatrix(m, tol); }

DensityMatrix pure_state(const ComplexVector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw Error(ErrorCode::InvalidState, "zero state vector");
  const ComplexVector u = psi / n;
  return DensityMatrix::assume_valid(u * u.adjoint());
}

DensityMatrix maximally_mixed(int dim) {
  return DensityMatrix::assume_valid(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

double von_neumann_entropy(const DensityMatrix& rho) { return entropy_of_psd(rho.matrix()); }

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw Error(ErrorCode::DimMismatch, "relative entropy of states with different dimensions");
  }
  return relative_entropy_psd(rho.matrix(), sigma.matrix());
}

// ---------------------------------------------------------------------------
// Observable

Observable Observable::from_grouped_basis(const ComplexMatrix& basis, const RealVector& values,
                                          const std::vector<int>& degeneracies) {
  require_square(basis, "eigenbasis");
  const auto d = static_cast<int>(basis.rows());
  if (values.size() != degeneracies.size() || values.empty()) {
    throw Error(ErrorCode::InvalidObservable, "one eigenvalue per block is required");
  }
  if (std::accumulate(degeneracies.begin(), degeneracies.end(), 0) != d ||
      std::any_of(degeneracies.begin(), degeneracies.end(), [](int x) { return x <= 0; })) {
    throw Error(ErrorCode::BadProfile, "degeneracies must be positive and sum to the dimension");
  }
  if (!is_unitary(basis, kDefaultTol)) {
    throw Error(ErrorCode::NonOrthonormal, "eigenbasis is not orthonormal");
  }
  const auto blocks = static_cast<int>(values.size());
  std::vector<int> offset(blocks, 0);
  for (int n = 1; n < blocks; ++n) offset[n] = offset[n - 1] + degeneracies[n - 1];

  std::vector<int> order(blocks);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] > values[b]; });
  for (int k = 1; k < blocks; ++k) {
    if (values[order[k - 1]] - values[order[k]] <= kGroupTol) {
      throw Error(ErrorCode::InvalidObservable, "eigenvalues must be pairwise distinct");
    }
  }

  Observable obs;
  obs.dim_ = d;
  obs.basis_.resize(d, d);
  int col = 0;
  for (int k = 0; k < blocks; ++k) {
    const int src = order[k];
    const int dn = degeneracies[src];
    obs.values_.push_back(values[src]);
    obs.degeneracies_.push_back(dn);
    const ComplexMatrix cols = basis.middleCols(offset[src], dn);
    obs.basis_.middleCols(col, dn) = cols;
    obs.projectors_.push_back(cols * cols.adjoint());
    for (int i = 0; i < dn; ++i) obs.block_of_.push_back(k);
    col += dn;
  }
  return obs;
}

Observable Observable::from_basis(const ComplexMatrix& basis, const RealVector& values) {
  return from_grouped_basis(basis, values, std::vector<int>(values.size(), 1));
}

Observable Observable::trivial(int dim) {
  return from_grouped_basis(ComplexMatrix::Identity(dim, dim), {1.0}, {dim});
}

Observable Observable::from_projectors(const RealVector& eigenvalues,
                                       const std::vector<ComplexMatrix>& projectors, double tol) {
  if (eigenvalues.size() != projectors.size() || projectors.empty()) {
    throw Error(ErrorCode::InvalidObservable, "one projector per eigenvalue is required");
  }
  const auto d = static_cast<int>(projectors.front().rows());
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  std::vector<ComplexMatrix> herm;
  for (const auto& p : projectors) {
    require_square(p, "projector");
    require_finite(p, "projector");
    if (p.rows() != d) throw Error(ErrorCode::DimMismatch, "projectors differ in dimension");
    if (hermiticity_defect(p) > tol) {
      throw Error(ErrorCode::InvalidObservable, "projector is not Hermitian");
    }
    if ((p * p - p).norm() > tol) {
      throw Error(ErrorCode::InvalidObservable, "projector is not idempotent");
    }
    herm.push_back(hermitian_part(p));
    total += p;
  }
  for (std::size_t m = 0; m < herm.size(); ++m) {
    for (std::size_t n = m + 1; n < herm.size(); ++n) {
      if ((herm[m] * herm[n]).norm() > tol) {
        throw Error(ErrorCode::InvalidObservable, "projectors are not mutually orthogonal");
      }
    }
  }
  if ((total - ComplexMatrix::Identity(d, d)).norm() > tol) {
    throw Error(ErrorCode::InvalidObservable, "projectors do not resolve the identity");
  }

  ComplexMatrix basis(d, d);
  std::vector<int> degeneracies;
  int col = 0;
  for (const auto& p : herm) {
    const Spectrum spec = hermitian_eig(p, tol);
    int rank = 0;
    for (double lam : spec.eigenvalues) rank += lam > 0.5 ? 1 : 0;
    if (rank == 0) throw Error(ErrorCode::InvalidObservable, "zero projector");
    if (col + rank > d) throw Error(ErrorCode::InvalidObservable, "projector ranks exceed dim");
    basis.middleCols(col, rank) = spec.eigenvectors.leftCols(rank);
    degeneracies.push_back(rank);
    col += rank;
  }
  if (col != d) throw Error(ErrorCode::InvalidObservable, "projector ranks do not sum to dim");
  Observable obs = from_grouped_basis(basis, eigenvalues, degeneracies);
  // Keep the caller's projectors (after reordering) rather than the rebuilt ones.
  for (int n = 0; n < obs.outcomes(); ++n) {
    const auto it = std::find(eigenvalues.begin(), eigenvalues.end(), obs.values_[n]);
    obs.projectors_[n] = herm[static_cast<std::size_t>(it - eigenvalues.begin())];
  }
  return obs;
}

ComplexMatrix Observable::block_basis(int n) const {
  int offset = 0;
  for (int m = 0; m < n; ++m) offset += degeneracies_.at(m);
  return basis_.middleCols(offset, degeneracies_.at(n));
}

int Observable::max_degeneracy() const {
  return *std::max_element(degeneracies_.begin(), degeneracies_.end());
}

ComplexMatrix Observable::matrix() const {
  ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
  for (int n = 0; n < outcomes(); ++n) out += values_[n] * projectors_[n];
  return out;
}

Observable spectral_decompose(const ComplexMatrix& h, double group_tol) {
  const Spectrum spec = hermitian_eig(h, kDefaultTol);
  const auto d = static_cast<int>(spec.eigenvalues.size());
  RealVector values;
  std::vector<int> degeneracies;
  int start = 0;
  for (int k = 1; k <= d; ++k) {
    if (k == d || spec.eigenvalues[k - 1] - spec.eigenvalues[k] > group_tol) {
      const double spread = spec.eigenvalues[start] - spec.eigenvalues[k - 1];
      if (spread > group_tol) {
        throw Error(ErrorCode::AmbiguousGrouping,
                    "eigenvalue cluster spread " + std::to_string(spread) +
                        " exceeds grouping tolerance");
      }
      double mean = 0.0;
      for (int j = start; j < k; ++j) mean += spec.eigenvalues[j];
      values.push_back(mean / (k - start));
      degeneracies.push_back(k - start);
      start = k;
    }
  }
  return Observable::from_grouped_basis(spec.eigenvectors, values, degeneracies);
}

// ---------------------------------------------------------------------------
// FineGraining

FineGraining FineGraining::from_basis(const Observable& parent, const ComplexMatrix& basis,
                                      double tol) {
  if (basis.rows() != parent.dim() || basis.cols() != parent.dim()) {
    throw Error(ErrorCode::BadBasis, "fine-graining basis must be a full d x d basis");
  }
  require_finite(basis, "fine-graining basis");
  if (!is_unitary(basis, tol)) {
    throw Error(ErrorCode::NonOrthonormal, "fine-graining basis is not orthonormal");
  }
  const int d = parent.dim();
  const int blocks = parent.outcomes();
  std::vector<std::vector<int>> members(blocks);
  for (int k = 0; k < d; ++k) {
    const ComplexVector v = basis.col(k);
    int found = -1;
    for (int n = 0; n < blocks; ++n) {
      if ((parent.projector(n) * v - v).norm() <= std::sqrt(tol)) {
        found = n;
        break;
      }
    }
    if (found < 0) {
      throw Error(ErrorCode::IncompatibleFineGraining,
                  "basis vector " + std::to_string(k) + " lies in no eigenspace");
    }
    members[found].push_back(k);
  }
  FineGraining fg;
  fg.basis_.resize(d, d);
  int col = 0;
  for (int n = 0; n < blocks; ++n) {
    if (static_cast<int>(members[n].size()) != parent.degeneracies()[n]) {
      throw Error(ErrorCode::IncompatibleFineGraining, "block sizes do not match degeneracies");
    }
    for (int k : members[n]) {
      fg.basis_.col(col++) = basis.col(k);
      fg.block_of_.push_back(n);
    }
  }
  fg.parent_values_ = parent.eigenvalues();
  fg.degeneracies_ = parent.degeneracies();
  fg.assign_labels();
  return fg;
}

FineGraining FineGraining::of(const Observable& parent) {
  FineGraining fg;
  fg.basis_ = parent.eigenbasis();
  fg.block_of_ = parent.block_of_column();
  fg.parent_values_ = parent.eigenvalues();
  fg.degeneracies_ = parent.degeneracies();
  fg.assign_labels();
  return fg;
}

void FineGraining::assign_labels() {
  const int max_d = *std::max_element(degeneracies_.begin(), degeneracies_.end());
  double min_gap = 1.0;
  if (parent_values_.size() > 1) {
    min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n < parent_values_.size(); ++n) {
      min_gap = std::min(min_gap, parent_values_[n - 1] - parent_values_[n]);
    }
  }
  const double eps = min_gap / (2.0 * max_d);
  labels_.clear();
  int previous = -1;
  int i = 0;
  for (int n : block_of_) {
    i = (n == previous) ? i + 1 : 0;
    previous = n;
    labels_.push_back(parent_values_[n] + i * eps);
  }
}

double FineGraining::coarse_value(double label) const {
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    if (labels_[k] == label) return parent_values_[block_of_[k]];
  }
  throw Error(ErrorCode::BadParameter, "label is not a fine-graining eigenvalue");
}

Observable FineGraining::as_observable() const { return Observable::from_basis(basis_, labels_); }

bool FineGraining::refines(const Observable& r, double tol) const {
  if (r.dim() != dim() || r.outcomes() != static_cast<int>(parent_values_.size())) return false;
  for (int n = 0; n < r.outcomes(); ++n) {
    if (std::abs(r.eigenvalues()[n] - parent_values_[n]) > kGroupTol) return false;
    ComplexMatrix p = ComplexMatrix::Zero(dim(), dim());
    for (int k = 0; k < dim(); ++k) {
      if (block_of_[k] == n) p += basis_.col(k) * basis_.col(k).adjoint();
    }
    if ((p - r.projector(n)).norm() > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Bipartite states and POVMs

BipartiteState::BipartiteState(int dim_a_, int dim_b_, DensityMatrix state_)
    : dim_a(dim_a_), dim_b(dim_b_), state(std::move(state_)) {
  if (dim_a <= 0 || dim_b <= 0 || state.dim() != dim_a * dim_b) {
    throw Error(ErrorCode::DimMismatch, "bipartite dims do not match the state dimension");
  }
}

DensityMatrix BipartiteState::reduced_a() const {
  return DensityMatrix::assume_valid(partial_trace(state.matrix(), dim_a, dim_b, Subsystem::A));
}

DensityMatrix BipartiteState::reduced_b() const {
  return DensityMatrix::assume_valid(partial_trace(state.matrix(), dim_a, dim_b, Subsystem::B));
}

double mutual_information(const BipartiteState& rho) {
  return von_neumann_entropy(rho.reduced_a()) + von_neumann_entropy(rho.reduced_b()) -
         von_neumann_entropy(rho.state);
}

Povm::Povm(std::vector<ComplexMatrix> effects, double tol) : effects_(std::move(effects)) {
  if (effects_.empty()) throw Error(ErrorCode::InvalidPovm, "POVM needs at least one effect");
  const auto d = effects_.front().rows();
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (auto& m : effects_) {
    require_square(m, "POVM effect");
    require_finite(m, "POVM effect");
    if (m.rows() != d) throw Error(ErrorCode::DimMismatch, "POVM effects differ in dimension");
    if (hermiticity_defect(m) > tol) {
      throw Error(ErrorCode::InvalidPovm, "POVM effect is not Hermitian");
    }
    m = hermitian_part(m);
    const Spectrum spec = hermitian_eig(m, tol);
    if (spec.eigenvalues.back() < -tol || spec.eigenvalues.front() > 1.0 + tol) {
      throw Error(ErrorCode::InvalidPovm, "POVM effect eigenvalues leave [0, 1]");
    }
    total += m;
  }
  if ((total - ComplexMatrix::Identity(d, d)).norm() > tol) {
    throw Error(ErrorCode::InvalidPovm, "POVM effects do not sum to the identity");
  }
  roots_.reserve(effects_.size());
  for (const auto& m : effects_) roots_.push_back(psd_sqrt(m));
}

Povm Povm::of(const Observable& r) { return Povm(r.projectors()); }

// ---------------------------------------------------------------------------
// Seeded generators

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

int Rng::uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
}

ComplexMatrix Rng::ginibre(int rows, int cols) {
  ComplexMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) g(i, j) = complex_normal();
  }
  return g;
}

ComplexVector Rng::unit_vector(int dim) {
  ComplexVector v = ginibre(dim, 1).col(0);
  return v / v.norm();
}

DensityMatrix random_density(int dim, int rank, Rng& rng) {
  if (dim <= 0 || rank <= 0 || rank > dim) {
    throw Error(ErrorCode::BadParameter, "random_density needs 1 <= rank <= dim");
  }
  const ComplexMatrix g = rng.ginibre(dim, rank);
  const ComplexMatrix gg = g * g.adjoint();
  return DensityMatrix::assume_valid(gg / gg.trace().real());
}

DensityMatrix random_density(int dim, int rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(dim, rank, rng);
}

ComplexMatrix random_unitary(int dim, Rng& rng) {
  if (dim <= 0) throw Error(ErrorCode::BadDimension, "random_unitary needs dim >= 1");
  const ComplexMatrix z = rng.ginibre(dim, dim);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const Complex rkk = r(k, k);
    const double mag = std::abs(rkk);
    q.col(k) *= mag > 0.0 ? rkk / mag : Complex(1.0, 0.0);
  }
  return q;
}

ComplexMatrix random_unitary(int dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_unitary(dim, rng);
}

Observable random_observable(int dim, const std::vector<int>& profile, Rng& rng) {
  if (profile.empty() || std::accumulate(profile.begin(), profile.end(), 0) != dim ||
      std::any_of(profile.begin(), profile.end(), [](int x) { return x <= 0; })) {
    throw Error(ErrorCode::BadProfile, "degeneracy profile must be positive and sum to dim");
  }
  const ComplexMatrix u = random_unitary(dim, rng);
  RealVector values;
  double v = rng.uniform(1.0, 2.0) * static_cast<double>(profile.size());
  for (std::size_t n = 0; n < profile.size(); ++n) {
    values.push_back(v);
    v -= rng.uniform(0.5, 1.5);
  }
  return Observable::from_grouped_basis(u, values, profile);
}

Observable random_observable(int dim, const std::vector<int>& profile, std::uint64_t seed) {
  Rng rng(seed);
  return random_observable(dim, profile, rng);
}

ComplexMatrix random_block_unitary(const Observable& r, Rng& rng) {
  std::vector<ComplexMatrix> blocks;
  for (int dn : r.degeneracies()) blocks.push_back(random_unitary(dn, rng));
  const ComplexMatrix w = block_diagonal(blocks);
  return r.eigenbasis() * w * r.eigenbasis().adjoint();
}

FineGraining random_fine_graining(const Observable& r, Rng& rng) {
  std::vector<ComplexMatrix> blocks;
  for (int dn : r.degeneracies()) blocks.push_back(random_unitary(dn, rng));
  return FineGraining::from_basis(r, r.eigenbasis() * block_diagonal(blocks));
}

Povm random_povm(int dim, int outcomes, Rng& rng) {
  if (dim <= 0 || outcomes <= 0) throw Error(ErrorCode::BadParameter, "bad POVM shape");
  std::vector<ComplexMatrix> a;
  ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < outcomes; ++k) {
    const ComplexMatrix g = rng.ginibre(dim, dim);
    a.push_back(g.adjoint() * g);
    s += a.back();
  }
  const Spectrum spec = hermitian_eig(hermitian_part(s));
  Eigen::VectorXd inv_roots(dim);
  for (int k = 0; k < dim; ++k) inv_roots[k] = 1.0 / std::sqrt(spec.eigenvalues[k]);
  const ComplexMatrix s_inv_half =
      spec.eigenvectors * inv_roots.asDiagonal() * spec.eigenvectors.adjoint();
  std::vector<ComplexMatrix> effects;
  for (const auto& ak : a) effects.push_back(hermitian_part(s_inv_half * ak * s_inv_half));
  return Povm(std::move(effects));
}

BipartiteState random_bipartite(int dim_a, int dim_b, int rank, Rng& rng) {
  return BipartiteState(dim_a, dim_b, random_density(dim_a * dim_b, rank, rng));
}

}  // namespace qcoh
