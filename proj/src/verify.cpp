#include "qcoh/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "qcoh/coherence.hpp"
#include "qcoh/dilation.hpp"

namespace qcoh::verify {

namespace {

class Tracker {
 public:
  explicit Tracker(Bound bound) : bound_(bound) {}

  void record(double v) {
    if (std::isnan(v)) {
      nan_ = true;
      return;
    }
    if (!any_) {
      value_ = v;
      any_ = true;
    } else if (bound_ == Bound::AtLeast) {
      value_ = std::min(value_, v);
    } else {
      value_ = std::max(value_, v);
    }
  }

  double value() const { return any_ && !nan_ ? value_ : std::numeric_limits<double>::quiet_NaN(); }

 private:
  Bound bound_;
  double value_ = 0.0;
  bool any_ = false;
  bool nan_ = false;
};

struct Context {
  Rng& rng;
  int count;
  int dim_max;
  bool corrupt;
  Tracker& out;

  int dim(int lo = 2) { return rng.uniform_int(lo, std::max(lo, dim_max)); }
};

using Body = void (*)(Context&);

struct Property {
  const char* name;
  int criterion;
  Bound bound;
  double tolerance;
  int default_count;
  Body body;
};

// ---------------------------------------------------------------- helpers

std::vector<int> random_profile(int d, Rng& rng) {
  std::vector<int> profile{1};
  for (int k = 1; k < d; ++k) {
    if (rng.uniform() < 0.5) {
      profile.push_back(1);
    } else {
      ++profile.back();
    }
  }
  return profile;
}

Observable random_r(int d, Rng& rng) { return random_observable(d, random_profile(d, rng), rng); }

RealVector spectrum(const ComplexMatrix& m) { return hermitian_eig(m).eigenvalues; }

double majorization_violation(const RealVector& x, const RealVector& y) {
  const MajorizationDefect def = majorization_defect(x, y);
  return std::max(def.partial_sum_excess, def.total_mismatch);
}

ComplexMatrix unit_columns(int r, int d, Rng& rng) {
  ComplexMatrix v(r, d);
  for (int i = 0; i < d; ++i) v.col(i) = rng.unit_vector(r);
  return v;
}

// C_ij = <c_i|c_j> straight from the vectors.
ComplexMatrix gram_of(const ComplexMatrix& v) {
  ComplexMatrix c(v.cols(), v.cols());
  for (Eigen::Index i = 0; i < v.cols(); ++i) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) c(i, j) = v.col(i).dot(v.col(j));
  }
  return c;
}

// Entrywise C^T o rho, written out index by index.
ComplexMatrix transpose_schur(const ComplexMatrix& c, const ComplexMatrix& rho) {
  ComplexMatrix out(rho.rows(), rho.cols());
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    for (Eigen::Index j = 0; j < rho.cols(); ++j) out(i, j) = c(j, i) * rho(i, j);
  }
  return out;
}

KrausChannel random_unital(int d, int t, Rng& rng) {
  switch (t % 3) {
    case 0:
      return random_gio(d, rng.uniform_int(1, d), rng);
    case 1:
      return random_unitary_mixture(d, rng.uniform_int(1, 4), rng);
    default: {
      const Observable r = random_r(d, rng);
      const auto us = unitary_mixing(r);
      return unitary_mixture(us, RealVector(us.size(), 1.0 / static_cast<double>(us.size())));
    }
  }
}

KrausChannel random_any(int d, int t, Rng& rng) {
  switch (t % 4) {
    case 0:
      return random_gio(d, rng.uniform_int(1, d), rng);
    case 1:
      return random_sio(d, rng.uniform_int(1, 3), rng);
    case 2:
      return random_io(d, rng.uniform_int(1, 3), rng);
    default:
      return random_unitary_mixture(d, rng.uniform_int(1, 3), rng);
  }
}

ComplexMatrix random_psd(int d, Rng& rng) { return random_density(d, rng.uniform_int(1, d), rng).matrix(); }

// Basis with fg's columns regrouped so that block n occupies a contiguous range.
ComplexMatrix concat(const std::vector<ComplexMatrix>& blocks) {
  Eigen::Index cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  ComplexMatrix out(blocks.front().rows(), cols);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return out;
}

ComplexMatrix fg_blocks_in_order(const FineGraining& fg, int outcomes) {
  std::vector<ComplexMatrix> blocks;
  for (int n = 0; n < outcomes; ++n) {
    std::vector<Eigen::Index> cols;
    for (int k = 0; k < fg.dim(); ++k) {
      if (fg.block_of_column()[k] == n) cols.push_back(k);
    }
    ComplexMatrix b(fg.dim(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) b.col(static_cast<Eigen::Index>(i)) = fg.basis().col(cols[i]);
    blocks.push_back(b);
  }
  return concat(blocks);
}

// ---------------------------------------------------------------- numerics

void eig_reconstruction(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.rng.uniform_int(1, 2 * cx.dim_max);
    const ComplexMatrix g = cx.rng.ginibre(d, d);
    const ComplexMatrix h = 0.5 * (g + g.adjoint());
    const Spectrum s = hermitian_eig(h);
    Eigen::VectorXd lambda(d);
    for (int k = 0; k < d; ++k) lambda[k] = s.eigenvalues[k];
    const ComplexMatrix back = s.eigenvectors * lambda.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint();
    cx.out.record(std::max(hs_norm(back - h), isometry_defect(s.eigenvectors)));
  }
}

void schur_product_psd(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim(1);
    const RealVector ev = spectrum(schur_product(random_psd(d, cx.rng), random_psd(d, cx.rng)));
    cx.out.record(ev.back());
  }
}

void relative_entropy_nonneg(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim(1);
    const DensityMatrix rho = random_density(d, cx.rng.uniform_int(1, d), cx.rng);
    const DensityMatrix sigma = random_density(d, d, cx.rng);
    cx.out.record(relative_entropy(rho, sigma));
  }
}

void relative_entropy_self(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim(1);
    const DensityMatrix rho = random_density(d, cx.rng.uniform_int(1, d), cx.rng);
    cx.out.record(std::abs(relative_entropy(rho, rho)));
  }
}

void relative_entropy_separation(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const DensityMatrix rho = random_density(d, cx.rng.uniform_int(1, d), cx.rng);
    const DensityMatrix sigma = random_density(d, d, cx.rng);
    if (hs_norm(rho.matrix() - sigma.matrix()) < 1e-2) continue;
    cx.out.record(relative_entropy(rho, sigma));
  }
}

// ---------------------------------------------------------------- qstate

void spectral_reconstruction(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim(1);
    const std::vector<int> profile = random_profile(d, cx.rng);
    const ComplexMatrix u = random_unitary(d, cx.rng);
    Eigen::VectorXd diag(d);
    int at = 0;
    double value = 3.0;
    for (int size : profile) {
      for (int k = 0; k < size; ++k) diag[at++] = value;
      value -= cx.rng.uniform(0.5, 1.5);
    }
    const ComplexMatrix h = u * diag.cast<Complex>().asDiagonal() * u.adjoint();
    const Observable r = spectral_decompose(h);
    ComplexMatrix back = ComplexMatrix::Zero(d, d);
    for (int n = 0; n < r.outcomes(); ++n) back += r.eigenvalues()[n] * r.projector(n);
    const double miscount = r.outcomes() == static_cast<int>(profile.size()) ? 0.0 : 1.0;
    cx.out.record(hs_norm(back - h) + miscount);
  }
}

void fine_graining_blocks(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim(1);
    const Observable r = random_r(d, cx.rng);
    for (const FineGraining& fg : {FineGraining::of(r), random_fine_graining(r, cx.rng)}) {
      for (int n = 0; n < r.outcomes(); ++n) {
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (int k = 0; k < d; ++k) {
          if (fg.block_of_column()[k] == n) sum += outer(fg.basis().col(k), fg.basis().col(k));
        }
        cx.out.record(hs_norm(sum - r.projector(n)));
      }
    }
  }
}

// ---------------------------------------------------------------- instruments

void minimal_disturbance(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const Observable r = random_r(d, cx.rng);
    const DensityMatrix rho = random_density(d, cx.rng.uniform_int(1, d), cx.rng);
    const double base = hs_norm(rho.matrix() - luders(rho, r).matrix());
    for (int s = 0; s < 200; ++s) {
      const DensityMatrix sigma = luders(random_density(d, cx.rng.uniform_int(1, d), cx.rng), r);
      cx.out.record(base - hs_norm(rho.matrix() - sigma.matrix()));
    }
  }
}

void pythagorean_identity(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const Observable r = random_r(d, cx.rng);
    const DensityMatrix rho = random_density(d, cx.rng.uniform_int(1, d), cx.rng);
    const DensityMatrix lr = luders(rho, r);
    for (int s = 0; s < 10; ++s) {
      const DensityMatrix sigma = luders(random_density(d, d, cx.rng), r);
      const double lhs = relative_entropy(rho, sigma);
      const double rhs = relative_entropy(rho, lr) + relative_entropy(lr, sigma);
      cx.out.record(std::abs(lhs - rhs));
    }
  }
}

void luders_entropy_increase(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const Observable r = random_r(d, cx.rng);
    const DensityMatrix rho = random_density(d, cx.rng.uniform_int(1, d), cx.rng);
    cx.out.record(von_neumann_entropy(rho) - von_neumann_entropy(luders(rho, r)));
  }
}

void luders_majorization(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const Observable r = random_r(d, cx.rng);
    const DensityMatrix rho = random_density(d, cx.rng.uniform_int(1, d), cx.rng);
    cx.out.record(majorization_violation(spectrum(rho.matrix()), spectrum(luders(rho, r).matrix())));
  }
}

void orthogonal_support_product(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const ComplexMatrix u = random_unitary(d, cx.rng);
    const int split = cx.rng.uniform_int(1, d - 1);
    const ComplexMatrix ua = u.leftCols(split);
    const ComplexMatrix ub = u.rightCols(d - split);
    const ComplexMatrix a = ua * random_psd(split, cx.rng) * ua.adjoint();
    const ComplexMatrix b = ub * random_psd(d - split, cx.rng) * ub.adjoint();
    cx.out.record(std::max(std::abs((a * b).trace()), hs_norm(a * b)));
  }
}

struct RepeatableCase {
  DensityMatrix lueders_out;
  DensityMatrix theta_out;
  ComplexMatrix phi_basis;
  ComplexMatrix theta_basis;
};

RepeatableCase repeatable_case(Context& cx) {
  const int d = cx.dim();
  const Observable r = random_r(d, cx.rng);
  const FineGraining phi = random_fine_graining(r, cx.rng);
  const auto theta = random_theta(r, cx.rng);
  const DensityMatrix rho = pure_state(cx.rng.unit_vector(d));
  const KrausChannel inst = repeatable_instrument(r, phi, theta);
  return {luders(rho, r), apply(inst, rho), fg_blocks_in_order(phi, r.outcomes()), concat(theta)};
}

void repeatable_residual_l1(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const RepeatableCase c = repeatable_case(cx);
    cx.out.record(std::abs(c_l1(c.lueders_out, c.phi_basis) - c_l1(c.theta_out, c.theta_basis)));
  }
}

void repeatable_residual_re(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const RepeatableCase c = repeatable_case(cx);
    cx.out.record(std::abs(c_re(c.lueders_out, c.phi_basis) - c_re(c.theta_out, c.theta_basis)));
  }
}

void repeatable_output_entropy(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const RepeatableCase c = repeatable_case(cx);
    cx.out.record(std::abs(von_neumann_entropy(c.lueders_out) - von_neumann_entropy(c.theta_out)));
  }
}

// ---------------------------------------------------------------- coherence

struct HierarchyCase {
  DensityMatrix rho;
  Observable r;
  FineGraining fg;
};

HierarchyCase hierarchy_case(Context& cx) {
  const int d = cx.dim();
  Observable r = random_r(d, cx.rng);
  FineGraining fg = random_fine_graining(r, cx.rng);
  return {random_density(d, cx.rng.uniform_int(1, d), cx.rng), std::move(r), std::move(fg)};
}

void hierarchy_l1(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const HierarchyCase c = hierarchy_case(cx);
    cx.out.record(c_l1_coarse(c.rho, c.r, c.fg) - c_l1(c.rho, c.fg.basis()));
  }
}

void hierarchy_re(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const HierarchyCase c = hierarchy_case(cx);
    cx.out.record(c_re_coarse(c.rho, c.r) - c_re(c.rho, c.fg.basis()));
  }
}

void hierarchy_gap_identity(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const HierarchyCase c = hierarchy_case(cx);
    const double gap = c_re(c.rho, c.fg.basis()) - c_re_coarse(c.rho, c.r);
    cx.out.record(std::abs(gap - hierarchy_gap(c.rho, c.r, c.fg)));
  }
}

void optimal_gap(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const HierarchyCase c = hierarchy_case(cx);
    cx.out.record(hierarchy_gap(c.rho, c.r, optimal_fine_grain(c.r, c.rho)));
  }
}

void optimal_l1(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const HierarchyCase c = hierarchy_case(cx);
    const FineGraining star = optimal_fine_grain(c.r, c.rho);
    cx.out.record(std::abs(c_l1(c.rho, star.basis()) - c_l1_coarse(c.rho, c.r, star)));
  }
}

void optimal_re(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const HierarchyCase c = hierarchy_case(cx);
    const FineGraining star = optimal_fine_grain(c.r, c.rho);
    cx.out.record(std::abs(c_re(c.rho, star.basis()) - c_re_coarse(c.rho, c.r)));
  }
}

struct DiscordCase {
  BipartiteState rho;
  Observable r;
  bool degenerate;
};

DiscordCase discord_case(Context& cx, int t) {
  const int db = t % 2 == 0 ? 2 : 3;
  std::vector<int> profile;
  const bool degenerate = t % 4 == 1 || t % 4 == 2;
  if (!degenerate) {
    profile.assign(db, 1);
  } else if (db == 2) {
    profile = {2};
  } else {
    profile = cx.rng.uniform() < 0.5 ? std::vector<int>{2, 1} : std::vector<int>{1, 2};
  }
  Observable r = random_observable(db, profile, cx.rng);
  BipartiteState rho = random_bipartite(2, db, cx.rng.uniform_int(1, 2 * db), cx.rng);
  return {std::move(rho), std::move(r), degenerate};
}

void discord_identity(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const DiscordCase c = discord_case(cx, t);
    const double local = c_re_coarse(c.rho.reduced_b(), c.r);
    const double rhs = qi_coherence(c.rho, c.r) + (cx.corrupt ? local : -local);
    cx.out.record(std::abs(luders_discord(c.rho, c.r) - rhs));
  }
}

void discord_decomposition(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const DiscordCase c = discord_case(cx, t);
    const double total = classical_correlation(c.rho, c.r) + luders_discord(c.rho, c.r);
    cx.out.record(std::abs(total - mutual_information(c.rho)));
  }
}

void degenerate_branch_correlation(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const DiscordCase c = discord_case(cx, t % 2 == 0 ? 2 * t + 1 : 2 * t);
    cx.out.record(classical_correlation_terms(c.rho, c.r).residual);
  }
}

void nondegenerate_branch_correlation(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const DiscordCase c = discord_case(cx, t % 2 == 0 ? 2 * t : 2 * t + 1);
    cx.out.record(std::abs(classical_correlation_terms(c.rho, c.r).residual));
  }
}

void basis_permutation_invariance(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const DensityMatrix rho = random_density(d, cx.rng.uniform_int(1, d), cx.rng);
    const ComplexMatrix basis = random_unitary(d, cx.rng);
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = d - 1; i > 0; --i) std::swap(perm[i], perm[cx.rng.uniform_int(0, i)]);
    ComplexMatrix permuted(d, d);
    for (int i = 0; i < d; ++i) permuted.col(i) = basis.col(perm[i]);
    cx.out.record(std::max(std::abs(c_re(rho, basis) - c_re(rho, permuted)),
                           std::abs(c_l1(rho, basis) - c_l1(rho, permuted))));
  }
}

void povm_nonneg(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = 2 + t % 2;
    const Povm m = random_povm(d, cx.rng.uniform_int(2, 4), cx.rng);
    cx.out.record(povm_coherence(random_density(d, cx.rng.uniform_int(1, d), cx.rng), m));
  }
}

void povm_modified_nonneg(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = 2 + t % 2;
    const Povm m = random_povm(d, cx.rng.uniform_int(2, 4), cx.rng);
    cx.out.record(povm_coherence_modified(random_density(d, cx.rng.uniform_int(1, d), cx.rng), m));
  }
}

void povm_projective_reduction(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = 2 + t % 2;
    const Observable r = random_observable(d, std::vector<int>(d, 1), cx.rng);
    const Povm m = Povm::of(r);
    const DensityMatrix rho = random_density(d, cx.rng.uniform_int(1, d), cx.rng);
    const double reference = c_re(rho, r.eigenbasis());
    cx.out.record(std::max(std::abs(povm_coherence(rho, m) - reference),
                           std::abs(povm_coherence_modified(rho, m) - reference)));
  }
}

// ---------------------------------------------------------------- channels

void gio_schur_equivalence(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim(1);
    const ComplexMatrix v = unit_columns(cx.rng.uniform_int(1, d), d, cx.rng);
    const KrausChannel ch = gio_from_vectors(v);
    const ComplexMatrix c = gram_of(v);
    for (int s = 0; s < 5; ++s) {
      const DensityMatrix rho = random_density(d, cx.rng.uniform_int(1, d), cx.rng);
      cx.out.record(hs_norm(apply(ch, rho).matrix() - transpose_schur(c, rho.matrix())));
    }
  }
}

void correlation_recovery(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim(1);
    const ComplexMatrix basis = random_unitary(d, cx.rng);
    const ComplexMatrix v = unit_columns(cx.rng.uniform_int(1, d + 2), d, cx.rng);
    const KrausChannel ch = gio_from_vectors(v, basis);
    const ComplexMatrix c = gram_of(v);
    const KrausChannel rebuilt = gio_from_correlation(correlation_matrix_of(ch, basis).entries, basis);
    cx.out.record(std::max(hs_norm(correlation_matrix_of(ch, basis).entries - c),
                           action_distance(ch, rebuilt)));
  }
}

void unital_majorization(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const KrausChannel ch = random_unital(d, t, cx.rng);
    const DensityMatrix rho = random_density(d, cx.rng.uniform_int(1, d), cx.rng);
    cx.out.record(majorization_violation(spectrum(rho.matrix()), spectrum(apply(ch, rho).matrix())));
  }
}

void unital_entropy_increase(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const KrausChannel ch = random_unital(d, t, cx.rng);
    const DensityMatrix rho = random_density(d, cx.rng.uniform_int(1, d), cx.rng);
    cx.out.record(von_neumann_entropy(rho) - von_neumann_entropy(apply(ch, rho)));
  }
}

void schur_eigen_majorization(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const ComplexMatrix a = random_psd(d, cx.rng);
    const ComplexMatrix b = random_psd(d, cx.rng);
    const RealVector la = spectrum(a);
    RealVector db(d);
    for (int i = 0; i < d; ++i) db[i] = b(i, i).real();
    db = sorted_desc(db);
    RealVector bound(d);
    for (int i = 0; i < d; ++i) bound[i] = la[i] * db[i];
    cx.out.record(majorization_defect(bound, spectrum(schur_product(a, b))).partial_sum_excess);
  }
}

void permutation_coherence(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const DensityMatrix rho = random_density(d, cx.rng.uniform_int(1, d), cx.rng);
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = d - 1; i > 0; --i) std::swap(perm[i], perm[cx.rng.uniform_int(0, i)]);
    const ComplexMatrix p = IndexMap{d, perm, IndexMapKind::Permutation}.matrix();
    const DensityMatrix moved = DensityMatrix::assume_valid(p * rho.matrix() * p.adjoint());
    const ComplexMatrix id = computational_basis(d);
    double relocation = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        relocation = std::max(relocation, std::abs(moved.matrix()(perm[i], perm[j]) - rho.matrix()(i, j)));
      }
    }
    cx.out.record(std::max({std::abs(c_l1(moved, id) - c_l1(rho, id)),
                            std::abs(c_re(moved, id) - c_re(rho, id)), relocation}));
  }
}

void relabeling_action(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    std::vector<int> f(d);
    for (int i = 0; i < d; ++i) f[i] = cx.rng.uniform_int(0, d - 1);
    const ComplexMatrix r = IndexMap{d, f, IndexMapKind::Relabeling}.matrix();
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        cx.out.record(hs_norm(r * matrix_unit(d, i, j) * r.adjoint() - matrix_unit(d, f[i], f[j])));
      }
    }
  }
}

void gio_sieve_action(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    ComplexVector c(d);
    for (int i = 0; i < d; ++i) c[i] = cx.rng.complex_normal();
    const ComplexMatrix k = c.asDiagonal();
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const ComplexMatrix expected = c[i] * std::conj(c[j]) * matrix_unit(d, i, j);
        cx.out.record(hs_norm(k * matrix_unit(d, i, j) * k.adjoint() - expected));
      }
    }
  }
}

void classify_monotone(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const int r = cx.rng.uniform_int(1, 3);
    int violations = 0;
    violations += classify(random_gio(d, r, cx.rng)) != IncoherenceClass::GIO;
    violations += classify(random_sio(d, r, cx.rng)) > IncoherenceClass::SIO;
    violations += classify(random_io(d, r, cx.rng)) > IncoherenceClass::IO;
    cx.out.record(violations);
  }
}

void io_completeness(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const int r = cx.rng.uniform_int(1, 3);
    const KrausChannel ch = t % 2 == 0 ? random_sio(d, r, cx.rng) : random_io(d, r, cx.rng);
    cx.out.record(io_completeness_residual(ch, computational_basis(d)));
  }
}

struct TruthRow {
  KrausChannel channel;
  IncoherenceClass expected;
};

std::vector<TruthRow> truth_table() {
  return {{complete_dephasing(computational_basis(2)), IncoherenceClass::GIO},
          {complete_dephasing(computational_basis(3)), IncoherenceClass::GIO},
          {phase_damping(0.3), IncoherenceClass::GIO},
          {bit_flip(0.3), IncoherenceClass::SIO},
          {relabeling_example(), IncoherenceClass::IO}};
}

void classification_truth_table(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    int mismatches = 0;
    for (const auto& row : truth_table()) mismatches += classify(row.channel) != row.expected;
    // Bit flip relabels through the swap; the relabeling example's K1 sends both indices to 0.
    mismatches += factor_kraus(bit_flip(0.3).kraus_ops()[1]).index_map.map != std::vector<int>{1, 0};
    mismatches += factor_kraus(relabeling_example().kraus_ops()[0]).index_map.kind !=
                  IndexMapKind::Relabeling;
    cx.out.record(mismatches);
  }
}

void factor_reconstruction(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    for (const auto& row : truth_table()) {
      for (const auto& k : row.channel.kraus_ops()) {
        const KrausFactor f = factor_kraus(k);
        cx.out.record(hs_norm(f.index_map.matrix() * f.diagonal - k));
      }
    }
  }
}

struct BlockGio {
  KrausChannel channel;
  int expected_dim;
};

// GIO whose dynamical vectors repeat across groups of indices; its fixed points
// are the operators block-diagonal with respect to those groups.
BlockGio block_gio(Context& cx) {
  const int d = cx.dim();
  const int groups = cx.rng.uniform_int(1, d);
  std::vector<int> label(d);
  for (int i = 0; i < d; ++i) label[i] = i < groups ? i : cx.rng.uniform_int(0, groups - 1);
  const int r = cx.rng.uniform_int(2, d + 1);
  const ComplexMatrix group_vectors = unit_columns(r, groups, cx.rng);
  ComplexMatrix v(r, d);
  std::vector<int> sizes(groups, 0);
  for (int i = 0; i < d; ++i) {
    v.col(i) = group_vectors.col(label[i]);
    ++sizes[label[i]];
  }
  int expected = 0;
  for (int s : sizes) expected += s * s;
  return {gio_from_vectors(v, random_unitary(d, cx.rng)), expected};
}

void commutant_dimension(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const BlockGio g = block_gio(cx);
    const int found = static_cast<int>(commutant(g.channel).size());
    cx.out.record(std::abs(found - fixed_point_dimension(g.channel)) + std::abs(found - g.expected_dim));
  }
}

void commutant_fixedness(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const BlockGio g = block_gio(cx);
    for (const auto& x : commutant(g.channel)) cx.out.record(fixed_point_check(g.channel, x).fixedness);
  }
}

void fixed_point_identity(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const BlockGio g = block_gio(cx);
    const auto basis = commutant(g.channel);
    for (int s = 0; s < 100; ++s) {
      ComplexMatrix x = ComplexMatrix::Zero(g.channel.dim(), g.channel.dim());
      for (const auto& b : basis) x += cx.rng.complex_normal() * b;
      cx.out.record(fixed_point_check(g.channel, x).identity);
    }
  }
}

void expanded_identity(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const KrausChannel ch = random_any(d, t, cx.rng);
    for (int s = 0; s < 10; ++s) {
      cx.out.record(fixed_point_check(ch, cx.rng.ginibre(d, d)).expanded_identity);
    }
  }
}

ComplexMatrix contracting_vectors(int d, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const ComplexMatrix v = unit_columns(rng.uniform_int(2, d), d, rng);
    const ComplexMatrix c = gram_of(v);
    double worst = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (i != j) worst = std::max(worst, std::abs(c(i, j)));
      }
    }
    if (worst <= 0.9) return v;
  }
  return ComplexMatrix::Identity(d, d);
}

struct DephasingCase {
  KrausChannel channel;
  ComplexMatrix c;
};

DephasingCase dephasing_case(Context& cx, int t) {
  if (t == 0) {
    ComplexMatrix c(2, 2);
    c << 1.0, 0.9, 0.9, 1.0;
    return {phase_damping(0.95), c};
  }
  const ComplexMatrix v = contracting_vectors(cx.dim(), cx.rng);
  return {gio_from_vectors(v), gram_of(v)};
}

void dephasing_limit(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const DephasingCase c = dephasing_case(cx, t);
    const int d = c.channel.dim();
    DensityMatrix rho = pure_state(cx.rng.unit_vector(d));
    rho = iterate(c.channel, rho, 200);
    cx.out.record(max_offdiagonal(rho.matrix(), computational_basis(d)));
  }
}

void schur_power_law(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const DephasingCase c = dephasing_case(cx, t);
    const int d = c.channel.dim();
    DensityMatrix rho = pure_state(cx.rng.unit_vector(d));
    ComplexMatrix expected = rho.matrix();
    for (int step = 1; step <= 200; ++step) {
      rho = apply(c.channel, rho);
      expected = transpose_schur(c.c, expected);
      cx.out.record(hs_norm(rho.matrix() - expected));
    }
  }
}

// ---------------------------------------------------------------- dilation

double round_trip(const DilationModel& m, const KrausChannel& source) {
  return action_distance(extract_kraus(m), source);
}

void round_trip_von_neumann(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const ComplexMatrix basis = random_unitary(cx.dim(), cx.rng);
    cx.out.record(round_trip(dilate_von_neumann(basis), complete_dephasing(basis)));
  }
}

void round_trip_luders(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const Observable r = random_r(cx.dim(), cx.rng);
    cx.out.record(round_trip(dilate_luders(r, random_fine_graining(r, cx.rng)), luders_channel(r)));
  }
}

void round_trip_gio(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const ComplexMatrix basis = random_unitary(d, cx.rng);
    const KrausChannel ch = gio_from_vectors(unit_columns(cx.rng.uniform_int(1, d + 2), d, cx.rng), basis);
    cx.out.record(round_trip(dilate_gio(ch, basis), ch));
  }
}

void round_trip_sio(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const KrausChannel ch = random_sio(d, cx.rng.uniform_int(1, 3), cx.rng);
    cx.out.record(round_trip(dilate_incoherent(ch, computational_basis(d)), ch));
  }
}

void round_trip_io(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const KrausChannel ch = random_io(d, cx.rng.uniform_int(1, 3), cx.rng);
    cx.out.record(round_trip(dilate_incoherent(ch, computational_basis(d)), ch));
  }
}

void round_trip_repeatable(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const Observable r = random_r(cx.dim(), cx.rng);
    const auto theta = random_theta(r, cx.rng);
    cx.out.record(round_trip(dilate_repeatable(r, theta), repeatable_instrument(r, theta)));
  }
}

void dilation_unitarity(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const ComplexMatrix basis = random_unitary(d, cx.rng);
    const Observable r = random_r(d, cx.rng);
    const std::vector<DilationModel> models{
        dilate_von_neumann(basis),
        dilate_luders(r, random_fine_graining(r, cx.rng)),
        dilate_repeatable(r, random_theta(r, cx.rng)),
        dilate_gio(gio_from_vectors(unit_columns(cx.rng.uniform_int(1, d), d, cx.rng), basis), basis),
        dilate_incoherent(random_sio(d, cx.rng.uniform_int(1, 3), cx.rng), computational_basis(d)),
        dilate_incoherent(random_io(d, cx.rng.uniform_int(1, 3), cx.rng), computational_basis(d))};
    for (const auto& m : models) cx.out.record(isometry_defect(m.joint_unitary));
  }
}

void luders_repeatability(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const Observable r = random_r(d, cx.rng);
    const DilationModel m = dilate_luders(r, random_fine_graining(r, cx.rng));
    const DensityMatrix rho = random_density(d, cx.rng.uniform_int(1, d), cx.rng);
    const RealVector p = born_probabilities(rho, r);
    for (int n = 0; n < r.outcomes(); ++n) {
      const ComplexMatrix s = conditional_system_state(m, rho, n);
      const ComplexMatrix& proj = r.projector(n);
      cx.out.record(std::max(hs_norm(proj * s * proj - s), std::abs(s.trace().real() - p[n])));
    }
  }
}

void theta_in_eigenspace(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const Observable r = random_r(cx.dim(), cx.rng);
    const auto theta = random_theta(r, cx.rng);
    const KrausChannel k = extract_kraus(dilate_repeatable(r, theta));
    for (int n = 0; n < r.outcomes(); ++n) {
      const ComplexMatrix& proj = r.projector(n);
      cx.out.record(std::max(hs_norm(proj * theta[n] - theta[n]),
                             hs_norm(proj * k.kraus_ops()[n] - k.kraus_ops()[n])));
    }
  }
}

void gio_system_incoherence(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const ComplexMatrix basis = random_unitary(d, cx.rng);
    const KrausChannel ch = gio_from_vectors(unit_columns(cx.rng.uniform_int(1, d), d, cx.rng), basis);
    const DilationModel m = dilate_gio(ch, basis);
    for (int n = 0; n < d; ++n) {
      const DensityMatrix phi = pure_state(basis.col(n));
      cx.out.record(hs_norm(system_state(m, phi) - phi.matrix()));
    }
  }
}

void gio_apparatus_coherence(Context& cx) {
  for (int t = 0; t < cx.count; ++t) {
    const int d = cx.dim();
    const KrausChannel ch = random_gio(d, cx.rng.uniform_int(2, d), cx.rng);
    const DilationModel m = dilate_gio(ch, computational_basis(d));
    for (int n = 0; n < d; ++n) {
      const DensityMatrix phi = pure_state(computational_basis(d).col(n));
      cx.out.record(entrywise_l1(apparatus_state(m, phi), true));
    }
  }
}

// Sorted by name; the index of each entry selects its random stream.
const std::vector<Property>& catalogue() {
  static const std::vector<Property> props = [] {
    std::vector<Property> p{
        {"channels.classification_truth_table", 10, Bound::AtMost, 0.0, 1, classification_truth_table},
        {"channels.classify_monotone", 0, Bound::AtMost, 0.0, 30, classify_monotone},
        {"channels.commutant_dimension", 6, Bound::AtMost, 0.0, 30, commutant_dimension},
        {"channels.commutant_fixedness", 6, Bound::AtMost, 1e-10, 30, commutant_fixedness},
        {"channels.correlation_recovery", 0, Bound::AtMost, 1e-10, 50, correlation_recovery},
        {"channels.dephasing_limit", 7, Bound::AtMost, std::pow(0.9, 200) + 1e-12, 20, dephasing_limit},
        {"channels.expanded_identity", 0, Bound::AtMost, 1e-10, 40, expanded_identity},
        {"channels.factor_reconstruction", 10, Bound::AtMost, 1e-12, 1, factor_reconstruction},
        {"channels.fixed_point_identity", 6, Bound::AtMost, 1e-10, 30, fixed_point_identity},
        {"channels.gio_schur_equivalence", 1, Bound::AtMost, 1e-10, 100, gio_schur_equivalence},
        {"channels.gio_sieve_action", 0, Bound::AtMost, 1e-12, 20, gio_sieve_action},
        {"channels.io_completeness", 0, Bound::AtMost, 1e-10, 40, io_completeness},
        {"channels.permutation_coherence", 0, Bound::AtMost, 1e-12, 30, permutation_coherence},
        {"channels.relabeling_action", 0, Bound::AtMost, 1e-12, 20, relabeling_action},
        {"channels.schur_eigen_majorization", 0, Bound::AtMost, 1e-9, 50, schur_eigen_majorization},
        {"channels.schur_power_law", 7, Bound::AtMost, 1e-9, 20, schur_power_law},
        {"channels.unital_entropy_increase", 2, Bound::AtMost, 1e-9, 100, unital_entropy_increase},
        {"channels.unital_majorization", 2, Bound::AtMost, 1e-9, 100, unital_majorization},
        {"coherence.basis_permutation_invariance", 0, Bound::AtMost, 1e-12, 30, basis_permutation_invariance},
        {"coherence.degenerate_branch_correlation", 5, Bound::SomeAbove, 1e-3, 50, degenerate_branch_correlation},
        {"coherence.discord_decomposition", 5, Bound::AtMost, 1e-8, 50, discord_decomposition},
        {"coherence.discord_identity", 5, Bound::AtMost, 1e-8, 50, discord_identity},
        {"coherence.hierarchy_gap_identity", 4, Bound::AtMost, 1e-8, 50, hierarchy_gap_identity},
        {"coherence.hierarchy_l1", 4, Bound::AtMost, 1e-10, 50, hierarchy_l1},
        {"coherence.hierarchy_re", 4, Bound::AtMost, 1e-10, 50, hierarchy_re},
        {"coherence.nondegenerate_branch_correlation", 0, Bound::AtMost, 1e-10, 50, nondegenerate_branch_correlation},
        {"coherence.optimal_fine_graining_gap", 4, Bound::AtMost, 1e-8, 50, optimal_gap},
        {"coherence.optimal_fine_graining_l1", 0, Bound::AtMost, 1e-8, 50, optimal_l1},
        {"coherence.optimal_fine_graining_re", 0, Bound::AtMost, 1e-8, 50, optimal_re},
        {"coherence.povm_coherence_nonneg", 11, Bound::AtLeast, -1e-10, 50, povm_nonneg},
        {"coherence.povm_modified_nonneg", 11, Bound::AtLeast, -1e-10, 50, povm_modified_nonneg},
        {"coherence.povm_projective_reduction", 11, Bound::AtMost, 1e-10, 50, povm_projective_reduction},
        {"dilation.gio_apparatus_coherence", 0, Bound::SomeAbove, 1e-3, 20, gio_apparatus_coherence},
        {"dilation.gio_system_incoherence", 0, Bound::AtMost, 1e-10, 20, gio_system_incoherence},
        {"dilation.luders_repeatability", 0, Bound::AtMost, 1e-10, 20, luders_repeatability},
        {"dilation.round_trip_gio", 8, Bound::AtMost, 1e-10, 20, round_trip_gio},
        {"dilation.round_trip_io", 8, Bound::AtMost, 1e-10, 20, round_trip_io},
        {"dilation.round_trip_luders", 8, Bound::AtMost, 1e-10, 20, round_trip_luders},
        {"dilation.round_trip_repeatable", 0, Bound::AtMost, 1e-10, 20, round_trip_repeatable},
        {"dilation.round_trip_sio", 8, Bound::AtMost, 1e-10, 20, round_trip_sio},
        {"dilation.round_trip_von_neumann", 8, Bound::AtMost, 1e-10, 20, round_trip_von_neumann},
        {"dilation.theta_in_eigenspace", 0, Bound::AtMost, 1e-10, 20, theta_in_eigenspace},
        {"dilation.unitarity", 8, Bound::AtMost, 1e-8, 20, dilation_unitarity},
        {"instruments.entropy_increase", 0, Bound::AtMost, 1e-10, 50, luders_entropy_increase},
        {"instruments.luders_majorization", 0, Bound::AtMost, 1e-9, 50, luders_majorization},
        {"instruments.minimal_disturbance", 3, Bound::AtMost, 1e-12, 20, minimal_disturbance},
        {"instruments.orthogonal_support_product", 0, Bound::AtMost, 1e-10, 30, orthogonal_support_product},
        {"instruments.pythagorean_identity", 3, Bound::AtMost, 1e-8, 20, pythagorean_identity},
        {"instruments.repeatable_output_entropy", 9, Bound::AtMost, 1e-10, 30, repeatable_output_entropy},
        {"instruments.repeatable_residual_l1", 9, Bound::AtMost, 1e-10, 30, repeatable_residual_l1},
        {"instruments.repeatable_residual_re", 9, Bound::AtMost, 1e-10, 30, repeatable_residual_re},
        {"numerics.eig_reconstruction", 0, Bound::AtMost, 1e-10, 50, eig_reconstruction},
        {"numerics.relative_entropy_nonneg", 0, Bound::AtLeast, -1e-10, 50, relative_entropy_nonneg},
        {"numerics.relative_entropy_self", 0, Bound::AtMost, 1e-8, 50, relative_entropy_self},
        {"numerics.relative_entropy_separation", 0, Bound::AtLeast, 1e-8, 50, relative_entropy_separation},
        {"numerics.schur_product_psd", 0, Bound::AtLeast, -1e-10, 50, schur_product_psd},
        {"qstate.fine_graining_blocks", 0, Bound::AtMost, 1e-8, 50, fine_graining_blocks},
        {"qstate.spectral_reconstruction", 0, Bound::AtMost, 1e-8, 50, spectral_reconstruction},
    };
    std::sort(p.begin(), p.end(),
              [](const Property& a, const Property& b) { return std::string(a.name) < b.name; });
    return p;
  }();
  return props;
}

bool judge(Bound bound, double value, double tol) {
  if (std::isnan(value)) return false;
  return bound == Bound::AtMost ? value <= tol : value >= tol;
}

const char* relation(Bound bound) {
  switch (bound) {
    case Bound::AtMost:
      return "max <=";
    case Bound::AtLeast:
      return "min >=";
    case Bound::SomeAbove:
      return "max >=";
  }
  return "?";
}

}  // namespace

bool Report::passed() const {
  return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.passed; });
}

double Report::seconds() const {
  double s = 0.0;
  for (const auto& p : properties) s += p.seconds;
  return s;
}

std::vector<std::string> property_names() {
  std::vector<std::string> names;
  for (const auto& p : catalogue()) names.emplace_back(p.name);
  return names;
}

Report run(const Options& options) {
  if (options.dim_max < 2) throw Error(ErrorCode::BadParameter, "--dim-max must be at least 2");
  if (options.trials < 0) throw Error(ErrorCode::BadParameter, "--trials must be non-negative");
  Report report;
  report.options = options;
  const auto& props = catalogue();
  for (std::size_t k = 0; k < props.size(); ++k) {
    const Property& p = props[k];
    Rng rng(derive_seed(options.seed, k));
    Tracker tracker(p.bound);
    const int count = options.trials > 0 ? options.trials : p.default_count;
    Context cx{rng, count, options.dim_max, options.corrupt, tracker};
    const auto start = std::chrono::steady_clock::now();
    PropertyResult result;
    result.name = p.name;
    result.criterion = p.criterion;
    result.bound = p.bound;
    result.tolerance = p.tolerance;
    result.trials = count;
    try {
      p.body(cx);
      result.worst = tracker.value();
    } catch (const Error&) {
      result.worst = std::numeric_limits<double>::quiet_NaN();
    }
    result.passed = judge(p.bound, result.worst, p.tolerance);
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.properties.push_back(std::move(result));
  }
  return report;
}

std::string format_text(const Report& report) {
  std::string out;
  char line[256];
  int failures = 0;
  for (const auto& p : report.properties) {
    std::snprintf(line, sizeof line, "%s  %-44s %s %-10.3e worst=%-11.4e trials=%d", p.passed ? "PASS" : "FAIL",
                  p.name.c_str(), relation(p.bound), p.tolerance, p.worst, p.trials);
    out += line;
    if (p.criterion > 0) out += "  [criterion " + std::to_string(p.criterion) + "]";
    out += '\n';
    failures += !p.passed;
  }
  std::snprintf(line, sizeof line, "seed=%llu trials=%d dim-max=%d%s: %zu properties, %d failed\n",
                static_cast<unsigned long long>(report.options.seed), report.options.trials,
                report.options.dim_max, report.options.corrupt ? " corrupt" : "",
                report.properties.size(), failures);
  out += line;
  return out;
}

std::string format_json(const Report& report) {
  nlohmann::json props = nlohmann::json::array();
  for (const auto& p : report.properties) {
    nlohmann::json j{{"name", p.name},
                     {"passed", p.passed},
                     {"bound", relation(p.bound)},
                     {"tolerance", p.tolerance},
                     {"trials", p.trials},
                     {"criterion", p.criterion}};
    // Failed evaluations are reported as null.
    j["worst"] = std::isnan(p.worst) ? nlohmann::json(nullptr) : nlohmann::json(p.worst);
    props.push_back(std::move(j));
  }
  nlohmann::json doc{{"seed", report.options.seed},
                     {"trials", report.options.trials},
                     {"dim_max", report.options.dim_max},
                     {"corrupt", report.options.corrupt},
                     {"passed", report.passed()},
                     {"properties", props}};
  return doc.dump(2);
}

}  // namespace qcoh::verify
