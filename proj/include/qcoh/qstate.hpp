#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qcoh/numerics.hpp"

namespace qcoh {

/// Hermitian, positive semidefinite, unit-trace operator.
class DensityMatrix {
 public:
  /// Validates and stores M. Throws NotHermitian, NotPositive or TraceNotOne.
  explicit DensityMatrix(const ComplexMatrix& m, double tol = kDefaultTol);

  /// Wraps an operator the caller knows to be a state (e.g. a channel output).
  /// Only the Hermitian part is kept; no spectral check is run.
  static DensityMatrix assume_valid(const ComplexMatrix& m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  struct Trusted {};
  DensityMatrix(Trusted, ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

DensityMatrix validate_density(const ComplexMatrix& m, double tol = kDefaultTol);

/// Pure state |psi><psi| after normalizing psi.
DensityMatrix pure_state(const ComplexVector& psi);
DensityMatrix maximally_mixed(int dim);

double von_neumann_entropy(const DensityMatrix& rho);
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Hermitian operator R = sum_n r_n P_n with resolved spectral data.
///
/// Distinct eigenvalues are stored in non-increasing order. `eigenbasis()` holds
/// an orthonormal basis with the columns of block n contiguous; it is the default
/// fine-graining of R.
class Observable {
 public:
  /// Builds from explicit eigenvalues and projectors, checking every invariant.
  static Observable from_projectors(const RealVector& eigenvalues,
                                    const std::vector<ComplexMatrix>& projectors,
                                    double tol = kDefaultTol);

  /// Nondegenerate observable with eigenvector basis.col(k) for value values[k].
  static Observable from_basis(const ComplexMatrix& basis, const RealVector& values);

  /// Builds from an orthonormal basis whose columns are grouped by block:
  /// block n spans degeneracies[n] consecutive columns and carries values[n].
  /// Values must be pairwise distinct; blocks are reordered by decreasing value.
  static Observable from_grouped_basis(const ComplexMatrix& basis, const RealVector& values,
                                       const std::vector<int>& degeneracies);

  /// Single eigenvalue 1 with projector I.
  static Observable trivial(int dim);

  int dim() const { return dim_; }
  int outcomes() const { return static_cast<int>(values_.size()); }
  const RealVector& eigenvalues() const { return values_; }
  const std::vector<ComplexMatrix>& projectors() const { return projectors_; }
  const ComplexMatrix& projector(int n) const { return projectors_.at(n); }
  const std::vector<int>& degeneracies() const { return degeneracies_; }
  const ComplexMatrix& eigenbasis() const { return basis_; }
  /// Block index of each eigenbasis column.
  const std::vector<int>& block_of_column() const { return block_of_; }
  /// Columns of the eigenbasis belonging to block n.
  ComplexMatrix block_basis(int n) const;
  int max_degeneracy() const;
  bool nondegenerate() const { return outcomes() == dim_; }

  /// sum_n r_n P_n.
  ComplexMatrix matrix() const;

 private:
  Observable() = default;

  int dim_ = 0;
  RealVector values_;
  std::vector<ComplexMatrix> projectors_;
  std::vector<int> degeneracies_;
  ComplexMatrix basis_;
  std::vector<int> block_of_;
};

inline constexpr double kGroupTol = 1e-6;

/// Groups the spectrum of H into distinct eigenvalues. Throws AmbiguousGrouping
/// when a cluster's spread exceeds group_tol while its neighbours sit within it.
Observable spectral_decompose(const ComplexMatrix& h, double group_tol = kGroupTol);

/// Orthonormal basis refining the eigenspaces of a parent observable, with
/// distinct labels mu_ni and the coarse-graining map f(mu_ni) = r_n.
class FineGraining {
 public:
  /// Assigns each basis column to the block of `parent` whose projector fixes it.
  /// Columns are regrouped block by block (stable within a block).
  static FineGraining from_basis(const Observable& parent, const ComplexMatrix& basis,
                                 double tol = kDefaultTol);

  /// The parent's own eigenbasis.
  static FineGraining of(const Observable& parent);

  int dim() const { return static_cast<int>(basis_.rows()); }
  const ComplexMatrix& basis() const { return basis_; }
  const std::vector<int>& block_of_column() const { return block_of_; }
  const RealVector& labels() const { return labels_; }
  const RealVector& parent_eigenvalues() const { return parent_values_; }
  /// f(mu): the parent eigenvalue of the block carrying label mu.
  double coarse_value(double label) const;
  /// Nondegenerate observable sum mu_ni |phi_ni><phi_ni|.
  Observable as_observable() const;

  /// True when every block of basis vectors sums to the matching projector of R.
  bool refines(const Observable& r, double tol = kDefaultTol) const;

 private:
  FineGraining() = default;
  void assign_labels();

  ComplexMatrix basis_;
  std::vector<int> block_of_;
  RealVector labels_;
  RealVector parent_values_;
  std::vector<int> degeneracies_;
};

struct BipartiteState {
  BipartiteState(int dim_a, int dim_b, DensityMatrix state);

  int dim_a;
  int dim_b;
  DensityMatrix state;

  DensityMatrix reduced_a() const;
  DensityMatrix reduced_b() const;
};

/// S(rho_A) + S(rho_B) - S(rho_AB) in bits.
double mutual_information(const BipartiteState& rho);

class Povm {
 public:
  explicit Povm(std::vector<ComplexMatrix> effects, double tol = kDefaultTol);
  static Povm of(const Observable& r);

  int dim() const { return static_cast<int>(effects_.front().rows()); }
  int outcomes() const { return static_cast<int>(effects_.size()); }
  const std::vector<ComplexMatrix>& effects() const { return effects_; }
  /// M_n^{1/2}, computed once with clamped negative eigenvalues.
  const std::vector<ComplexMatrix>& sqrt_effects() const { return roots_; }

 private:
  std::vector<ComplexMatrix> effects_;
  std::vector<ComplexMatrix> roots_;
};

// Seeded generators. All are pure functions of their seed; the Rng overloads
// advance a caller-owned engine.

/// SplitMix64 step, used to derive independent stream seeds from one 64-bit seed.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0);
  int uniform_int(int lo, int hi);  // inclusive
  double normal();
  Complex complex_normal();
  ComplexMatrix ginibre(int rows, int cols);
  ComplexVector unit_vector(int dim);
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

DensityMatrix random_density(int dim, int rank, Rng& rng);
DensityMatrix random_density(int dim, int rank, std::uint64_t seed);
ComplexMatrix random_unitary(int dim, Rng& rng);
ComplexMatrix random_unitary(int dim, std::uint64_t seed);
/// Degeneracy profile lists d_n (summing to dim); eigenvalues are distinct and decreasing.
Observable random_observable(int dim, const std::vector<int>& profile, Rng& rng);
Observable random_observable(int dim, const std::vector<int>& profile, std::uint64_t seed);
/// Block-diagonal unitary with respect to R's eigenbasis blocks.
ComplexMatrix random_block_unitary(const Observable& r, Rng& rng);
/// Random fine-graining of R obtained by rotating each eigenspace.
FineGraining random_fine_graining(const Observable& r, Rng& rng);
/// Random POVM with `outcomes` effects built as S^{-1/2} G_k^dagger G_k S^{-1/2}.
Povm random_povm(int dim, int outcomes, Rng& rng);
BipartiteState random_bipartite(int dim_a, int dim_b, int rank, Rng& rng);

}  // namespace qcoh
