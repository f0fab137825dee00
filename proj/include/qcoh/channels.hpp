#pragma once

#include <string_view>
#include <vector>

#include "qcoh/qstate.hpp"

namespace qcoh {

/// Entries below this magnitude count as structural zeros when classifying Kraus operators.
inline constexpr double kStructuralZero = 1e-10;

/// Completely positive map given by an ordered Kraus list.
class KrausChannel {
 public:
  /// Throws InvalidChannel when the operators are not square and of equal size,
  /// or when sum K^dagger K exceeds the identity by more than tol.
  explicit KrausChannel(std::vector<ComplexMatrix> kraus_ops, double tol = kDefaultTol);

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(ops_.size()); }
  const std::vector<ComplexMatrix>& kraus_ops() const { return ops_; }
  bool trace_preserving() const { return trace_preserving_; }
  bool unital() const { return unital_; }

  /// sum_i K_i X K_i^dagger for an arbitrary operator X.
  ComplexMatrix operator()(const ComplexMatrix& x) const;

 private:
  int dim_ = 0;
  std::vector<ComplexMatrix> ops_;
  bool trace_preserving_ = false;
  bool unital_ = false;
};

KrausChannel identity_channel(int dim);
/// Kraus operators |phi_n><phi_n| for the columns of basis.
KrausChannel complete_dephasing(const ComplexMatrix& basis);
/// Kraus operators P_n of an observable.
KrausChannel luders_channel(const Observable& r);
/// {sqrt(p) I, sqrt(1-p) Z}.
KrausChannel phase_damping(double p);
/// {sqrt(p) I, sqrt(1-p) X}.
KrausChannel bit_flip(double p);
/// {[[1,0],[0,sqrt(1-g)]], [[0,sqrt(g)],[0,0]]}.
KrausChannel amplitude_damping(double gamma);
/// K1 = (|0><0| + |0><1|)/sqrt(2), K2 = (|1><0| - |1><1|)/sqrt(2).
KrausChannel relabeling_example();
/// sum_k p_k U_k rho U_k^dagger.
KrausChannel unitary_mixture(const std::vector<ComplexMatrix>& unitaries,
                             const std::vector<double>& weights);

struct ChannelOutput {
  ComplexMatrix matrix;
  double trace;
};

/// Operator-sum action. Requires a trace-preserving channel (NotTracePreserving otherwise).
DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho);
/// Action of a possibly trace-decreasing operation; reports the output trace.
ChannelOutput apply_operation(const KrausChannel& ch, const DensityMatrix& rho);

/// Largest Hilbert-Schmidt difference between the two channels' outputs over
/// the d^2 matrix units |i><j|.
double action_distance(const KrausChannel& a, const KrausChannel& b);

enum class IncoherenceClass { GIO, SIO, IO, NotIO };

/// "GIO", "SIO-not-GIO", "IO-not-SIO", "not-IO".
std::string_view to_string(IncoherenceClass c);

/// Strongest incoherence class of the given Kraus list relative to the basis columns.
/// The result depends on the decomposition for SIO and IO.
IncoherenceClass classify(const KrausChannel& ch, const ComplexMatrix& basis);
IncoherenceClass classify(const KrausChannel& ch);

/// Unit-diagonal Gram matrix C_ij = <c_i|c_j> of a GIO's dynamical vectors.
struct CorrelationMatrix {
  ComplexMatrix entries;
  /// |c_i>, one r-dimensional vector per basis index i.
  std::vector<ComplexVector> dynamical_vectors;

  int dim() const { return static_cast<int>(entries.rows()); }
};

CorrelationMatrix correlation_matrix_of(const KrausChannel& ch, const ComplexMatrix& basis);
CorrelationMatrix correlation_matrix_of(const KrausChannel& ch);

/// Factorizes C = V^dagger V through its spectrum (eigenvalues below 1e-12 dropped)
/// and returns the minimal diagonal Kraus list in the given basis.
KrausChannel gio_from_correlation(const ComplexMatrix& c, const ComplexMatrix& basis,
                                  double tol = kDefaultTol);
KrausChannel gio_from_correlation(const ComplexMatrix& c, double tol = kDefaultTol);

/// Unit dynamical vectors from C; column i of the result is |c_i>.
ComplexMatrix gram_factor(const ComplexMatrix& c, double tol = kDefaultTol);

/// GIO with diagonal Kraus operators K_n = B diag(v.row(n)) B^dagger; column i of v
/// is the dynamical vector |c_i> and must be a unit vector.
KrausChannel gio_from_vectors(const ComplexMatrix& v, const ComplexMatrix& basis);
KrausChannel gio_from_vectors(const ComplexMatrix& v);

enum class IndexMapKind { Permutation, Relabeling };

struct IndexMap {
  int dim = 0;
  std::vector<int> map;
  IndexMapKind kind = IndexMapKind::Permutation;

  /// sum_i |f(i)><i|.
  ComplexMatrix matrix() const;
};

struct KrausFactor {
  IndexMap index_map;
  /// Diagonal part K_GIO, expressed in basis coordinates.
  ComplexMatrix diagonal;
};

/// Splits an IO-form operator as K = M(f) K_GIO in basis coordinates. Columns
/// without a structural entry get c_i = 0 and are routed to unused rows when f
/// is otherwise injective, so that SIO-form operators factor through a permutation.
KrausFactor factor_kraus(const ComplexMatrix& k, const ComplexMatrix& basis);
KrausFactor factor_kraus(const ComplexMatrix& k);

/// Evaluates sum_{n : f_n(i) = f_n(j)} conj(c_i^(n)) c_j^(n) = delta_ij from the
/// factored Kraus operators.
bool io_completeness_check(const KrausChannel& ch, const ComplexMatrix& basis,
                           double tol = kDefaultTol);
/// Largest entrywise deviation of the factored completeness matrix from the identity.
double io_completeness_residual(const KrausChannel& ch, const ComplexMatrix& basis);

/// Hilbert-Schmidt orthonormal basis of {X : [X, K_i] = [X, K_i^dagger] = 0 for all i}.
std::vector<ComplexMatrix> commutant(const KrausChannel& ch);

/// Dimension of the fixed-point space {X : Phi(X) = X}, from the nullspace of
/// the superoperator matrix of Phi - id.
int fixed_point_dimension(const KrausChannel& ch);

struct FixedPointResiduals {
  /// ||Phi(X) - X||_2
  double fixedness;
  /// ||sum_i [X,K_i][X,K_i]^dagger - Phi(X X^dagger) + X X^dagger||_2.
  /// Vanishes when X is a fixed point of a unital channel.
  double identity;
  /// Same left side against the form valid for every X:
  /// Phi(X X^dagger) - Phi(X) X^dagger - X Phi(X^dagger) + X Phi(I) X^dagger.
  double expanded_identity;
};

FixedPointResiduals fixed_point_check(const KrausChannel& ch, const ComplexMatrix& x);

/// n-fold application of a GIO.
DensityMatrix iterate(const KrausChannel& ch, const DensityMatrix& rho, int steps,
                      const ComplexMatrix& basis);
DensityMatrix iterate(const KrausChannel& ch, const DensityMatrix& rho, int steps);

/// Largest |rho_ij|, i != j, in the given basis.
double max_offdiagonal(const ComplexMatrix& rho, const ComplexMatrix& basis);

// Seeded random channels in the computational basis.

/// GIO with r Kraus operators and random unit dynamical vectors.
KrausChannel random_gio(int dim, int r, Rng& rng);
/// SIO with r Kraus operators, each a random permutation times a diagonal. When
/// dim and r are at least 2 one permutation is forced away from the identity.
KrausChannel random_sio(int dim, int r, Rng& rng);
/// IO that is not SIO for dim >= 2: a weighted union of a measure-and-prepare
/// channel |e_g(k)><v_k| over a random basis v and a random SIO with sio_rank operators.
KrausChannel random_io(int dim, int sio_rank, Rng& rng);
/// Random mixture of `count` Haar unitaries.
KrausChannel random_unitary_mixture(int dim, int count, Rng& rng);

}  // namespace qcoh
