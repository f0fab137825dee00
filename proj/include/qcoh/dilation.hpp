#pragma once

#include <vector>

#include "qcoh/channels.hpp"

namespace qcoh {

/// System-apparatus realization of an operation. The joint space is
/// system (x) apparatus with the system index varying slowest.
struct DilationModel {
  int system_dim = 0;
  int ancilla_dim = 0;
  /// |a_0>, the apparatus ready state.
  ComplexVector apparatus_init;
  /// U on C^{d_S} (x) C^{d_A}.
  ComplexMatrix joint_unitary;
  /// Readout vectors |a_n> as columns; their span is the readout projector P_A.
  ComplexMatrix readout;

  /// Throws InvalidModel unless U is unitary, |a_0> is a unit vector and the
  /// readout columns are orthonormal.
  void validate(double tol = kDefaultTol) const;
};

/// K_n = <a_n| U |a_0>.
KrausChannel extract_kraus(const DilationModel& m);

/// Unnormalized system state conditioned on reading apparatus outcome n.
ComplexMatrix conditional_system_state(const DilationModel& m, const DensityMatrix& rho,
                                       int outcome);
/// Apparatus reduced state after the interaction, Tr_S[U (rho (x) |a0><a0|) U^dagger].
ComplexMatrix apparatus_state(const DilationModel& m, const DensityMatrix& rho);
/// System reduced state after the interaction.
ComplexMatrix system_state(const DilationModel& m, const DensityMatrix& rho);

/// U_N (|phi_n> (x) |a_0>) = |phi_n> (x) |a_n>, d_A = d.
DilationModel dilate_von_neumann(const ComplexMatrix& basis);

/// U_L (|phi_ni> (x) |a_0>) = |phi_ni> (x) |a_n>, d_A = number of outcomes (at least 2).
DilationModel dilate_luders(const Observable& r, const FineGraining& fg);

/// U (|phi_ni> (x) |a_0>) = |theta_ni> (x) |a_n> for an admissible theta.
DilationModel dilate_repeatable(const Observable& r, const std::vector<ComplexMatrix>& theta);

/// Controlled unitary sum_n |phi_n><phi_n| (x) U_n with U_n |a_0> = |c_n>.
/// d_A is the Choi rank, padded to 2 for rank-one channels.
DilationModel dilate_gio(const KrausChannel& ch, const ComplexMatrix& basis);

/// V = sum_n K_n (x) |a_n>, an isometry C^d -> C^d (x) C^{d_A} with d_A the Kraus count
/// (or ancilla_dim when larger, leaving dead branches).
ComplexMatrix effective_isometry(const KrausChannel& ch, const ComplexMatrix& basis,
                                 int ancilla_dim = 0);

/// Completes V to a unitary with U (|psi> (x) |a_0>) = V |psi>. The remaining
/// columns come from Gram-Schmidt over the standard basis in (system, ancilla)
/// lexicographic order.
ComplexMatrix extend_to_unitary(const ComplexMatrix& v, const ComplexVector& a0,
                                double tol = kDefaultTol);

/// Dilation of an SIO or IO channel through its effective isometry.
DilationModel dilate_incoherent(const KrausChannel& ch, const ComplexMatrix& basis);

/// Picks the builder matching the channel's class (GIO or SIO/IO); throws
/// UnsupportedClass for not-IO channels.
DilationModel dilate(const KrausChannel& ch, const ComplexMatrix& basis);

/// Unitary mapping e_0 to the unit vector c, built from a Householder reflection
/// whose sign is chosen so the reflection vector never cancels.
ComplexMatrix householder_completion(const ComplexVector& c);

/// sum_n |n><n| (x) X^n with X|i> = |i+1 mod d>.
ComplexMatrix generalized_cnot(int d);

}  // namespace qcoh
