#pragma once

#include <vector>

#include "qcoh/channels.hpp"

namespace qcoh {

/// p_n = Tr(rho P_n).
RealVector born_probabilities(const DensityMatrix& rho, const Observable& r);
/// p_n = Tr(rho M_n).
RealVector born_probabilities(const DensityMatrix& rho, const Povm& m);

/// Complete dephasing (pinching) in the basis given by the columns of `basis`.
DensityMatrix dephase(const DensityMatrix& rho, const ComplexMatrix& basis);

/// Lueders transformer sum_n P_n rho P_n.
DensityMatrix luders(const DensityMatrix& rho, const Observable& r);

struct LudersOutcome {
  double probability;
  DensityMatrix state;
};

/// Selective post-measurement state for outcome n. Outcomes with probability
/// at or below 1e-12 throw ZeroProbabilityOutcome.
LudersOutcome luders_outcome(const DensityMatrix& rho, const Observable& r, int outcome);

/// State-dependent fine-graining whose basis diagonalizes every block P_n rho P_n,
/// so that dephasing in it reproduces the Lueders image.
FineGraining optimal_fine_grain(const Observable& r, const DensityMatrix& rho);

/// Repeatable instrument K_n = sum_i |theta_ni><phi_ni| with phi from R's eigenbasis.
/// theta[n] holds the d_n vectors theta_ni as columns.
KrausChannel repeatable_instrument(const Observable& r, const std::vector<ComplexMatrix>& theta,
                                   double tol = kDefaultTol);
KrausChannel repeatable_instrument(const Observable& r, const FineGraining& phi,
                                   const std::vector<ComplexMatrix>& theta,
                                   double tol = kDefaultTol);

/// Random admissible theta: each eigenspace basis rotated by a random unitary.
std::vector<ComplexMatrix> random_theta(const Observable& r, Rng& rng);

/// sum_n M_n^{1/2} rho M_n^{1/2}.
DensityMatrix generalized_luders(const DensityMatrix& rho, const Povm& m);

/// U_k = sum_j omega^{jk} P_j, omega = exp(2 pi i / N), k = 1..N.
std::vector<ComplexMatrix> unitary_mixing(const Observable& r);

}  // namespace qcoh
