#pragma once

#include "qcoh/instruments.hpp"

namespace qcoh {

// All quantities are in bits.

/// Sum of |<phi_m|rho|phi_n>| over m != n.
double c_l1(const DensityMatrix& rho, const ComplexMatrix& basis);
/// S(D(rho)) - S(rho).
double c_re(const DensityMatrix& rho, const ComplexMatrix& basis);

/// Entrywise l1 mass of the off-diagonal blocks of rho written in the fine-graining basis.
double c_l1_coarse(const DensityMatrix& rho, const Observable& r, const FineGraining& fg);
/// S(L_R(rho)) - S(rho).
double c_re_coarse(const DensityMatrix& rho, const Observable& r);

/// S(L_R(rho) || D_fg(rho)), the amount by which fine-graining overstates C_re.
double hierarchy_gap(const DensityMatrix& rho, const Observable& r, const FineGraining& fg);

/// (I (x) P_n) rho (I (x) P_n) summed over n.
DensityMatrix luders_on_b(const BipartiteState& rho, const Observable& r_on_b);

/// S(L^B(rho)) - S(rho).
double qi_coherence(const BipartiteState& rho, const Observable& r_on_b);

/// I(rho) - I(L^B(rho)).
double luders_discord(const BipartiteState& rho, const Observable& r_on_b);

struct ClassicalCorrelationTerms {
  /// sum_n p_n S(rho^A_n || rho^A)
  double holevo;
  /// sum_n p_n I(rho^AB_n); vanishes for rank-one projectors.
  double residual;
  double total() const { return holevo + residual; }
};

/// Branches with p_n < 1e-12 are skipped.
ClassicalCorrelationTerms classical_correlation_terms(const BipartiteState& rho,
                                                      const Observable& r_on_b);
double classical_correlation(const BipartiteState& rho, const Observable& r_on_b);

/// S(rho || sum_n M_n rho M_n), with the second argument left sub-normalized.
double povm_coherence(const DensityMatrix& rho, const Povm& m);
/// S(rho || sum_n M_n^{1/2} rho M_n^{1/2}).
double povm_coherence_modified(const DensityMatrix& rho, const Povm& m);

}  // namespace qcoh
