#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qcoh/error.hpp"

namespace qcoh {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = std::vector<double>;

/// Tolerance used by validity checks unless the caller overrides it.
inline constexpr double kDefaultTol = 1e-8;
/// Eigenvalues this close to zero are treated as exact zeros before taking logs.
inline constexpr double kZeroClamp = 1e-9;

/// Eigenvalues in non-increasing order with matching orthonormal eigenvector columns.
struct Spectrum {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

enum class Subsystem { A, B };

/// Throws NonFinite if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m, std::string_view what = "matrix");
void require_square(const ComplexMatrix& m, std::string_view what = "matrix");

/// Hilbert-Schmidt distance between M and its adjoint.
double hermiticity_defect(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kDefaultTol);
/// Hilbert-Schmidt residual of V^dagger V - I.
double isometry_defect(const ComplexMatrix& v);
bool is_unitary(const ComplexMatrix& u, double tol = kDefaultTol);

/// Hermitian eigendecomposition. Ties keep the solver's first-occurrence order.
Spectrum hermitian_eig(const ComplexMatrix& m, double tol = kDefaultTol);

/// Entrywise (Hadamard) product.
ComplexMatrix schur_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product a (x) b, with a as the slow index.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduced operator on `keep` for an operator on C^dA (x) C^dB.
ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_a, int dim_b, Subsystem keep);

double entrywise_l1(const ComplexMatrix& m, bool offdiag_only);
double hs_norm(const ComplexMatrix& m);

/// -sum p log2 p over a probability-like vector, with 0 log 0 = 0.
double shannon_entropy(std::span<const double> probs);

/// Entropy in bits of a positive semidefinite operator (eigenvalues clamped near zero).
double entropy_of_psd(const ComplexMatrix& m);

/// Tr(rho log2 rho) - Tr(rho log2 sigma) for positive semidefinite operators.
/// sigma may be sub-normalized. Returns +infinity when supp(rho) is not inside supp(sigma).
double relative_entropy_psd(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// Square root of a positive semidefinite operator. Negative and round-off-level
/// eigenvalues are clamped to zero.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

/// Copy of v sorted in non-increasing order.
RealVector sorted_desc(RealVector v);

/// Largest violation of y being majorized by x: max over m of
/// (sum_{k<=m} y_k - sum_{k<=m} x_k) on sorted vectors, together with |sum x - sum y|.
struct MajorizationDefect {
  double partial_sum_excess;
  double total_mismatch;
};
MajorizationDefect majorization_defect(std::span<const double> x, std::span<const double> y);

/// True iff y is majorized by x (x majorizes y) within tol.
bool majorizes(std::span<const double> x, std::span<const double> y, double tol = kDefaultTol);
/// Weak (sub-)majorization: partial sums only, totals may differ.
bool weakly_majorizes(std::span<const double> x, std::span<const double> y,
                      double tol = kDefaultTol);

/// Column-stacked identity basis of dimension d.
ComplexMatrix computational_basis(int d);

/// Matrix unit |i><j| of dimension d.
ComplexMatrix matrix_unit(int d, int i, int j);

/// |a><b|.
ComplexMatrix outer(const ComplexVector& a, const ComplexVector& b);

}  // namespace qcoh
