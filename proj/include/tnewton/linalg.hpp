#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace tnewton {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace linalg {

/// Default relative cutoff for the pseudoinverse.
inline constexpr double kDefaultRelTol = 1e-10;
/// Relative asymmetry above which a "symmetric" input is rejected.
inline constexpr double kSymmetryTol = 1e-8;
/// Largest dimension accepted by principal_minors.
inline constexpr int kMaxMinorDimension = 8;

/// Result of the dual Hessian norm <g, H^+ g>.
struct DualNormResult {
  double value = 0.0;
  bool in_range = true;  ///< g in Range(H) up to rel_tol
  int rank = 0;
};

struct PrincipalMinor {
  std::vector<int> indices;  ///< 0-based, ascending
  double determinant = 0.0;
};

/// Checks finiteness and symmetry, then returns (M + M^T)/2.
/// Throws InputError on non-square, non-finite or asymmetric input.
Matrix symmetrized(const Matrix& m);

/// Minimum-norm solution of min ||H p - g|| via eigendecomposition of the
/// symmetrized H. Eigenvalues with |lambda| < rel_tol * max|lambda| are
/// treated as zero.
Vector pinv_solve(const Matrix& h, const Vector& g, double rel_tol = kDefaultRelTol);

/// <g, H^+ g> together with the range condition and numerical rank.
DualNormResult dual_norm_sq(const Matrix& h, const Vector& g, double rel_tol = kDefaultRelTol);

double min_eigenvalue(const Matrix& m);

/// All 2^d - 1 nonempty principal minors, ordered by subset bitmask.
/// Determinants use LU with partial pivoting. d > 8 throws CapabilityError.
std::vector<PrincipalMinor> principal_minors(const Matrix& m);

/// Determinant of a small dense matrix by LU with partial pivoting.
double lu_determinant(const Matrix& m);

}  // namespace linalg
}  // namespace tnewton
