#include "tnewton/linalg.hpp"

#include "tnewton/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <string>

namespace tnewton::linalg {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw InputError(std::string(what) + ": non-finite matrix entry");
  }
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw InputError(std::string(what) + ": non-finite vector entry");
  }
}

}  // namespace

Matrix symmetrized(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw InputError("matrix is not square");
  }
  require_finite(m, "symmetrized");
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale > 0.0) {
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTol * scale) {
      throw InputError("matrix is not symmetric (relative asymmetry " +
                       std::to_string(asym / scale) + ")");
    }
  }
  return 0.5 * (m + m.transpose());
}

Vector pinv_solve(const Matrix& h, const Vector& g, double rel_tol) {
  if (h.rows() != g.size()) {
    throw InputError("pinv_solve: dimension mismatch");
  }
  require_finite(g, "pinv_solve");
  const Matrix sym = symmetrized(h);
  if (sym.rows() == 0) return Vector();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  const Vector& lambda = eig.eigenvalues();
  const Matrix& q = eig.eigenvectors();
  // Singular values of a symmetric matrix are |eigenvalues|.
  const double sigma_max = lambda.cwiseAbs().maxCoeff();
  const double cutoff = rel_tol * sigma_max;

  const Vector coeffs = q.transpose() * g;
  Vector scaled = Vector::Zero(coeffs.size());
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    if (std::abs(lambda(i)) > cutoff && lambda(i) != 0.0) {
      scaled(i) = coeffs(i) / lambda(i);
    }
  }
  return q * scaled;
}

DualNormResult dual_norm_sq(const Matrix& h, const Vector& g, double rel_tol) {
  const Vector p = pinv_solve(h, g, rel_tol);
  const Matrix sym = 0.5 * (h + h.transpose());

  DualNormResult out;
  out.value = g.dot(p);
  const double gnorm = g.norm();
  out.in_range = gnorm == 0.0 || (sym * p - g).norm() <= rel_tol * gnorm;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  const Vector abs_lambda = eig.eigenvalues().cwiseAbs();
  const double sigma_max = abs_lambda.size() ? abs_lambda.maxCoeff() : 0.0;
  out.rank = 0;
  for (Eigen::Index i = 0; i < abs_lambda.size(); ++i) {
    if (abs_lambda(i) > rel_tol * sigma_max && abs_lambda(i) != 0.0) ++out.rank;
  }
  return out;
}

double min_eigenvalue(const Matrix& m) {
  const Matrix sym = symmetrized(m);
  if (sym.rows() == 0) {
    throw InputError("min_eigenvalue: empty matrix");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

double lu_determinant(const Matrix& m) {
  if (m.rows() != m.cols()) throw InputError("determinant of non-square matrix");
  if (m.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<Matrix>(m).determinant();
}

std::vector<PrincipalMinor> principal_minors(const Matrix& m) {
  if (m.rows() != m.cols()) throw InputError("principal_minors: non-square matrix");
  require_finite(m, "principal_minors");
  const int d = static_cast<int>(m.rows());
  if (d > kMaxMinorDimension) {
    throw CapabilityError("principal_minors: dimension " + std::to_string(d) +
                          " exceeds " + std::to_string(kMaxMinorDimension));
  }

  std::vector<PrincipalMinor> out;
  out.reserve((1u << d) - 1);
  for (unsigned mask = 1; mask < (1u << d); ++mask) {
    PrincipalMinor minor;
    for (int i = 0; i < d; ++i) {
      if (mask & (1u << i)) minor.indices.push_back(i);
    }
    const auto k = static_cast<Eigen::Index>(minor.indices.size());
    Matrix sub(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) {
        sub(r, c) = m(minor.indices[r], minor.indices[c]);
      }
    }
    minor.determinant = lu_determinant(sub);
    out.push_back(std::move(minor));
  }
  return out;
}

}  // namespace tnewton::linalg
