#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <vector>

#include "ncer/errors.hpp"

namespace ncer {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// All numerical tolerances in one place.
struct Tolerances {
  double symmetry = 1e-10;      // relative asymmetry allowed in sym_eigen input
  double residual = 1e-8;       // eigen/SVD residual, relative
  double kkt = 1e-8;            // NNLS KKT slack
  double eigen_gap = 1e-8;      // eigenspace multiplicity detection, absolute
  double mvee_eps = 1e-7;       // MVEE relative dual gap
  double mvee_feas = 1e-6;      // MVEE containment slack
  double mvee_active = 1e-5;    // active-point classification, relative
  double hyperplane = 1e-12;    // |w^T b| below this is degenerate
};

inline const Tolerances& default_tols() {
  static const Tolerances t;
  return t;
}

struct SymEigen {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns, one per value
};

struct ThinSvd {
  Matrix left;      // d x k
  Vector singulars; // descending, nonnegative
  Matrix right;     // m x k
};

/// Eigenpairs of a symmetric matrix for the k smallest eigenvalues,
/// values ascending, vectors orthonormal.
inline SymEigen sym_eigen(const Matrix& M, Index k,
                          const Tolerances& tol = default_tols()) {
  if (M.rows() != M.cols()) throw input_error("sym_eigen: matrix not square");
  if (k < 1 || k > M.rows()) throw input_error("sym_eigen: k out of range");
  const double scale = std::max(M.cwiseAbs().maxCoeff(), 1e-300);
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > tol.symmetry * scale)
    throw input_error("sym_eigen: matrix not symmetric");

  Eigen::SelfAdjointEigenSolver<Matrix> es(M);
  if (es.info() != Eigen::Success)
    throw numerical_error("sym_eigen: eigensolver failed to converge");

  SymEigen out;
  out.values = es.eigenvalues().head(k);
  out.vectors = es.eigenvectors().leftCols(k);
  return out;
}

/// Top-k singular triples of M, singular values descending.
inline ThinSvd thin_svd(const Matrix& M, Index k) {
  if (k < 1 || k > std::min(M.rows(), M.cols()))
    throw input_error("thin_svd: k out of range");
  Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw numerical_error("thin_svd: SVD failed to converge");
  ThinSvd out;
  out.left = svd.matrixU().leftCols(k);
  out.singulars = svd.singularValues().head(k);
  out.right = svd.matrixV().leftCols(k);
  return out;
}

/// Numerical rank: count of singular values above rel_tol * sigma_1.
inline Index numerical_rank(const Matrix& M, double rel_tol = 1e-10) {
  Eigen::BDCSVD<Matrix> svd(M);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0) return 0;
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

/// Lawson-Hanson active-set solver for min ||M w - b||_2^2, w >= 0.
/// Entering-variable ties break toward the lowest index.
inline Vector nnls(const Matrix& M, const Vector& b,
                   const Tolerances& tol = default_tols()) {
  if (M.rows() != b.size()) throw input_error("nnls: shape mismatch");
  const Index n = M.cols();
  Vector x = Vector::Zero(n);
  std::vector<bool> passive(n, false);

  const double grad_scale =
      std::max({M.cwiseAbs().maxCoeff() * b.cwiseAbs().maxCoeff(),
                M.squaredNorm(), 1.0});
  const double grad_tol = tol.kkt * grad_scale;

  auto solve_passive = [&](const std::vector<bool>& set) -> Vector {
    std::vector<Index> idx;
    for (Index j = 0; j < n; ++j)
      if (set[j]) idx.push_back(j);
    Matrix Mp(M.rows(), static_cast<Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) Mp.col(c) = M.col(idx[c]);
    Vector zp = Mp.colPivHouseholderQr().solve(b);
    Vector z = Vector::Zero(n);
    for (std::size_t c = 0; c < idx.size(); ++c) z(idx[c]) = zp(c);
    return z;
  };

  const Index max_outer = 3 * n + 30;
  for (Index outer = 0; outer < max_outer; ++outer) {
    Vector grad = M.transpose() * (b - M * x);
    // entering variable: largest positive gradient among active constraints
    Index enter = -1;
    double best = grad_tol;
    for (Index j = 0; j < n; ++j) {
      if (!passive[j] && grad(j) > best) {
        best = grad(j);
        enter = j;
      }
    }
    if (enter < 0) break;  // KKT satisfied
    passive[enter] = true;

    Vector z = solve_passive(passive);
    // inner loop: restore feasibility by stepping toward z
    Index inner_cap = 3 * n + 30;
    while (inner_cap-- > 0) {
      double min_z = std::numeric_limits<double>::infinity();
      for (Index j = 0; j < n; ++j)
        if (passive[j]) min_z = std::min(min_z, z(j));
      if (min_z > 0) break;
      double alpha = 1.0;
      for (Index j = 0; j < n; ++j) {
        if (passive[j] && z(j) <= 0 && x(j) - z(j) > 0)
          alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      }
      x = x + alpha * (z - x);
      for (Index j = 0; j < n; ++j) {
        if (passive[j] && x(j) <= 1e-12 * std::max(1.0, x.cwiseAbs().maxCoeff())) {
          x(j) = 0.0;
          passive[j] = false;
        }
      }
      z = solve_passive(passive);
    }
    x = z;
    for (Index j = 0; j < n; ++j)
      if (x(j) < 0) x(j) = 0;  // guard against roundoff
  }
  return x;
}

}  // namespace ncer
