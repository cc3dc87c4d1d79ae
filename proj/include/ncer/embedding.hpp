#pragma once

#include <cmath>
#include <utility>

#include "ncer/graph.hpp"
#include "ncer/linalg.hpp"

namespace ncer {

// Columns p_i of V_r^T D^{-1/2}; all lie on the hyperplane e_1^T x = tau.
struct SpectralEmbedding {
  Matrix points;      // r x m
  Vector eigenvalues; // r smallest, ascending
  double tau = 0.0;   // hyperplane offset, positive by convention
  Vector degrees;     // copy of graph degrees

  Index dim() const { return points.rows(); }
  Index count() const { return points.cols(); }
};

/// Multiplicity of the smallest value under an absolute gap tolerance.
inline Index eigenspace_dimension(const Vector& values,
                                  double gap_tol = default_tols().eigen_gap) {
  Index s = 1;
  while (s < values.size() && values(s) - values(0) <= gap_tol) ++s;
  return s;
}

/// Rotate an orthonormal basis V_s of the smallest eigenspace so its first
/// column is the unit vector along D^{1/2} e. Returns the rotated basis and
/// tau = 1 / ||D^{1/2} e||_2 (sign fixed positive).
inline std::pair<Matrix, double> align_first_eigenvector(
    const Matrix& V_s, const Vector& degrees, double residual_tol = 1e-6) {
  const Index s = V_s.cols();
  Vector target = degrees.cwiseSqrt();
  const double norm = target.norm();
  target /= norm;

  Vector p = V_s.transpose() * target;  // coordinates of target in the basis
  if ((V_s * p - target).norm() > residual_tol)
    throw numerical_error(
        "align_first_eigenvector: D^{1/2}e is not in the eigenspace span");
  p.normalize();

  // Householder reflection mapping e_1 to p keeps the rotation deterministic.
  Matrix P = Matrix::Identity(s, s);
  Vector v = -p;
  v(0) += 1.0;
  const double vn = v.norm();
  if (vn > 1e-14) {
    v /= vn;
    P -= 2.0 * v * v.transpose();
  }
  Matrix aligned = V_s * P;
  if (aligned.col(0).dot(target) < 0) aligned.col(0) = -aligned.col(0);
  return {std::move(aligned), 1.0 / norm};
}

/// Spectral embedding P = V_r^T D^{-1/2} with the first eigenvector realigned
/// to tau D^{1/2} e so every column lies on the hyperplane e_1^T x = tau.
inline SpectralEmbedding spectral_embed(const SimilarityGraph& g, Index r,
                                        const Tolerances& tol = default_tols()) {
  const Index m = g.size();
  if (r < 2 || r > m) throw input_error("spectral_embed: r out of [2, m]");

  const Matrix Lbar = normalized_laplacian(g);
  SymEigen full = sym_eigen(Lbar, m, tol);

  const Index s = eigenspace_dimension(full.values, tol.eigen_gap);
  auto [aligned, tau] = align_first_eigenvector(full.vectors.leftCols(s),
                                                g.degrees);
  Matrix V_r(m, r);
  const Index from_space = std::min(s, r);
  V_r.leftCols(from_space) = aligned.leftCols(from_space);
  if (r > s) V_r.rightCols(r - s) = full.vectors.middleCols(s, r - s);

  SpectralEmbedding emb;
  emb.points = V_r.transpose() * g.degrees.cwiseSqrt().cwiseInverse().asDiagonal();
  emb.eigenvalues = full.values.head(r);
  emb.tau = tau;
  emb.degrees = g.degrees;

  if (numerical_rank(emb.points) < r)
    throw rank_deficient_embedding_error(
        "spectral_embed: embedded points have rank < r");
  return emb;
}

}  // namespace ncer
