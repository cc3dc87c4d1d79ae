#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "ncer/linalg.hpp"
#include "ncer/mvee.hpp"

namespace ncer {

/// Successive projection algorithm: r rounds of picking the column with the
/// largest squared norm (ties toward the lowest index) and projecting the
/// rest onto its orthogonal complement. Returns ascending indices.
inline std::vector<Index> spa(const Matrix& M, Index r) {
  if (r < 1 || r > M.cols()) throw input_error("spa: r out of range");
  Matrix R = M;
  std::vector<Index> picked;
  picked.reserve(r);
  for (Index t = 0; t < r; ++t) {
    Index best = 0;
    double best_norm = -1.0;
    for (Index j = 0; j < R.cols(); ++j) {
      const double n = R.col(j).squaredNorm();
      if (n > best_norm) { best_norm = n; best = j; }
    }
    if (best_norm <= 1e-24 * std::max(1.0, M.squaredNorm()))
      throw rank_deficient_error("spa: residual vanished before r picks");
    picked.push_back(best);
    const Vector v = R.col(best) / R.col(best).norm();
    R -= v * (v.transpose() * R);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

enum class ScalingMode { generic, degree };

struct ErConfig {
  // w; empty means auto: the leading reduced coordinate axis, sign-fixed so
  // every column lands on the positive side (the reduced matrix has a
  // one-signed first row on nonnegative data).
  Vector hyperplane_normal;
  double hyperplane_offset = 1.0;  // z != 0
  ScalingMode scaling_mode = ScalingMode::generic;
  Vector degrees;  // degree mode: positive, one per column of B

  static ErConfig generic_default(Index) { return ErConfig{}; }
  static ErConfig degree_scaling(Vector d) {
    ErConfig c;
    c.scaling_mode = ScalingMode::degree;
    c.degrees = std::move(d);
    return c;
  }
};

/// Scale each column b_i of B by s_i so the results lie on a hyperplane:
/// s_i = z / (w^T b_i) in generic mode, s_i = d_i^{-1/2} in degree mode.
/// Returns (B * diag(s), s).
inline std::pair<Matrix, Vector> scale_to_hyperplane(const Matrix& B,
                                                     const ErConfig& cfg) {
  const Index m = B.cols();
  Vector s(m);
  if (cfg.scaling_mode == ScalingMode::degree) {
    if (cfg.degrees.size() != m)
      throw input_error("scale_to_hyperplane: degree vector size mismatch");
    if ((cfg.degrees.array() <= 0).any())
      throw input_error("scale_to_hyperplane: degrees must be positive");
    s = cfg.degrees.cwiseSqrt().cwiseInverse();
  } else {
    const Vector& w = cfg.hyperplane_normal;
    if (w.size() != B.rows())
      throw input_error("scale_to_hyperplane: normal size mismatch");
    if (w.norm() == 0 || cfg.hyperplane_offset == 0)
      throw input_error("scale_to_hyperplane: w and z must be nonzero");
    std::vector<int> degenerate;
    for (Index i = 0; i < m; ++i) {
      const double dot = w.dot(B.col(i));
      const double floor =
          default_tols().hyperplane * std::max(1.0, w.norm() * B.col(i).norm());
      if (std::abs(dot) <= floor) {
        degenerate.push_back(static_cast<int>(i));
        continue;
      }
      s(i) = cfg.hyperplane_offset / dot;
    }
    if (!degenerate.empty())
      throw hyperplane_degenerate_error(std::move(degenerate));
  }
  return {B * s.asDiagonal(), s};
}

enum class ErVariant { er, mer };

struct ErResult {
  std::vector<Index> selected;  // J, ascending, original column numbering
  std::vector<Index> active;    // I, ascending, original column numbering
  std::vector<Index> kept;      // non-zero columns that entered the MVEE
  Matrix scaled;                // hyperplane-scaled columns q_i (kept only)
  EllipsoidResult ellipsoid;
};

/// Ellipsoidal-rounding separable NMF (ER), or its modification MER which
/// reduces with V_r^T instead of Sigma_r V_r^T. Steps: rank-r SVD reduction,
/// zero-column removal, hyperplane scaling, origin-centered MVEE, and SPA
/// over the active columns when more than r points touch the boundary.
inline ErResult er(const Matrix& A, Index r, const ErConfig& cfg,
                   ErVariant variant = ErVariant::er,
                   const Tolerances& tol = default_tols()) {
  if ((A.array() < 0).any()) throw input_error("er: input must be nonnegative");
  if (numerical_rank(A) < r)
    throw rank_deficient_error("er: r exceeds rank(A)");

  ThinSvd svd = thin_svd(A, r);
  Matrix B = svd.right.transpose();  // V_r^T
  if (variant == ErVariant::er) B = svd.singulars.asDiagonal() * B;

  // drop zero columns, keeping the original numbering
  const double col_floor = 1e-12 * B.colwise().norm().maxCoeff();
  std::vector<Index> kept;
  for (Index j = 0; j < B.cols(); ++j)
    if (B.col(j).norm() > col_floor) kept.push_back(j);
  Matrix Bk(r, static_cast<Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) Bk.col(c) = B.col(kept[c]);

  ErConfig local = cfg;
  if (cfg.scaling_mode == ScalingMode::generic &&
      cfg.hyperplane_normal.size() == 0) {
    Vector w = Vector::Zero(r);
    w(0) = Bk.row(0).sum() >= 0 ? 1.0 : -1.0;
    local.hyperplane_normal = std::move(w);
  }
  if (cfg.scaling_mode == ScalingMode::degree && !kept.empty() &&
      cfg.degrees.size() == B.cols()) {
    local.degrees.resize(static_cast<Index>(kept.size()));
    for (std::size_t c = 0; c < kept.size(); ++c)
      local.degrees(c) = cfg.degrees(kept[c]);
  }
  auto [Q, scale] = scale_to_hyperplane(Bk, local);

  ErResult res;
  res.ellipsoid = mvee_origin(Q, tol.mvee_eps, tol);
  for (Index i : res.ellipsoid.active) res.active.push_back(kept[i]);

  if (static_cast<Index>(res.ellipsoid.active.size()) == r) {
    res.selected = res.active;
  } else {
    Matrix Qa(r, static_cast<Index>(res.ellipsoid.active.size()));
    for (std::size_t c = 0; c < res.ellipsoid.active.size(); ++c)
      Qa.col(c) = Q.col(res.ellipsoid.active[c]);
    for (Index pick : spa(Qa, r))
      res.selected.push_back(res.active[pick]);
    std::sort(res.selected.begin(), res.selected.end());
  }
  res.kept = std::move(kept);
  res.scaled = std::move(Q);
  return res;
}

// Generator spec for separable / near-separable test matrices
// A = F (I, K) Pi + N.
struct SeparableSpec {
  Index d = 10;
  Index m = 50;
  Index r = 3;
  double noise_level = 0.0;
};

struct SeparableInstance {
  Matrix data;                     // d x m
  std::vector<Index> basis;        // ascending true basis column indices
  Matrix basis_matrix;             // F, d x r
};

/// Deterministic per seed. Basis columns are well conditioned and weight
/// columns stay strictly inside the simplex so the MVEE touches only the
/// planted vertices.
inline SeparableInstance make_separable(const SeparableSpec& spec,
                                        std::uint64_t seed) {
  if (spec.r > spec.d || spec.r > spec.m)
    throw input_error("make_separable: need r <= min(d, m)");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.05, 1.0);

  Matrix F(spec.d, spec.r);
  for (Index j = 0; j < spec.r; ++j)
    for (Index i = 0; i < spec.d; ++i) F(i, j) = unif(rng);
  for (Index j = 0; j < spec.r; ++j) F(j, j) += 2.0;  // separate the vertices

  Matrix W(spec.r, spec.m - spec.r);
  for (Index j = 0; j < W.cols(); ++j) {
    Vector k(spec.r);
    for (Index i = 0; i < spec.r; ++i) k(i) = unif(rng);
    k /= k.sum();
    // pull toward the barycenter: interior points, never near a vertex
    k = 0.85 * k + Vector::Constant(spec.r, 0.15 / spec.r);
    k *= std::uniform_real_distribution<double>(0.3, 1.0)(rng);
    W.col(j) = k;
  }

  std::vector<Index> perm(spec.m);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);

  SeparableInstance inst;
  inst.data.resize(spec.d, spec.m);
  for (Index t = 0; t < spec.r; ++t) inst.data.col(perm[t]) = F.col(t);
  for (Index t = spec.r; t < spec.m; ++t)
    inst.data.col(perm[t]) = F * W.col(t - spec.r);

  if (spec.noise_level > 0) {
    std::uniform_real_distribution<double> noise(-spec.noise_level,
                                                 spec.noise_level);
    for (Index j = 0; j < spec.m; ++j)
      for (Index i = 0; i < spec.d; ++i)
        inst.data(i, j) = std::max(0.0, inst.data(i, j) + noise(rng));
  }

  inst.basis.assign(perm.begin(), perm.begin() + spec.r);
  std::sort(inst.basis.begin(), inst.basis.end());
  inst.basis_matrix = std::move(F);
  return inst;
}

}  // namespace ncer
