#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "ncer/embedding.hpp"
#include "ncer/graph.hpp"
#include "ncer/linalg.hpp"
#include "ncer/mvee.hpp"
#include "ncer/separable.hpp"

namespace ncer {

struct ClusterResult {
  std::vector<int> labels;          // 1..r
  std::vector<Index> representatives;  // J; empty for NC / K-means
  std::optional<Matrix> centers;    // K-means centers or NMF basis
  double objective = 0.0;
  // diagnostics
  std::vector<Index> active;  // MVEE active set (NCER only)
  Index active_size = 0;
  Index iterations = 0;
  std::vector<double> objective_history;
  Vector eigenvalues;
  double tau = 0.0;
};

struct KmeansInit {
  std::optional<Matrix> centers;  // k x r initial centers
  std::uint64_t seed = 0;         // random-point init when centers absent

  static KmeansInit from_centers(Matrix c) {
    KmeansInit i;
    i.centers = std::move(c);
    return i;
  }
  static KmeansInit from_seed(std::uint64_t s) {
    KmeansInit i;
    i.seed = s;
    return i;
  }
};

struct KmeansOutput {
  std::vector<int> labels;
  Matrix centers;
  double cost = 0.0;
  std::vector<double> cost_history;  // one entry per Lloyd iteration
  Index iterations = 0;
};

/// Lloyd alternation on the columns of X. Stops at a label fixpoint or
/// max_iter. An emptied cluster is reseeded at the point farthest from its
/// assigned center.
inline KmeansOutput kmeans(const Matrix& X, Index r, const KmeansInit& init,
                           Index max_iter = 300) {
  const Index m = X.cols();
  if (r < 1 || r > m) throw input_error("kmeans: r out of [1, m]");

  Matrix centers(X.rows(), r);
  if (init.centers) {
    if (init.centers->rows() != X.rows() || init.centers->cols() != r)
      throw input_error("kmeans: initial center shape mismatch");
    centers = *init.centers;
  } else {
    std::mt19937_64 rng(init.seed);
    std::vector<Index> idx(m);
    std::iota(idx.begin(), idx.end(), Index{0});
    std::shuffle(idx.begin(), idx.end(), rng);
    for (Index j = 0; j < r; ++j) centers.col(j) = X.col(idx[j]);
  }

  KmeansOutput out;
  out.labels.assign(m, 0);
  auto assign = [&]() -> double {
    double cost = 0.0;
    for (Index i = 0; i < m; ++i) {
      int best = 0;
      double best_d = (X.col(i) - centers.col(0)).squaredNorm();
      for (Index j = 1; j < r; ++j) {
        const double d = (X.col(i) - centers.col(j)).squaredNorm();
        if (d < best_d) { best_d = d; best = static_cast<int>(j); }
      }
      out.labels[i] = best + 1;
      cost += best_d;
    }
    return cost;
  };

  std::vector<int> prev;
  for (Index it = 0; it < max_iter; ++it) {
    out.cost = assign();
    out.cost_history.push_back(out.cost);
    out.iterations = it + 1;
    if (out.labels == prev) break;
    prev = out.labels;

    std::vector<Index> counts(r, 0);
    Matrix sums = Matrix::Zero(X.rows(), r);
    for (Index i = 0; i < m; ++i) {
      sums.col(out.labels[i] - 1) += X.col(i);
      ++counts[out.labels[i] - 1];
    }
    for (Index j = 0; j < r; ++j) {
      if (counts[j] > 0) {
        centers.col(j) = sums.col(j) / static_cast<double>(counts[j]);
      } else {
        Index far = 0;
        double far_d = -1.0;
        for (Index i = 0; i < m; ++i) {
          const double d =
              (X.col(i) - centers.col(out.labels[i] - 1)).squaredNorm();
          if (d > far_d) { far_d = d; far = i; }
        }
        centers.col(j) = X.col(far);
      }
    }
  }
  out.centers = std::move(centers);
  return out;
}

/// Per-point NLS assignment against the representative columns P(J):
/// solve min ||P(J) w - p_i||, w >= 0, and label by the largest coefficient
/// (ties toward the lowest cluster index).
inline std::vector<int> assign_by_nls(const Matrix& P,
                                      const std::vector<Index>& reps,
                                      const Tolerances& tol = default_tols()) {
  const Index r = static_cast<Index>(reps.size());
  Matrix PJ(P.rows(), r);
  for (Index j = 0; j < r; ++j) PJ.col(j) = P.col(reps[j]);
  std::vector<int> labels(P.cols());
  for (Index i = 0; i < P.cols(); ++i) {
    const Vector w = nnls(PJ, P.col(i), tol);
    int best = 0;
    for (Index j = 1; j < r; ++j)
      if (w(j) > w(best)) best = static_cast<int>(j);
    labels[i] = best + 1;
  }
  return labels;
}

/// NCER: spectral embedding, origin-centered MVEE over {+-p_i}, SPA on the
/// active columns when more than r touch the boundary, then NLS assignment.
/// Deterministic for identical inputs.
inline ClusterResult ncer(const Matrix& A, Index r, const SimilarityConfig& cfg,
                          const Tolerances& tol = default_tols()) {
  const SimilarityGraph g = build_graph(A, cfg);
  const SpectralEmbedding emb = spectral_embed(g, r, tol);
  EllipsoidResult ell = mvee_origin(emb.points, tol.mvee_eps, tol);
  if (static_cast<Index>(ell.active.size()) < r)
    ell.active = active_points(emb.points, ell.shape, 10.0 * tol.mvee_active);
  if (static_cast<Index>(ell.active.size()) < r)
    throw numerical_error("ncer: fewer than r active points");

  std::vector<Index> reps;
  if (static_cast<Index>(ell.active.size()) == r) {
    reps = ell.active;
  } else {
    Matrix Pa(r, static_cast<Index>(ell.active.size()));
    for (std::size_t c = 0; c < ell.active.size(); ++c)
      Pa.col(c) = emb.points.col(ell.active[c]);
    for (Index pick : spa(Pa, r)) reps.push_back(ell.active[pick]);
    std::sort(reps.begin(), reps.end());
  }

  ClusterResult res;
  res.labels = assign_by_nls(emb.points, reps, tol);
  res.representatives = std::move(reps);
  res.active_size = static_cast<Index>(ell.active.size());
  res.active = std::move(ell.active);
  res.iterations = ell.iterations;
  res.eigenvalues = emb.eigenvalues;
  res.tau = emb.tau;
  res.objective = normalized_cut_value(g, res.labels, static_cast<int>(r));
  return res;
}

/// NC: the same embedding, clustered by K-means instead of the ellipsoid.
inline ClusterResult nc(const Matrix& A, Index r, const SimilarityConfig& cfg,
                        const KmeansInit& init,
                        const Tolerances& tol = default_tols()) {
  const SimilarityGraph g = build_graph(A, cfg);
  const SpectralEmbedding emb = spectral_embed(g, r, tol);
  KmeansOutput km = kmeans(emb.points, r, init);

  ClusterResult res;
  res.labels = std::move(km.labels);
  res.centers = std::move(km.centers);
  res.objective = km.cost;
  res.iterations = km.iterations;
  res.objective_history = std::move(km.cost_history);
  res.eigenvalues = emb.eigenvalues;
  res.tau = emb.tau;
  return res;
}

/// NMF baseline f(F, W) = ||F W - A||_F^2 minimized by block coordinate
/// descent with exact NLS subproblem solves; labels by the largest weight
/// in each column of W.
inline ClusterResult nmf_baseline(const Matrix& A, Index r,
                                  const Matrix& init_F, Index max_iter = 500,
                                  double rel_tol = 1e-6,
                                  const Tolerances& tol = default_tols()) {
  if ((A.array() < 0).any())
    throw input_error("nmf_baseline: input must be nonnegative");
  if (init_F.rows() != A.rows() || init_F.cols() != r)
    throw input_error("nmf_baseline: init_F shape mismatch");
  if ((init_F.array() < 0).any())
    throw input_error("nmf_baseline: init_F must be nonnegative");

  Matrix F = init_F;
  Matrix W(r, A.cols());

  ClusterResult res;
  double prev = std::numeric_limits<double>::infinity();
  for (Index it = 0; it < max_iter; ++it) {
    for (Index i = 0; i < A.cols(); ++i) W.col(i) = nnls(F, A.col(i), tol);
    const Matrix Wt = W.transpose();
    for (Index i = 0; i < A.rows(); ++i)
      F.row(i) = nnls(Wt, A.row(i).transpose(), tol).transpose();
    const double obj = (F * W - A).squaredNorm();
    res.objective_history.push_back(obj);
    res.iterations = it + 1;
    const bool converged =
        it > 0 && prev - obj <= rel_tol * std::max(prev, 1e-300);
    prev = obj;
    if (converged) break;
  }
  res.objective = prev;
  res.centers = std::move(F);
  res.labels.resize(A.cols());
  for (Index i = 0; i < A.cols(); ++i) {
    int best = 0;
    for (Index j = 1; j < r; ++j)
      if (W(j, i) > W(best, i)) best = static_cast<int>(j);
    res.labels[i] = best + 1;
  }
  return res;
}

}  // namespace ncer
