#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ncer/linalg.hpp"

namespace ncer {

// Polynomial similarity kernel (a_i . a_j + b)^c restricted to the top-p
// neighbors of each point.
struct SimilarityConfig {
  double kernel_offset = 0.0;  // b >= 0
  int kernel_degree = 1;       // c >= 1
  Index neighbor_number = 0;   // p, 1 <= p <= m

  void validate(Index m) const {
    if (kernel_offset < 0) throw input_error("similarity: kernel offset b < 0");
    if (kernel_degree < 1) throw input_error("similarity: kernel degree c < 1");
    if (neighbor_number < 1 || neighbor_number > m)
      throw input_error("similarity: neighbor number p out of [1, m]");
  }
};

struct SimilarityGraph {
  Matrix adjacency;  // symmetric, nonnegative
  Vector degrees;    // row sums, all positive

  Index size() const { return adjacency.rows(); }
};

inline double polynomial_similarity(const Vector& a_i, const Vector& a_j,
                                    const SimilarityConfig& cfg) {
  if (a_i.size() != a_j.size())
    throw input_error("polynomial_similarity: dimension mismatch");
  const double v = std::pow(a_i.dot(a_j) + cfg.kernel_offset,
                            static_cast<double>(cfg.kernel_degree));
  if (v < 0)
    throw input_error(
        "polynomial_similarity: negative kernel value; odd degree with "
        "negative inner products is invalid for this data");
  return v;
}

namespace detail {

// Full kernel matrix; rejects negative kernel values.
inline Matrix kernel_matrix(const Matrix& A, const SimilarityConfig& cfg) {
  const Index m = A.cols();
  Matrix gram = A.transpose() * A;
  Matrix K(m, m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i <= j; ++i) {
      const double v = std::pow(gram(i, j) + cfg.kernel_offset,
                                static_cast<double>(cfg.kernel_degree));
      if (v < 0)
        throw input_error("build_graph: negative kernel value at (" +
                          std::to_string(i) + "," + std::to_string(j) + ")");
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

// Indices of the top-p neighbors of column j (self excluded),
// by descending similarity, ties toward the lowest index.
inline std::vector<Index> top_neighbors(const Matrix& K, Index j, Index p) {
  const Index m = K.rows();
  std::vector<Index> idx;
  idx.reserve(m - 1);
  for (Index i = 0; i < m; ++i)
    if (i != j) idx.push_back(i);
  const Index keep = std::min<Index>(p, static_cast<Index>(idx.size()));
  std::partial_sort(idx.begin(), idx.begin() + keep, idx.end(),
                    [&](Index a, Index b) {
                      if (K(a, j) != K(b, j)) return K(a, j) > K(b, j);
                      return a < b;
                    });
  idx.resize(keep);
  return idx;
}

}  // namespace detail

/// p-nearest-neighbor similarity graph. The neighbor set excludes the point
/// itself but the diagonal k_ii is always kept, so with p = m the adjacency
/// is the full kernel matrix.
inline SimilarityGraph build_graph(const Matrix& A,
                                   const SimilarityConfig& cfg) {
  const Index m = A.cols();
  if (m < 2) throw input_error("build_graph: need at least 2 points");
  cfg.validate(m);

  const Matrix K = detail::kernel_matrix(A, cfg);
  Matrix adj = Matrix::Zero(m, m);
  for (Index j = 0; j < m; ++j) adj(j, j) = K(j, j);
  for (Index j = 0; j < m; ++j) {
    for (Index i : detail::top_neighbors(K, j, cfg.neighbor_number)) {
      adj(i, j) = K(i, j);  // i in N_p(j): keep the edge both ways
      adj(j, i) = K(i, j);
    }
  }

  SimilarityGraph g;
  g.adjacency = std::move(adj);
  g.degrees = g.adjacency.rowwise().sum();
  std::vector<int> isolated;
  for (Index i = 0; i < m; ++i)
    if (g.degrees(i) <= 0) isolated.push_back(static_cast<int>(i));
  if (!isolated.empty()) throw isolated_vertex_error(std::move(isolated));
  return g;
}

/// L = D - K; positive semidefinite, zero row sums.
inline Matrix graph_laplacian(const SimilarityGraph& g) {
  Matrix L = -g.adjacency;
  L.diagonal() += g.degrees;
  return L;
}

/// D^{-1/2} (D - K) D^{-1/2}; requires all degrees positive.
inline Matrix normalized_laplacian(const SimilarityGraph& g) {
  std::vector<int> isolated;
  for (Index i = 0; i < g.size(); ++i)
    if (g.degrees(i) <= 0) isolated.push_back(static_cast<int>(i));
  if (!isolated.empty()) throw isolated_vertex_error(std::move(isolated));
  const Vector dinv_sqrt = g.degrees.cwiseSqrt().cwiseInverse();
  Matrix L = graph_laplacian(g);
  return dinv_sqrt.asDiagonal() * L * dinv_sqrt.asDiagonal();
}

/// Normalized-cut objective sum_i cut(S_i, S_i^c) / vol(S_i) for labels
/// in 1..r. cut sums k_ij once over ordered pairs (i in S, j outside).
inline double normalized_cut_value(const SimilarityGraph& g,
                                   const std::vector<int>& labels, int r) {
  const Index m = g.size();
  if (static_cast<Index>(labels.size()) != m)
    throw input_error("normalized_cut_value: label count mismatch");
  std::vector<double> cut(r, 0.0), vol(r, 0.0);
  std::vector<Index> count(r, 0);
  for (Index i = 0; i < m; ++i) {
    const int c = labels[i] - 1;
    if (c < 0 || c >= r) throw input_error("normalized_cut_value: label out of range");
    ++count[c];
    vol[c] += g.degrees(i);
    for (Index j = 0; j < m; ++j)
      if (labels[j] != labels[i]) cut[c] += g.adjacency(i, j);
  }
  double f = 0.0;
  for (int c = 0; c < r; ++c) {
    if (count[c] == 0) throw input_error("normalized_cut_value: empty cluster");
    f += cut[c] / vol[c];
  }
  return f;
}

/// The indicator matrix H of the cut identity f = tr(H^T L H).
inline Matrix cut_indicator(const SimilarityGraph& g,
                            const std::vector<int>& labels, int r) {
  const Index m = g.size();
  std::vector<double> vol(r, 0.0);
  for (Index i = 0; i < m; ++i) vol[labels[i] - 1] += g.degrees(i);
  Matrix H = Matrix::Zero(m, r);
  for (Index i = 0; i < m; ++i)
    H(i, labels[i] - 1) = 1.0 / std::sqrt(vol[labels[i] - 1]);
  return H;
}

}  // namespace ncer
