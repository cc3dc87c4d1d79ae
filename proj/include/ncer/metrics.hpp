#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ncer/errors.hpp"

namespace ncer {

struct Partition {
  std::vector<int> labels;  // values in 1..r
  int r = 0;

  std::size_t size() const { return labels.size(); }

  void validate() const {
    if (labels.empty()) throw input_error("partition: empty label list");
    for (int l : labels)
      if (l < 1 || l > r) throw input_error("partition: label out of 1..r");
  }
};

/// Maximum-weight assignment on a square matrix, via the Hungarian method
/// on negated weights. Returns match[i] = column assigned to row i.
inline std::vector<int> hungarian(const std::vector<std::vector<double>>& weight) {
  const int n = static_cast<int>(weight.size());
  for (const auto& row : weight)
    if (static_cast<int>(row.size()) != n)
      throw input_error("hungarian: matrix not square");

  const double INF = std::numeric_limits<double>::infinity();
  // potentials over rows (u) and columns (v); way[] tracks augmenting paths
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, INF);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = INF;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = -weight[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) { minv[j] = cur; way[j] = j0; }
        if (minv[j] < delta) { delta = minv[j]; j1 = j; }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) { u[p[j]] += delta; v[j] -= delta; }
        else minv[j] -= delta;
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> match(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) match[p[j] - 1] = j - 1;
  return match;
}

namespace detail {

// r x r overlap counts |Omega_i ^ C_j|, zero-padded to square when the
// partitions disagree on r.
inline std::vector<std::vector<double>> overlap_matrix(const Partition& truth,
                                                       const Partition& pred) {
  const int n = std::max(truth.r, pred.r);
  std::vector<std::vector<double>> o(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < truth.size(); ++i)
    o[truth.labels[i] - 1][pred.labels[i] - 1] += 1.0;
  return o;
}

}  // namespace detail

/// Clustering accuracy: best class-to-cluster matching of the overlap
/// counts, normalized by the number of points.
inline double accuracy(const Partition& truth, const Partition& pred) {
  if (truth.size() != pred.size())
    throw input_error("accuracy: partition length mismatch");
  truth.validate();
  pred.validate();
  const auto overlap = detail::overlap_matrix(truth, pred);
  const auto match = hungarian(overlap);
  double total = 0.0;
  for (std::size_t i = 0; i < overlap.size(); ++i)
    total += overlap[i][match[i]];
  return total / static_cast<double>(truth.size());
}

/// Normalized mutual information I(Omega, C) / ((H(Omega) + H(C)) / 2),
/// natural-log entropies. Returns 1 when both partitions are single-class.
inline double nmi(const Partition& truth, const Partition& pred) {
  if (truth.size() != pred.size())
    throw input_error("nmi: partition length mismatch");
  truth.validate();
  pred.validate();
  const double m = static_cast<double>(truth.size());
  const auto joint = detail::overlap_matrix(truth, pred);
  const int n = static_cast<int>(joint.size());
  std::vector<double> row(n, 0.0), col(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      row[i] += joint[i][j];
      col[j] += joint[i][j];
    }
  double info = 0.0, h_row = 0.0, h_col = 0.0;
  for (int i = 0; i < n; ++i) {
    if (row[i] > 0) h_row -= row[i] / m * std::log(row[i] / m);
    if (col[i] > 0) h_col -= col[i] / m * std::log(col[i] / m);
    for (int j = 0; j < n; ++j)
      if (joint[i][j] > 0)
        info += joint[i][j] / m *
                std::log(joint[i][j] * m / (row[i] * col[j]));
  }
  if (h_row == 0.0 && h_col == 0.0) return 1.0;
  return std::max(0.0, info / (0.5 * (h_row + h_col)));
}

}  // namespace ncer
