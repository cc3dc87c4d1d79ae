#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ncer/linalg.hpp"

namespace ncer {

// Optimal shape matrix L* of the origin-centered MVEE for {+-p_1..+-p_m},
// with the boundary-point index set.
struct EllipsoidResult {
  Matrix shape;             // r x r positive definite
  std::vector<Index> active;  // ascending indices with p_i^T L* p_i ~ 1
  double gap = 0.0;         // achieved relative dual gap
  Index iterations = 0;
};

/// Indices i with p_i^T shape p_i >= 1 - active_tol, ascending.
inline std::vector<Index> active_points(const Matrix& P, const Matrix& shape,
                                        double active_tol = default_tols().mvee_active) {
  std::vector<Index> out;
  for (Index i = 0; i < P.cols(); ++i)
    if (P.col(i).dot(shape * P.col(i)) >= 1.0 - active_tol) out.push_back(i);
  return out;
}

/// Origin-centered MVEE of the centrally symmetric set {+-p_i} by the
/// Frank-Wolfe algorithm with away steps (Wolfe-Atwood) on the dual
/// D-optimal design problem over the points p_i p_i^T. The returned shape
/// L = (r M(u))^{-1} satisfies p_i^T L p_i <= 1 + eps for all i and
/// -log det L is within r log(1 + eps) of the optimum.
inline EllipsoidResult mvee_origin(const Matrix& P,
                                   double eps = default_tols().mvee_eps,
                                   const Tolerances& tol = default_tols()) {
  const Index r = P.rows();
  const Index m = P.cols();
  if (eps <= 0) throw input_error("mvee_origin: eps must be positive");
  if (numerical_rank(P) < r)
    throw rank_deficient_error(
        "mvee_origin: rank(P) < r, enclosing volume is unbounded below");

  Vector u = Vector::Constant(m, 1.0 / static_cast<double>(m));

  auto design_matrix = [&](const Vector& w) {
    Matrix M = Matrix::Zero(r, r);
    for (Index i = 0; i < m; ++i)
      M.noalias() += w(i) * P.col(i) * P.col(i).transpose();
    return M;
  };

  Matrix Minv = design_matrix(u).ldlt().solve(Matrix::Identity(r, r));
  Vector g(m);  // leverage values p_i^T M(u)^{-1} p_i
  auto refresh = [&]() {
    Minv = design_matrix(u).ldlt().solve(Matrix::Identity(r, r));
    for (Index i = 0; i < m; ++i) g(i) = P.col(i).dot(Minv * P.col(i));
  };
  refresh();

  const Index cap = 100 * m * r;
  const double rd = static_cast<double>(r);
  double gap = std::numeric_limits<double>::infinity();
  Index it = 0;
  for (; it < cap; ++it) {
    if (it % 512 == 511) refresh();  // curb rank-one update drift

    Index j_plus = 0, j_minus = -1;
    double g_max = -1.0, g_min = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < m; ++i) {
      if (g(i) > g_max) { g_max = g(i); j_plus = i; }
      if (u(i) > 0 && g(i) < g_min) { g_min = g(i); j_minus = i; }
    }
    const double e_plus = g_max / rd - 1.0;
    const double e_minus = 1.0 - g_min / rd;
    gap = std::max(e_plus, e_minus);
    if (gap <= eps) break;

    Index j;
    double alpha;
    if (e_plus >= e_minus) {
      j = j_plus;
      alpha = (g_max - rd) / (rd * (g_max - 1.0));
    } else {
      j = j_minus;
      const double alpha_low = -u(j_minus) / (1.0 - u(j_minus));
      if (g_min > 1.0 + 1e-14)
        alpha = std::max((g_min - rd) / (rd * (g_min - 1.0)), alpha_low);
      else
        alpha = alpha_low;
    }

    // rank-one update of u, M^{-1}, and the leverage values
    const double c = alpha / (1.0 - alpha);
    const double gj = g(j);
    const double denom = 1.0 + c * gj;
    Vector z = P.transpose() * (Minv * P.col(j));
    g = (g - (c / denom) * z.cwiseAbs2()) / (1.0 - alpha);
    Minv = (Minv - (c / denom) * (Minv * P.col(j)) *
                       (P.col(j).transpose() * Minv)) /
           (1.0 - alpha);
    u *= (1.0 - alpha);
    u(j) += alpha;
    if (u(j) < 1e-16) u(j) = 0.0;
  }
  refresh();  // exact leverages for the final classification

  if (gap > eps)
    throw iteration_cap_error("mvee_origin: iteration cap exceeded", gap);

  EllipsoidResult res;
  res.shape = Minv / rd;
  res.active = active_points(P, res.shape, tol.mvee_active);
  res.gap = gap;
  res.iterations = it;
  return res;
}

}  // namespace ncer
