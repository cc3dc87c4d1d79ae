#pragma once

#include <cmath>
#include <vector>

#include "ncer/metrics.hpp"
#include "ncer/pipelines.hpp"
#include "ncer/separable.hpp"

namespace ncer {

// Outcome of the NCER <-> ER/MER equivalence checks on one dataset:
// with the inner-product kernel and p = m, the NCER active set must equal
// the ER active set, and NCER clusters must coincide with clusters derived
// from MER output by the same NLS assignment.
struct BridgeReport {
  bool active_sets_equal = false;
  bool selections_equal = false;  // NCER J vs MER J
  bool labels_equal = false;      // up to cluster renaming
  double eigenvalue_max_err = 0.0;  // max |lambda_i - (1 - sigma_i^2)|
  double hyperplane_max_err = 0.0;  // max |e_1^T p_i - tau|
  std::vector<Index> ncer_active;
  std::vector<Index> er_active;

  bool all_pass(double value_tol = 1e-8) const {
    return active_sets_equal && selections_equal && labels_equal &&
           eigenvalue_max_err <= value_tol && hyperplane_max_err <= value_tol;
  }
};

/// Run NCER (kernel b = 0, c = 1, p = m) and ER/MER (data A D^{-1/2},
/// scaling S = D^{-1/2}) on the same nonnegative data and compare.
inline BridgeReport verify_bridge(const Matrix& A, Index r,
                                  const Tolerances& tol = default_tols()) {
  if ((A.array() < 0).any())
    throw input_error("verify_bridge: data must be nonnegative");
  for (Index j = 0; j < A.cols(); ++j)
    if (A.col(j).norm() == 0)
      throw input_error("verify_bridge: zero data column");

  const Index m = A.cols();
  SimilarityConfig cfg;
  cfg.kernel_offset = 0.0;
  cfg.kernel_degree = 1;
  cfg.neighbor_number = m;

  // NCER route
  const SimilarityGraph g = build_graph(A, cfg);
  const SpectralEmbedding emb = spectral_embed(g, r, tol);
  ClusterResult nres = ncer(A, r, cfg, tol);

  // ER route: degrees d_i = a_i^T (a_1 + ... + a_m)
  const Vector col_sum = A.rowwise().sum();
  Vector degrees(m);
  for (Index i = 0; i < m; ++i) degrees(i) = A.col(i).dot(col_sum);
  const Matrix A_scaled = A * degrees.cwiseSqrt().cwiseInverse().asDiagonal();

  const ErConfig er_cfg = ErConfig::degree_scaling(degrees);
  ErResult er_res = er(A_scaled, r, er_cfg, ErVariant::er, tol);
  ErResult mer_res = er(A_scaled, r, er_cfg, ErVariant::mer, tol);

  // classify MER's q_1..q_m by the NCER assignment step
  std::vector<Index> mer_cols(mer_res.selected.size());
  for (std::size_t c = 0; c < mer_res.selected.size(); ++c) {
    auto it = std::find(mer_res.kept.begin(), mer_res.kept.end(),
                        mer_res.selected[c]);
    mer_cols[c] = static_cast<Index>(it - mer_res.kept.begin());
  }
  const std::vector<int> mer_labels = assign_by_nls(mer_res.scaled, mer_cols, tol);

  BridgeReport rep;
  rep.ncer_active = nres.active;
  rep.er_active = er_res.active;
  rep.active_sets_equal = nres.active == er_res.active;
  rep.selections_equal = nres.representatives == mer_res.selected;

  Partition truth{nres.labels, static_cast<int>(r)};
  Partition pred{mer_labels, static_cast<int>(r)};
  rep.labels_equal = accuracy(truth, pred) == 1.0;

  // lambda_i = 1 - sigma_i^2 for the singular values of A D^{-1/2}
  const ThinSvd svd = thin_svd(A_scaled, std::min(r, std::min(A.rows(), m)));
  for (Index i = 0; i < svd.singulars.size(); ++i) {
    const double expected = 1.0 - svd.singulars(i) * svd.singulars(i);
    rep.eigenvalue_max_err = std::max(
        rep.eigenvalue_max_err, std::abs(emb.eigenvalues(i) - expected));
  }
  for (Index i = 0; i < m; ++i)
    rep.hyperplane_max_err = std::max(rep.hyperplane_max_err,
                                      std::abs(emb.points(0, i) - emb.tau));
  return rep;
}

}  // namespace ncer
