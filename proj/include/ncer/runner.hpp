#pragma once

#include <algorithm>
#include <chrono>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncer/bridge.hpp"
#include "ncer/io.hpp"
#include "ncer/pipelines.hpp"
#include "ncer/synth.hpp"

namespace ncer {

enum class Algo { ncer, nc, nmf, er, mer };

inline Algo parse_algo(const std::string& s) {
  if (s == "ncer") return Algo::ncer;
  if (s == "nc") return Algo::nc;
  if (s == "nmf") return Algo::nmf;
  if (s == "er") return Algo::er;
  if (s == "mer") return Algo::mer;
  throw input_error("unknown algorithm: " + s);
}

inline const char* algo_name(Algo a) {
  switch (a) {
    case Algo::ncer: return "ncer";
    case Algo::nc: return "nc";
    case Algo::nmf: return "nmf";
    case Algo::er: return "er";
    case Algo::mer: return "mer";
  }
  return "?";
}

struct RunConfig {
  Algo algorithm = Algo::ncer;
  Index r = 2;
  Index p = 0;  // 0 means p = m
  double kernel_b = 0.0;
  int kernel_c = 1;
  std::uint64_t seed = 0;
  Index trials = 1;             // nc / nmf only
  std::vector<Index> sweep;     // optional p grid
  bool check_bridge = false;    // run the ER/MER harness when p = m
  std::string data_path;
  std::string labels_path;
  std::string out_path;         // JSON report; <out>.trials.csv alongside
  double shift = 0.0;
  bool points_as_rows = false;
  bool idx_data = false;
  bool drop_isolated = false;
};

struct TrialRow {
  Index trial = 0;
  Index p = 0;
  double ac = -1.0;   // -1 when no ground truth given
  double nmi = -1.0;
  double seconds = 0.0;
  Index active_size = 0;
  Index iterations = 0;
};

struct RunReport {
  std::string algorithm;
  Index m = 0, d = 0, r = 0;
  std::vector<TrialRow> rows;
  std::vector<int> last_labels;
  double ac_min = -1, ac_avg = -1, ac_max = -1;
  double nmi_min = -1, nmi_avg = -1, nmi_max = -1;
  double wall_seconds = 0.0;
  std::vector<int> dropped;     // isolated vertices removed on request
  std::optional<BridgeReport> bridge;
  Vector eigenvalues;
};

namespace detail {

inline std::uint64_t trial_seed(std::uint64_t base, Index trial) {
  std::uint64_t x = base + 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(trial) + 1);
  x ^= x >> 30; x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27; x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

inline void summarize(RunReport& rep) {
  double ac_min = 2, ac_max = -2, ac_sum = 0;
  double nmi_min = 2, nmi_max = -2, nmi_sum = 0;
  Index n = 0;
  for (const auto& row : rep.rows) {
    if (row.ac < 0) continue;
    ac_min = std::min(ac_min, row.ac);
    ac_max = std::max(ac_max, row.ac);
    ac_sum += row.ac;
    nmi_min = std::min(nmi_min, row.nmi);
    nmi_max = std::max(nmi_max, row.nmi);
    nmi_sum += row.nmi;
    ++n;
  }
  if (n > 0) {
    rep.ac_min = ac_min; rep.ac_avg = ac_sum / n; rep.ac_max = ac_max;
    rep.nmi_min = nmi_min; rep.nmi_avg = nmi_sum / n; rep.nmi_max = nmi_max;
  }
}

// ER/MER clustering of raw nonnegative data: select representatives, then
// assign every scaled column by the NLS step.
inline ClusterResult run_er_pipeline(const Matrix& A, Index r, ErVariant v) {
  ErResult res = er(A, r, ErConfig::generic_default(r), v);
  if (res.kept.size() != static_cast<std::size_t>(A.cols()))
    throw numerical_error("er: zero columns present, cannot label all points");
  std::vector<Index> cols(res.selected.begin(), res.selected.end());
  ClusterResult out;
  out.labels = assign_by_nls(res.scaled, cols);
  out.representatives = res.selected;
  out.active = res.active;
  out.active_size = static_cast<Index>(res.active.size());
  out.iterations = res.ellipsoid.iterations;
  return out;
}

}  // namespace detail

inline Matrix load_run_data(const RunConfig& cfg) {
  Matrix A = cfg.idx_data ? load_idx_images(cfg.data_path)
                          : load_dense_csv(cfg.data_path);
  if (cfg.points_as_rows) A = A.transpose().eval();
  if (cfg.shift != 0.0) A.array() += cfg.shift;
  return A;
}

/// Execute the configured experiment and write the JSON report plus a flat
/// per-trial CSV next to it.
inline RunReport run(const RunConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  Matrix A = load_run_data(cfg);

  std::optional<Partition> truth;
  if (!cfg.labels_path.empty()) {
    truth = load_labels(cfg.labels_path);
    if (truth->size() != static_cast<std::size_t>(A.cols()))
      throw input_error("label count does not match data point count");
  }

  RunReport rep;
  rep.algorithm = algo_name(cfg.algorithm);
  rep.r = cfg.r;

  SimilarityConfig sim;
  sim.kernel_offset = cfg.kernel_b;
  sim.kernel_degree = cfg.kernel_c;
  sim.neighbor_number = cfg.p == 0 ? A.cols() : cfg.p;

  // optional isolated-vertex removal, reported rather than silent
  if (cfg.drop_isolated &&
      (cfg.algorithm == Algo::ncer || cfg.algorithm == Algo::nc)) {
    for (;;) {
      try {
        build_graph(A, sim);
        break;
      } catch (const isolated_vertex_error& e) {
        std::vector<bool> drop(A.cols(), false);
        for (int v : e.vertices()) drop[v] = true;
        Matrix filtered(A.rows(), A.cols() - static_cast<Index>(e.vertices().size()));
        std::vector<int> kept_labels;
        Index c = 0;
        for (Index j = 0; j < A.cols(); ++j) {
          if (drop[j]) {
            rep.dropped.push_back(static_cast<int>(j));
            continue;
          }
          filtered.col(c++) = A.col(j);
          if (truth) kept_labels.push_back(truth->labels[j]);
        }
        A = std::move(filtered);
        if (truth) truth->labels = std::move(kept_labels);
        if (A.cols() < 2) throw input_error("all data points were isolated");
        sim.neighbor_number = std::min(sim.neighbor_number, A.cols());
      }
    }
  }
  rep.d = A.rows();
  rep.m = A.cols();

  std::vector<Index> p_grid = cfg.sweep;
  if (p_grid.empty()) p_grid.push_back(sim.neighbor_number);

  auto score = [&](const std::vector<int>& labels, TrialRow& row) {
    rep.last_labels = labels;
    if (!truth) return;
    Partition pred{labels, static_cast<int>(cfg.r)};
    row.ac = accuracy(*truth, pred);
    row.nmi = nmi(*truth, pred);
  };

  for (Index p : p_grid) {
    sim.neighbor_number = p == 0 ? A.cols() : p;
    const Index trials =
        (cfg.algorithm == Algo::nc || cfg.algorithm == Algo::nmf) ? cfg.trials
                                                                  : 1;
    for (Index t = 0; t < trials; ++t) {
      TrialRow row;
      row.trial = t;
      row.p = sim.neighbor_number;
      const auto t0 = std::chrono::steady_clock::now();
      ClusterResult res;
      switch (cfg.algorithm) {
        case Algo::ncer:
          res = ncer(A, cfg.r, sim);
          break;
        case Algo::nc:
          res = nc(A, cfg.r, sim,
                   KmeansInit::from_seed(detail::trial_seed(cfg.seed, t)));
          break;
        case Algo::nmf: {
          std::mt19937_64 rng(detail::trial_seed(cfg.seed, t));
          std::uniform_real_distribution<double> unif(0.0, 1.0);
          Matrix F(A.rows(), cfg.r);
          for (Index j = 0; j < cfg.r; ++j)
            for (Index i = 0; i < A.rows(); ++i) F(i, j) = unif(rng);
          res = nmf_baseline(A, cfg.r, F);
          break;
        }
        case Algo::er:
          res = detail::run_er_pipeline(A, cfg.r, ErVariant::er);
          break;
        case Algo::mer:
          res = detail::run_er_pipeline(A, cfg.r, ErVariant::mer);
          break;
      }
      row.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      row.active_size = res.active_size;
      row.iterations = res.iterations;
      if (res.eigenvalues.size() > 0) rep.eigenvalues = res.eigenvalues;
      score(res.labels, row);
      rep.rows.push_back(row);
    }

    if (cfg.check_bridge && cfg.algorithm == Algo::ncer &&
        sim.neighbor_number == A.cols() && cfg.kernel_b == 0.0 &&
        cfg.kernel_c == 1) {
      rep.bridge = verify_bridge(A, cfg.r);
    }
  }

  detail::summarize(rep);
  rep.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t_start)
                         .count();
  return rep;
}

inline nlohmann::json report_to_json(const RunReport& rep) {
  nlohmann::json j;
  j["algorithm"] = rep.algorithm;
  j["d"] = rep.d;
  j["m"] = rep.m;
  j["r"] = rep.r;
  j["wall_seconds"] = rep.wall_seconds;
  if (!rep.dropped.empty()) j["dropped_isolated"] = rep.dropped;
  if (rep.ac_min >= 0) {
    j["ac"] = {{"min", rep.ac_min}, {"avg", rep.ac_avg}, {"max", rep.ac_max}};
    j["nmi"] = {{"min", rep.nmi_min}, {"avg", rep.nmi_avg}, {"max", rep.nmi_max}};
  }
  j["trials"] = nlohmann::json::array();
  for (const auto& row : rep.rows) {
    nlohmann::json t;
    t["trial"] = row.trial;
    t["p"] = row.p;
    if (row.ac >= 0) { t["ac"] = row.ac; t["nmi"] = row.nmi; }
    t["seconds"] = row.seconds;
    t["active_size"] = row.active_size;
    t["iterations"] = row.iterations;
    j["trials"].push_back(t);
  }
  if (rep.eigenvalues.size() > 0)
    j["eigenvalues"] = std::vector<double>(
        rep.eigenvalues.data(), rep.eigenvalues.data() + rep.eigenvalues.size());
  if (rep.bridge) {
    j["bridge"] = {{"active_sets_equal", rep.bridge->active_sets_equal},
                   {"selections_equal", rep.bridge->selections_equal},
                   {"labels_equal", rep.bridge->labels_equal},
                   {"eigenvalue_max_err", rep.bridge->eigenvalue_max_err},
                   {"hyperplane_max_err", rep.bridge->hyperplane_max_err}};
  }
  j["labels"] = rep.last_labels;
  return j;
}

inline void write_report(const RunReport& rep, const std::string& out_path) {
  {
    std::ofstream out(out_path);
    if (!out) throw input_error("cannot write: " + out_path);
    out << report_to_json(rep).dump(2) << '\n';
  }
  std::ofstream csv(out_path + ".trials.csv");
  if (!csv) throw input_error("cannot write: " + out_path + ".trials.csv");
  csv << "trial,p,ac,nmi,seconds,active_size,iterations\n";
  for (const auto& row : rep.rows) {
    csv << row.trial << ',' << row.p << ',';
    if (row.ac >= 0) csv << row.ac << ',' << row.nmi;
    else csv << ',';
    csv << ',' << row.seconds << ',' << row.active_size << ','
        << row.iterations << '\n';
  }
}

}  // namespace ncer
