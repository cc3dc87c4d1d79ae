// Command-line front end: cluster, eval, sweep, synth, verify.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>

#include "ncer/runner.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

void add_common(CLI::App* cmd, ncer::RunConfig& cfg, std::string& algo) {
  cmd->add_option("--algo", algo, "ncer | nc | nmf | er | mer");
  cmd->add_option("--r", cfg.r, "number of clusters")->required();
  cmd->add_option("--p", cfg.p, "neighbor number (0 = all points)");
  cmd->add_option("--kernel-b", cfg.kernel_b, "polynomial kernel offset b");
  cmd->add_option("--kernel-c", cfg.kernel_c, "polynomial kernel degree c");
  cmd->add_option("--trials", cfg.trials, "trials for nc/nmf");
  cmd->add_option("--seed", cfg.seed, "base RNG seed");
  cmd->add_option("--data", cfg.data_path, "data file (CSV, or IDX3 with --idx)")
      ->required();
  cmd->add_option("--labels", cfg.labels_path, "ground-truth labels");
  cmd->add_option("--out", cfg.out_path, "report path (JSON)");
  cmd->add_option("--shift", cfg.shift, "add a constant to every entry");
  cmd->add_flag("--idx", cfg.idx_data, "data file is IDX3 images");
  cmd->add_flag("--drop-isolated", cfg.drop_isolated,
                "drop isolated vertices and report them");
  cmd->add_flag("--points-as-rows", cfg.points_as_rows,
                "transpose the data on load");
}

int finish(const ncer::RunReport& rep, const std::string& out_path) {
  if (!out_path.empty()) ncer::write_report(rep, out_path);
  std::cout << ncer::report_to_json(rep).dump(2) << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NCER spectral clustering toolkit"};
  app.require_subcommand(1);

  ncer::RunConfig cfg;
  std::string algo = "ncer";

  auto* cluster = app.add_subcommand("cluster", "run one clustering algorithm");
  add_common(cluster, cfg, algo);

  auto* sweep = app.add_subcommand("sweep", "run ncer over a grid of p values");
  add_common(sweep, cfg, algo);
  std::vector<ncer::Index> p_list;
  ncer::Index unit = 0;
  sweep->add_option("--p-list", p_list, "explicit p values (0 = all points)");
  sweep->add_option("--unit", unit, "grid unit s for p in {5, s, 2s, ..., m}");
  bool with_bridge = false;
  sweep->add_flag("--check-bridge", with_bridge,
                  "compare against ER/MER at p = m");

  auto* eval = app.add_subcommand("eval", "score predicted labels against truth");
  std::string eval_truth, eval_pred;
  eval->add_option("--labels", eval_truth, "ground-truth labels")->required();
  eval->add_option("--pred", eval_pred, "predicted labels")->required();

  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  std::string kind = "planted-clusters", out_prefix = "synthetic";
  std::uint64_t synth_seed = 0;
  ncer::PlantedSpec planted;
  ncer::SeparableSpec sep;
  synth->add_option("--kind", kind,
                    "planted-clusters | separable | near-separable");
  synth->add_option("--out", out_prefix, "output file prefix");
  synth->add_option("--seed", synth_seed, "RNG seed");
  synth->add_option("--dim", planted.dim, "ambient dimension (planted)");
  synth->add_option("--clusters", planted.clusters, "cluster count (planted)");
  synth->add_option("--per-cluster", planted.per_cluster, "points per cluster");
  synth->add_option("--separation", planted.separation, "center separation");
  synth->add_option("--sigma", planted.sigma, "within-cluster stddev");
  synth->add_option("--d", sep.d, "rows (separable)");
  synth->add_option("--m", sep.m, "columns (separable)");
  synth->add_option("--basis", sep.r, "basis count (separable)");
  synth->add_option("--noise", sep.noise_level, "noise level (near-separable)");

  auto* verify = app.add_subcommand(
      "verify", "NCER vs ER/MER equivalence harness (p = m, b = 0, c = 1)");
  std::string verify_data;
  ncer::Index verify_r = 3, instances = 30;
  std::uint64_t verify_seed = 7;
  verify->add_option("--data", verify_data, "verify one CSV dataset");
  verify->add_option("--r", verify_r, "number of clusters");
  verify->add_option("--instances", instances,
                     "seeded synthetic datasets when no --data given");
  verify->add_option("--seed", verify_seed, "base seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cluster) {
      cfg.algorithm = ncer::parse_algo(algo);
      return finish(ncer::run(cfg), cfg.out_path);
    }

    if (*sweep) {
      cfg.algorithm = ncer::parse_algo(algo);
      if (!p_list.empty()) {
        cfg.sweep = p_list;
      } else if (unit > 5) {
        cfg.sweep.push_back(5);
        ncer::Matrix A = ncer::load_run_data(cfg);
        for (ncer::Index p = unit; p < A.cols(); p += unit)
          cfg.sweep.push_back(p);
        cfg.sweep.push_back(A.cols());
      } else {
        throw ncer::input_error("sweep: give --p-list or --unit > 5");
      }
      cfg.check_bridge = with_bridge;
      return finish(ncer::run(cfg), cfg.out_path);
    }

    if (*eval) {
      ncer::Partition truth = ncer::load_labels(eval_truth);
      ncer::Partition pred = ncer::load_labels(eval_pred);
      nlohmann::json j;
      j["ac"] = ncer::accuracy(truth, pred);
      j["nmi"] = ncer::nmi(truth, pred);
      std::cout << j.dump(2) << std::endl;
      return 0;
    }

    if (*synth) {
      nlohmann::json manifest;
      manifest["kind"] = kind;
      manifest["seed"] = synth_seed;
      if (kind == "planted-clusters") {
        auto inst = ncer::make_planted_clusters(planted, synth_seed);
        ncer::save_dense_csv(out_prefix + ".data.csv", inst.data);
        ncer::save_labels(out_prefix + ".labels.txt", inst.truth.labels);
        manifest["dim"] = planted.dim;
        manifest["clusters"] = planted.clusters;
        manifest["per_cluster"] = planted.per_cluster;
        manifest["separation"] = planted.separation;
        manifest["sigma"] = planted.sigma;
      } else if (kind == "separable" || kind == "near-separable") {
        if (kind == "separable") sep.noise_level = 0.0;
        auto inst = ncer::make_separable(sep, synth_seed);
        ncer::save_dense_csv(out_prefix + ".data.csv", inst.data);
        std::ofstream basis(out_prefix + ".basis.txt");
        for (ncer::Index i : inst.basis) basis << i << '\n';
        manifest["d"] = sep.d;
        manifest["m"] = sep.m;
        manifest["r"] = sep.r;
        manifest["noise"] = sep.noise_level;
        manifest["basis"] = inst.basis;
      } else {
        throw ncer::input_error("unknown synthetic kind: " + kind);
      }
      std::ofstream mf(out_prefix + ".manifest.json");
      mf << manifest.dump(2) << '\n';
      std::cout << "wrote " << out_prefix << ".*" << std::endl;
      return 0;
    }

    if (*verify) {
      bool all_ok = true;
      auto check = [&](const ncer::Matrix& A, ncer::Index r,
                       const std::string& name) {
        ncer::BridgeReport rep = ncer::verify_bridge(A, r);
        const bool ok = rep.all_pass();
        all_ok = all_ok && ok;
        std::cout << (ok ? "PASS " : "FAIL ") << name
                  << "  active_sets=" << rep.active_sets_equal
                  << " selections=" << rep.selections_equal
                  << " labels=" << rep.labels_equal
                  << " eig_err=" << rep.eigenvalue_max_err
                  << " hyperplane_err=" << rep.hyperplane_max_err << std::endl;
      };
      if (!verify_data.empty()) {
        check(ncer::load_dense_csv(verify_data), verify_r, verify_data);
      } else {
        for (ncer::Index i = 0; i < instances; ++i) {
          ncer::PlantedSpec spec;
          spec.dim = 6;
          spec.clusters = verify_r;
          spec.per_cluster = 20;
          auto inst = ncer::make_planted_clusters(spec, verify_seed + i);
          check(inst.data, verify_r, "instance " + std::to_string(i));
        }
      }
      return all_ok ? 0 : kExitNumerical;
    }
  } catch (const ncer::input_error& e) {
    std::cerr << "input error: " << e.what() << std::endl;
    return kExitInput;
  } catch (const ncer::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << std::endl;
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitInput;
  }
  return 0;
}
