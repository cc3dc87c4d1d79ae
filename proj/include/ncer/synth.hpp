#pragma once

#include <random>
#include <string>

#include "ncer/io.hpp"
#include "ncer/metrics.hpp"
#include "ncer/separable.hpp"

namespace ncer {

// r well-separated nonnegative point clouds with known labels.
struct PlantedSpec {
  Index dim = 3;
  Index clusters = 3;
  Index per_cluster = 30;
  double separation = 10.0;
  double sigma = 0.5;
};

struct PlantedInstance {
  Matrix data;      // dim x (clusters * per_cluster)
  Partition truth;
};

/// Gaussian blobs around centers 5*ones + separation*e_j, clipped at zero so
/// the inner-product kernel stays valid. Deterministic per seed.
inline PlantedInstance make_planted_clusters(const PlantedSpec& spec,
                                             std::uint64_t seed) {
  if (spec.clusters > spec.dim)
    throw input_error("make_planted_clusters: need dim >= clusters");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, spec.sigma);

  const Index m = spec.clusters * spec.per_cluster;
  PlantedInstance inst;
  inst.data.resize(spec.dim, m);
  inst.truth.r = static_cast<int>(spec.clusters);
  for (Index c = 0; c < spec.clusters; ++c) {
    Vector center = Vector::Constant(spec.dim, 5.0);
    center(c) += spec.separation;
    for (Index k = 0; k < spec.per_cluster; ++k) {
      const Index col = c * spec.per_cluster + k;
      for (Index i = 0; i < spec.dim; ++i)
        inst.data(i, col) = std::max(0.0, center(i) + noise(rng));
      inst.truth.labels.push_back(static_cast<int>(c) + 1);
    }
  }
  return inst;
}

}  // namespace ncer
