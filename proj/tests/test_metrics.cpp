#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ncer/metrics.hpp"

using namespace ncer;

namespace {

double brute_force_assignment(const std::vector<std::vector<double>>& w) {
  const int n = static_cast<int>(w.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += w[i][perm[i]];
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("hungarian matches brute force on random matrices up to 6x6") {
  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int n = 1; n <= 6; ++n) {
    for (int t = 0; t < 30; ++t) {
      std::vector<std::vector<double>> w(n, std::vector<double>(n));
      for (auto& row : w)
        for (double& x : row) x = u(rng);
      const auto match = hungarian(w);
      // match is a permutation
      std::vector<bool> seen(n, false);
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        REQUIRE(match[i] >= 0);
        REQUIRE(match[i] < n);
        CHECK(!seen[match[i]]);
        seen[match[i]] = true;
        total += w[i][match[i]];
      }
      CHECK(total == doctest::Approx(brute_force_assignment(w)).epsilon(1e-9));
    }
  }
}

TEST_CASE("hungarian rejects ragged input") {
  std::vector<std::vector<double>> w{{1, 2}, {3}};
  CHECK_THROWS_AS(hungarian(w), input_error);
}

TEST_CASE("accuracy is 1 for identical and for relabeled partitions") {
  Partition t{{1, 1, 2, 2, 3, 3}, 3};
  Partition same = t;
  CHECK(accuracy(t, same) == doctest::Approx(1.0));
  Partition renamed{{3, 3, 1, 1, 2, 2}, 3};
  CHECK(accuracy(t, renamed) == doctest::Approx(1.0));
}

TEST_CASE("accuracy on a known confusion") {
  // one point of each true class is misplaced
  Partition t{{1, 1, 1, 2, 2, 2}, 2};
  Partition p{{1, 1, 2, 2, 2, 1}, 2};
  CHECK(accuracy(t, p) == doctest::Approx(4.0 / 6.0));
}

TEST_CASE("accuracy pads when cluster counts differ") {
  Partition t{{1, 1, 2, 2}, 2};
  Partition p{{1, 2, 3, 3}, 3};
  // best matching: cluster3 -> class2 (2 points), cluster1 -> class1 (1 point)
  CHECK(accuracy(t, p) == doctest::Approx(3.0 / 4.0));
}

TEST_CASE("accuracy validates inputs") {
  Partition t{{1, 2}, 2};
  Partition bad{{1, 3}, 2};
  CHECK_THROWS_AS(accuracy(t, bad), input_error);
  Partition shorter{{1}, 2};
  CHECK_THROWS_AS(accuracy(t, shorter), input_error);
}

TEST_CASE("nmi extremes") {
  Partition t{{1, 1, 2, 2}, 2};
  CHECK(nmi(t, t) == doctest::Approx(1.0));
  Partition renamed{{2, 2, 1, 1}, 2};
  CHECK(nmi(t, renamed) == doctest::Approx(1.0));
  Partition single_a{{1, 1, 1, 1}, 1};
  CHECK(nmi(single_a, single_a) == doctest::Approx(1.0));
  // independent split: each predicted cluster half from each class
  Partition indep{{1, 2, 1, 2}, 2};
  CHECK(nmi(t, indep) == doctest::Approx(0.0));
}

TEST_CASE("nmi on a hand-computed case") {
  // joint counts: [[2, 1], [0, 3]] over 6 points
  Partition t{{1, 1, 1, 2, 2, 2}, 2};
  Partition p{{1, 1, 2, 2, 2, 2}, 2};
  const double m = 6.0;
  auto h = [&](double a, double b) {
    double out = 0.0;
    if (a > 0) out -= a / m * std::log(a / m);
    if (b > 0) out -= b / m * std::log(b / m);
    return out;
  };
  double info = 0.0;
  const double joint[2][2] = {{2, 1}, {0, 3}};
  const double row[2] = {3, 3}, col[2] = {2, 4};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (joint[i][j] > 0)
        info += joint[i][j] / m *
                std::log(joint[i][j] * m / (row[i] * col[j]));
  const double expect = info / (0.5 * (h(row[0], row[1]) + h(col[0], col[1])));
  CHECK(nmi(t, p) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("nmi is symmetric") {
  std::mt19937_64 rng(91);
  std::uniform_int_distribution<int> lab(1, 4);
  for (int t = 0; t < 20; ++t) {
    Partition a, b;
    a.r = b.r = 4;
    for (int i = 0; i < 30; ++i) {
      a.labels.push_back(lab(rng));
      b.labels.push_back(lab(rng));
    }
    for (int v = 1; v <= 4; ++v) {  // ensure all labels appear
      a.labels[v - 1] = v;
      b.labels[v - 1] = v;
    }
    CHECK(nmi(a, b) == doctest::Approx(nmi(b, a)).epsilon(1e-12));
    CHECK(nmi(a, b) >= 0.0);
    CHECK(nmi(a, b) <= 1.0 + 1e-12);
  }
}
