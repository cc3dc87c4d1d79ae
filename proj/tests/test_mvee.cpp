#include <doctest.h>

#include <algorithm>
#include <random>

#include "ncer/mvee.hpp"

using namespace ncer;

namespace {

Matrix random_full_rank(Index r, Index m, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix P(r, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < r; ++i) P(i, j) = g(rng);
  return P;
}

}  // namespace

TEST_CASE("cross-polytope: MVEE of the unit axis vectors is the unit ball") {
  for (Index r : {2, 3, 5}) {
    EllipsoidResult res = mvee_origin(Matrix::Identity(r, r), 1e-9);
    CHECK((res.shape - Matrix::Identity(r, r)).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(res.active.size() == static_cast<std::size_t>(r));
  }
}

TEST_CASE("axis-aligned scaling gives the diagonal shape") {
  Matrix P = Matrix::Zero(2, 2);
  P(0, 0) = 2.0;
  P(1, 1) = 1.0;
  EllipsoidResult res = mvee_origin(P, 1e-9);
  CHECK(res.shape(0, 0) == doctest::Approx(0.25).epsilon(1e-5));
  CHECK(res.shape(1, 1) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(std::abs(res.shape(0, 1)) < 1e-6);
}

TEST_CASE("containment and dual gap on random instances") {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 20; ++t) {
    const Index r = 2 + t % 4;
    const Index m = r + 5 + t;
    Matrix P = random_full_rank(r, m, rng);
    EllipsoidResult res = mvee_origin(P);
    CHECK(res.gap <= default_tols().mvee_eps);
    for (Index i = 0; i < m; ++i)
      CHECK(P.col(i).dot(res.shape * P.col(i)) <=
            1.0 + default_tols().mvee_feas);
    CHECK(res.active.size() >= static_cast<std::size_t>(r));
    CHECK(std::is_sorted(res.active.begin(), res.active.end()));
  }
}

TEST_CASE("interior points are never active") {
  std::mt19937_64 rng(7);
  Matrix V = random_full_rank(3, 4, rng);
  // append shrunk copies of the extreme points
  Matrix P(3, 8);
  P.leftCols(4) = V;
  P.rightCols(4) = 0.5 * V;
  EllipsoidResult res = mvee_origin(P, 1e-9);
  for (Index i : res.active) CHECK(i < 4);
}

TEST_CASE("only the planted vertices touch the boundary of a simplex cloud") {
  std::mt19937_64 rng(13);
  const Index r = 3, extra = 20;
  Matrix V = random_full_rank(r, r, rng);
  while (numerical_rank(V) < r) V = random_full_rank(r, r, rng);
  Matrix P(r, r + extra);
  P.leftCols(r) = V;
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (Index j = 0; j < extra; ++j) {
    Vector k(r);
    for (Index i = 0; i < r; ++i) k(i) = u(rng);
    k /= k.sum();
    k = 0.8 * k + Vector::Constant(r, 0.2 / r);  // strictly interior
    P.col(r + j) = V * k;
  }
  EllipsoidResult res = mvee_origin(P, 1e-9);
  std::vector<Index> expect{0, 1, 2};
  CHECK(res.active == expect);
}

TEST_CASE("active set is invariant under invertible maps of the points") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 10; ++t) {
    const Index r = 3, m = 12;
    Matrix P = random_full_rank(r, m, rng);
    Matrix T = random_full_rank(r, r, rng);
    while (numerical_rank(T) < r) T = random_full_rank(r, r, rng);
    EllipsoidResult a = mvee_origin(P, 1e-9);
    EllipsoidResult b = mvee_origin((T * P).eval(), 1e-9);
    CHECK(a.active == b.active);
  }
}

TEST_CASE("sign flips of individual points change nothing") {
  std::mt19937_64 rng(29);
  Matrix P = random_full_rank(3, 10, rng);
  Matrix Q = P;
  for (Index j = 0; j < 10; j += 2) Q.col(j) = -Q.col(j);
  EllipsoidResult a = mvee_origin(P, 1e-9);
  EllipsoidResult b = mvee_origin(Q, 1e-9);
  CHECK((a.shape - b.shape).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(a.active == b.active);
}

TEST_CASE("log-det optimality against a dual-feasible certificate") {
  // weak duality: for the returned u-certificate, any shape L containing the
  // points satisfies log det L <= log det L* + r log(1 + eps). Verify against
  // a batch of random feasible candidates.
  std::mt19937_64 rng(31);
  const Index r = 2, m = 9;
  Matrix P = random_full_rank(r, m, rng);
  EllipsoidResult res = mvee_origin(P, 1e-9);
  const double best = std::log(res.shape.determinant());
  std::normal_distribution<double> g;
  for (int t = 0; t < 200; ++t) {
    Matrix X(r, r);
    for (Index j = 0; j < r; ++j)
      for (Index i = 0; i < r; ++i) X(i, j) = g(rng);
    Matrix L = X * X.transpose() + 1e-3 * Matrix::Identity(r, r);
    double worst = 0.0;
    for (Index i = 0; i < m; ++i)
      worst = std::max(worst, P.col(i).dot(L * P.col(i)));
    L /= worst;  // now feasible: all points inside
    CHECK(std::log(L.determinant()) <= best + r * 1e-6 + 1e-9);
  }
}

TEST_CASE("rank-deficient point sets are rejected") {
  Matrix P(3, 4);
  P.setZero();
  P.row(0) = Vector::LinSpaced(4, 1.0, 4.0).transpose();
  P.row(1) = 2.0 * P.row(0);
  CHECK_THROWS_AS(mvee_origin(P), rank_deficient_error);
}

TEST_CASE("nonpositive eps is rejected") {
  CHECK_THROWS_AS(mvee_origin(Matrix::Identity(2, 2), 0.0), input_error);
}

TEST_CASE("active_points classification matches the definition") {
  Matrix P(2, 3);
  P << 1.0, 0.0, 0.3, 0.0, 1.0, 0.3;
  Matrix shape = Matrix::Identity(2, 2);
  std::vector<Index> a = active_points(P, shape, 1e-5);
  std::vector<Index> expect{0, 1};
  CHECK(a == expect);
}
