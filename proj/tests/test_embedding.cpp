#include <doctest.h>

#include <random>

#include "ncer/embedding.hpp"
#include "ncer/synth.hpp"

using namespace ncer;

namespace {

SimilarityConfig full_kernel(Index m) {
  SimilarityConfig s;
  s.kernel_offset = 0.0;
  s.kernel_degree = 1;
  s.neighbor_number = m;
  return s;
}

}  // namespace

TEST_CASE("eigenspace_dimension counts the smallest block") {
  Vector v(4);
  v << 0.0, 1e-10, 0.5, 0.7;
  CHECK(eigenspace_dimension(v, 1e-8) == 2);
  v << 0.0, 1e-6, 0.5, 0.7;
  CHECK(eigenspace_dimension(v, 1e-8) == 1);
  Vector one(1);
  one << 3.0;
  CHECK(eigenspace_dimension(one, 1e-8) == 1);
}

TEST_CASE("align_first_eigenvector puts D^{1/2}e first and keeps orthonormality") {
  // eigenspace = span{e1, e2} in R^3, degrees arbitrary positive
  Matrix V(3, 2);
  V << 1, 0, 0, 1, 0, 0;
  Vector d(3);
  d << 4, 1, 0;  // D^{1/2} e = (2,1,0), inside span{e1,e2}
  d(2) = 1e-30;  // numerically zero third coordinate keeps target in span
  auto [aligned, tau] = align_first_eigenvector(V, d, 1e-6);
  Vector target = d.cwiseSqrt();
  target.normalize();
  CHECK((aligned.col(0) - target).norm() < 1e-10);
  CHECK((aligned.transpose() * aligned - Matrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK(tau == doctest::Approx(1.0 / d.cwiseSqrt().norm()));
  // the rotated basis spans the same subspace
  CHECK((aligned - V * (V.transpose() * aligned)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("align_first_eigenvector rejects a target outside the span") {
  Matrix V(3, 1);
  V << 1, 0, 0;
  Vector d(3);
  d << 1, 1, 1;
  CHECK_THROWS_AS(align_first_eigenvector(V, d, 1e-6), numerical_error);
}

TEST_CASE("spectral_embed basic contracts on random data") {
  PlantedSpec spec;
  spec.dim = 4;
  spec.clusters = 3;
  spec.per_cluster = 8;
  PlantedInstance inst = make_planted_clusters(spec, 7);
  const Index m = inst.data.cols();
  SimilarityGraph g = build_graph(inst.data, full_kernel(m));
  SpectralEmbedding emb = spectral_embed(g, 3);

  CHECK(emb.points.rows() == 3);
  CHECK(emb.points.cols() == m);
  // every point lies on the hyperplane e_1^T x = tau
  CHECK(emb.tau > 0);
  CHECK(emb.tau == doctest::Approx(1.0 / g.degrees.cwiseSqrt().norm()));
  for (Index i = 0; i < m; ++i)
    CHECK(std::abs(emb.points(0, i) - emb.tau) < 1e-12);
  // eigenvalues of the normalized Laplacian: ascending, in [0, 2]
  for (Index i = 1; i < 3; ++i)
    CHECK(emb.eigenvalues(i) >= emb.eigenvalues(i - 1) - 1e-12);
  CHECK(emb.eigenvalues(0) > -1e-9);
  CHECK(std::abs(emb.eigenvalues(0)) < 1e-9);  // connected graph
  CHECK(emb.eigenvalues(2) <= 2.0 + 1e-9);
  // P D P^T = V_r^T V_r = I
  Matrix gram =
      emb.points * g.degrees.asDiagonal() * emb.points.transpose();
  CHECK((gram - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("spectral_embed handles a degenerate smallest eigenspace") {
  // two orthogonal groups with b = 0 give a disconnected graph:
  // eigenvalue 0 has multiplicity 2
  Matrix A = Matrix::Zero(4, 6);
  A(0, 0) = 1.0; A(1, 0) = 0.2;
  A(0, 1) = 0.9; A(1, 1) = 0.3;
  A(0, 2) = 1.1; A(1, 2) = 0.1;
  A(2, 3) = 1.0; A(3, 3) = 0.2;
  A(2, 4) = 0.8; A(3, 4) = 0.4;
  A(2, 5) = 1.2; A(3, 5) = 0.1;
  SimilarityGraph g = build_graph(A, full_kernel(6));
  SymEigen e = sym_eigen(normalized_laplacian(g), 6);
  REQUIRE(eigenspace_dimension(e.values) == 2);

  SpectralEmbedding emb = spectral_embed(g, 2);
  for (Index i = 0; i < 6; ++i)
    CHECK(std::abs(emb.points(0, i) - emb.tau) < 1e-12);
  CHECK(std::abs(emb.eigenvalues(1)) < 1e-9);
  Matrix gram =
      emb.points * g.degrees.asDiagonal() * emb.points.transpose();
  CHECK((gram - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-9);
  // second coordinate separates the components
  for (Index i = 0; i < 3; ++i)
    for (Index j = 3; j < 6; ++j)
      CHECK(emb.points(1, i) * emb.points(1, j) < 0);
}

TEST_CASE("spectral_embed validates r") {
  Matrix A(2, 3);
  A << 1, 2, 3, 4, 5, 6;
  SimilarityGraph g = build_graph(A, full_kernel(3));
  CHECK_THROWS_AS(spectral_embed(g, 1), input_error);
  CHECK_THROWS_AS(spectral_embed(g, 4), input_error);
}

TEST_CASE("spectral_embed is deterministic") {
  PlantedSpec spec;
  PlantedInstance inst = make_planted_clusters(spec, 19);
  SimilarityGraph g = build_graph(inst.data, full_kernel(inst.data.cols()));
  SpectralEmbedding a = spectral_embed(g, 3);
  SpectralEmbedding b = spectral_embed(g, 3);
  CHECK((a.points - b.points).cwiseAbs().maxCoeff() == 0.0);
}
