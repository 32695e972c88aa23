#include "doctest.h"

#include <random>

#include "elnet/graph.hpp"

using namespace elnet::graph;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

NetworkGraph ring6(int dim = 1) {
  return {6, dim, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 1}}};
}

int rank_of(const MatrixXd& m) {
  if (m.size() == 0) return 0;
  return Eigen::FullPivLU<MatrixXd>(m).rank();
}

}  // namespace

TEST_CASE("incidence of a single edge") {
  NetworkGraph g{2, 1, {{1, 2}}};
  MatrixXd b = build_incidence(g);
  REQUIRE(b.rows() == 2);
  REQUIRE(b.cols() == 1);
  CHECK(b(0, 0) == -1.0);
  CHECK(b(1, 0) == 1.0);
}

TEST_CASE("incidence of the 3-vertex path") {
  NetworkGraph g{3, 1, {{1, 2}, {2, 3}}};
  MatrixXd b = build_incidence(g);
  MatrixXd expected(3, 2);
  expected << -1, 0, 1, -1, 0, 1;
  CHECK(b == expected);
}

TEST_CASE("6-ring incidence: zero row sums, rank 5") {
  MatrixXd b = build_incidence(ring6());
  CHECK(b.rows() == 6);
  CHECK(b.cols() == 6);
  CHECK((b.transpose() * VectorXd::Ones(6)).isZero(0.0));
  CHECK(rank_of(b) == 5);
}

TEST_CASE("invalid edges rejected") {
  CHECK_THROWS_AS(build_incidence(NetworkGraph{3, 1, {{1, 4}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_incidence(NetworkGraph{3, 1, {{0, 2}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_incidence(NetworkGraph{3, 1, {{2, 2}}}),
                  std::invalid_argument);
}

TEST_CASE("kron_lift basics") {
  MatrixXd col(2, 1);
  col << -1, 1;
  MatrixXd lifted = kron_lift(col, 2);
  MatrixXd expected(4, 2);
  expected << -1, 0, 0, -1, 1, 0, 0, 1;
  CHECK(lifted == expected);
  CHECK(kron_lift(col, 1) == col);
}

TEST_CASE("kron_lift of the ring incidence with n=3") {
  MatrixXd lifted = kron_lift(build_incidence(ring6()), 3);
  REQUIRE(lifted.rows() == 18);
  REQUIRE(lifted.cols() == 18);
  CHECK(rank_of(lifted) == 15);
}

TEST_CASE("laplacian of a single edge") {
  MatrixXd l = laplacian(NetworkGraph{2, 1, {{1, 2}}});
  MatrixXd expected(2, 2);
  expected << 1, -1, -1, 1;
  CHECK(l == expected);
}

TEST_CASE("laplacian of the 6-ring is the circulant 2,-1") {
  MatrixXd l = laplacian(ring6());
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      int d = std::min((i - j + 6) % 6, (j - i + 6) % 6);
      double expected = d == 0 ? 2.0 : (d == 1 ? -1.0 : 0.0);
      CHECK(l(i, j) == expected);
    }
  }
  CHECK((l * VectorXd::Ones(6)).isZero(0.0));
}

TEST_CASE("disconnected graph: block Laplacian with nullity 2") {
  NetworkGraph g{4, 1, {{1, 2}, {3, 4}}};
  MatrixXd l = laplacian(g);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(l);
  int nullity = 0;
  for (int i = 0; i < 4; ++i) {
    if (std::abs(eig.eigenvalues()(i)) < 1e-12) ++nullity;
  }
  CHECK(nullity == 2);
  CHECK_FALSE(is_weakly_connected(g));
}

TEST_CASE("connectivity") {
  CHECK(is_weakly_connected(ring6()));
  CHECK(is_strongly_connected(ring6()));  // directed ring
  CHECK(is_weakly_connected(NetworkGraph{1, 1, {}}));
  NetworkGraph path{3, 1, {{1, 2}, {2, 3}}};
  CHECK(is_weakly_connected(path));
  CHECK_FALSE(is_strongly_connected(path));
}

TEST_CASE("rank(B) = N - components on random graphs") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> nv(2, 20);
    NetworkGraph g;
    g.num_vertices = nv(rng);
    g.agent_dim = 1;
    std::uniform_int_distribution<int> ne(0, 2 * g.num_vertices);
    std::uniform_int_distribution<int> vx(1, g.num_vertices);
    int edges = ne(rng);
    for (int k = 0; k < edges; ++k) {
      int a = vx(rng), b = vx(rng);
      if (a != b) g.edges.emplace_back(a, b);
    }
    MatrixXd b = build_incidence(g);
    CHECK((b.transpose() * VectorXd::Ones(g.num_vertices)).isZero(0.0));
    CHECK(rank_of(b) == g.num_vertices - num_components(g));
  }
}

TEST_CASE("lifted products match lifted laplacian") {
  NetworkGraph g = ring6(3);
  MatrixXd b = build_incidence(g);
  MatrixXd lhs = kron_lift(b, 3) * kron_lift(b.transpose(), 3);
  MatrixXd rhs = kron_lift(laplacian(g), 3);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("consensus direction is in the kernel of the lifted co-incidence") {
  NetworkGraph g = ring6(3);
  MatrixXd b_lift = kron_lift(build_incidence(g), 3);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  VectorXd x(3);
  for (int i = 0; i < 3; ++i) x(i) = nd(rng);
  VectorXd stacked(18);
  for (int i = 0; i < 6; ++i) stacked.segment(3 * i, 3) = x;
  CHECK((b_lift.transpose() * stacked).cwiseAbs().maxCoeff() < 1e-12);
}
