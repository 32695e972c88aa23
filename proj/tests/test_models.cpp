#include "doctest.h"

#include <random>

#include "elnet/models.hpp"

using namespace elnet;
using dynamics::AgentModel;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

std::mt19937_64& rng() {
  static std::mt19937_64 gen(4242);
  return gen;
}

VectorXd random_vec(int n, double range) {
  std::uniform_real_distribution<double> u(-range, range);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng());
  return v;
}

struct CatalogCase {
  const char* name;
  AgentModel model;
  double q_range;
};

std::vector<CatalogCase> catalog() {
  return {{"double_integrator", models::make_double_integrator(1.3), 5.0},
          {"pendulum", models::make_pendulum(0.8, 1.2, 9.81), 3.2},
          {"two_link", models::make_two_link(1.1, 0.6, 1.0, 0.7, 9.81), 3.2}};
}

}  // namespace

TEST_CASE("double integrator basics") {
  AgentModel m = models::make_double_integrator(1.0);
  auto [dq, dv] = dynamics::agent_rhs(m, VectorXd::Zero(1), VectorXd::Zero(1),
                                      VectorXd::Constant(1, 3.0));
  CHECK(dv(0) == 3.0);
  CHECK(dynamics::skew_defect(m, VectorXd::Zero(1), VectorXd::Ones(1),
                              VectorXd::Ones(1)) == 0.0);
  // Free motion preserves v.
  auto [dq2, dv2] = dynamics::agent_rhs(m, VectorXd::Zero(1),
                                        VectorXd::Constant(1, 0.7),
                                        VectorXd::Zero(1));
  CHECK(dv2(0) == 0.0);
}

TEST_CASE("pendulum gravity vector") {
  AgentModel m = models::make_pendulum(1.0, 1.0, 9.81);
  CHECK(m.gravity_vector(VectorXd::Zero(1))(0) == 0.0);
  CHECK(m.gravity_vector(VectorXd::Constant(1, M_PI / 2))(0) ==
        doctest::Approx(9.81).epsilon(1e-12));
}

TEST_CASE("two-link Coriolis vanishes at zero velocity") {
  AgentModel m = models::make_two_link(1.0, 1.0, 1.0, 1.0, 9.81);
  for (int trial = 0; trial < 10; ++trial) {
    MatrixXd c = m.coriolis_matrix(random_vec(2, 3.0), VectorXd::Zero(2));
    CHECK(c.isZero(0.0));
  }
}

TEST_CASE("two-link mass eigenvalues stay inside the declared bounds") {
  AgentModel m = models::make_two_link(1.3, 0.9, 1.1, 0.6, 9.81);
  for (int i = 0; i <= 100; ++i) {
    VectorXd q(2);
    q << 0.4, 2.0 * M_PI * i / 100.0;
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m.mass_matrix(q));
    CHECK(eig.eigenvalues().minCoeff() >= m.mass_eig_low);
    CHECK(eig.eigenvalues().maxCoeff() <= m.mass_eig_high);
  }
}

TEST_CASE("nonpositive parameters rejected") {
  CHECK_THROWS_AS(models::make_double_integrator(0.0), std::invalid_argument);
  CHECK_THROWS_AS(models::make_pendulum(1.0, -1.0, 9.81), std::invalid_argument);
  CHECK_THROWS_AS(models::make_two_link(1.0, 1.0, 1.0, 0.0, 9.81),
                  std::invalid_argument);
}

TEST_CASE("catalog lookup") {
  AgentModel m = models::make_from_catalog("pendulum",
                                           {{"mass", 1.0},
                                            {"length", 2.0},
                                            {"gravity", 9.81}});
  CHECK(m.mass_matrix(VectorXd::Zero(1))(0, 0) == 4.0);
  CHECK_THROWS_AS(models::make_from_catalog("no_such_model", {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(models::make_from_catalog("pendulum", {{"mass", 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      models::make_from_catalog("double_integrator",
                                {{"mass", 1.0}, {"extra", 2.0}}),
      std::invalid_argument);
}

// Generic invariant suite over the whole catalog: symmetry, eigenvalue
// bounds, gravity = grad potential, skew-symmetry defect.
TEST_CASE("catalog models satisfy the AgentModel invariants") {
  for (auto& [name, m, q_range] : catalog()) {
    CAPTURE(name);
    for (int trial = 0; trial < 1000; ++trial) {
      VectorXd q = random_vec(m.dof, q_range);
      VectorXd v = random_vec(m.dof, 2.0);
      VectorXd w = random_vec(m.dof, 1.0);
      MatrixXd mass = m.mass_matrix(q);
      REQUIRE((mass - mass.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
      Eigen::SelfAdjointEigenSolver<MatrixXd> eig(mass);
      REQUIRE(eig.eigenvalues().minCoeff() >= m.mass_eig_low);
      REQUIRE(eig.eigenvalues().maxCoeff() <= m.mass_eig_high);
      // Gravity is the gradient of the potential.
      const double h = 1e-6;
      VectorXd grav = m.gravity_vector(q);
      for (int i = 0; i < m.dof; ++i) {
        VectorXd e = VectorXd::Unit(m.dof, i);
        double fd = (m.potential(q + h * e) - m.potential(q - h * e)) / (2 * h);
        REQUIRE(std::abs(fd - grav(i)) < 1e-6 * (1.0 + std::abs(grav(i))));
      }
      REQUIRE(std::abs(dynamics::skew_defect(m, q, v, w)) <=
              1e-6 * (1.0 + w.squaredNorm()) * (1.0 + v.norm()));
    }
  }
}
