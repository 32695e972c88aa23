#include "elnet/models.hpp"

#include <cmath>
#include <stdexcept>

namespace elnet::models {

using Eigen::Matrix2d;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) {
    throw std::invalid_argument(std::string("model parameter '") + name +
                                "' must be positive");
  }
}

}  // namespace

AgentModel make_double_integrator(double mass) {
  require_positive(mass, "mass");
  AgentModel m;
  m.dof = 1;
  m.mass_matrix = [mass](const VectorXd&) {
    return MatrixXd::Constant(1, 1, mass);
  };
  m.coriolis_matrix = [](const VectorXd&, const VectorXd&) {
    return MatrixXd::Zero(1, 1);
  };
  m.gravity_vector = [](const VectorXd&) { return VectorXd::Zero(1); };
  m.potential = [](const VectorXd&) { return 0.0; };
  m.mass_eig_low = mass;
  m.mass_eig_high = mass;
  return m;
}

AgentModel make_pendulum(double mass, double length, double gravity) {
  require_positive(mass, "mass");
  require_positive(length, "length");
  require_positive(gravity, "gravity");
  AgentModel m;
  m.dof = 1;
  const double inertia = mass * length * length;
  const double mgl = mass * gravity * length;
  m.mass_matrix = [inertia](const VectorXd&) {
    return MatrixXd::Constant(1, 1, inertia);
  };
  m.coriolis_matrix = [](const VectorXd&, const VectorXd&) {
    return MatrixXd::Zero(1, 1);
  };
  m.gravity_vector = [mgl](const VectorXd& q) {
    return (VectorXd(1) << mgl * std::sin(q(0))).finished();
  };
  m.potential = [mgl](const VectorXd& q) { return mgl * (1.0 - std::cos(q(0))); };
  m.mass_eig_low = inertia;
  m.mass_eig_high = inertia;
  return m;
}

AgentModel make_two_link(double m1, double m2, double l1, double l2,
                         double gravity) {
  require_positive(m1, "m1");
  require_positive(m2, "m2");
  require_positive(l1, "l1");
  require_positive(l2, "l2");
  require_positive(gravity, "gravity");
  AgentModel m;
  m.dof = 2;
  m.mass_matrix = [=](const VectorXd& q) {
    const double c2 = std::cos(q(1));
    Matrix2d mm;
    mm(0, 0) = (m1 + m2) * l1 * l1 + m2 * l2 * l2 + 2.0 * m2 * l1 * l2 * c2;
    mm(0, 1) = m2 * l2 * l2 + m2 * l1 * l2 * c2;
    mm(1, 0) = mm(0, 1);
    mm(1, 1) = m2 * l2 * l2;
    return MatrixXd(mm);
  };
  // Christoffel-symbol Coriolis matrix of the mass matrix above.
  m.coriolis_matrix = [=](const VectorXd& q, const VectorXd& v) {
    const double h = -m2 * l1 * l2 * std::sin(q(1));
    Matrix2d c;
    c(0, 0) = h * v(1);
    c(0, 1) = h * (v(0) + v(1));
    c(1, 0) = -h * v(0);
    c(1, 1) = 0.0;
    return MatrixXd(c);
  };
  m.gravity_vector = [=](const VectorXd& q) {
    Vector2d g;
    g(0) = (m1 + m2) * gravity * l1 * std::cos(q(0)) +
           m2 * gravity * l2 * std::cos(q(0) + q(1));
    g(1) = m2 * gravity * l2 * std::cos(q(0) + q(1));
    return VectorXd(g);
  };
  m.potential = [=](const VectorXd& q) {
    // Offset so that P >= 0 over the whole joint range.
    return (m1 + m2) * gravity * l1 * (1.0 + std::sin(q(0))) +
           m2 * gravity * l2 * (1.0 + std::sin(q(0) + q(1)));
  };
  // M depends on q2 only; scan it and pad by 1%.
  double lo = std::numeric_limits<double>::max();
  double hi = 0.0;
  for (int i = 0; i <= 256; ++i) {
    VectorXd q(2);
    q << 0.0, 2.0 * M_PI * i / 256.0;
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m.mass_matrix(q));
    lo = std::min(lo, eig.eigenvalues().minCoeff());
    hi = std::max(hi, eig.eigenvalues().maxCoeff());
  }
  m.mass_eig_low = 0.99 * lo;
  m.mass_eig_high = 1.01 * hi;
  return m;
}

AgentModel make_from_catalog(const std::string& name,
                             const std::map<std::string, double>& params) {
  auto get = [&](std::initializer_list<const char*> keys) {
    if (params.size() != keys.size()) {
      throw std::invalid_argument("model '" + name +
                                  "': wrong parameter count");
    }
    std::vector<double> values;
    for (const char* key : keys) {
      auto it = params.find(key);
      if (it == params.end()) {
        throw std::invalid_argument("model '" + name +
                                    "': missing parameter '" + key + "'");
      }
      values.push_back(it->second);
    }
    return values;
  };
  if (name == "double_integrator") {
    auto p = get({"mass"});
    return make_double_integrator(p[0]);
  }
  if (name == "pendulum") {
    auto p = get({"mass", "length", "gravity"});
    return make_pendulum(p[0], p[1], p[2]);
  }
  if (name == "two_link") {
    auto p = get({"m1", "m2", "l1", "l2", "gravity"});
    return make_two_link(p[0], p[1], p[2], p[3], p[4]);
  }
  throw std::invalid_argument("unknown model '" + name + "'");
}

}  // namespace elnet::models
