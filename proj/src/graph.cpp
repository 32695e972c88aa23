#include "elnet/graph.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace elnet::graph {

void validate(const NetworkGraph& g) {
  if (g.num_vertices < 1) throw std::invalid_argument("graph: num_vertices must be >= 1");
  if (g.agent_dim < 1) throw std::invalid_argument("graph: agent_dim must be >= 1");
  for (size_t k = 0; k < g.edges.size(); ++k) {
    auto [tail, head] = g.edges[k];
    if (tail < 1 || tail > g.num_vertices || head < 1 || head > g.num_vertices) {
      throw std::invalid_argument("graph: edge " + std::to_string(k + 1) +
                                  " references vertex outside 1.." +
                                  std::to_string(g.num_vertices));
    }
    if (tail == head) {
      throw std::invalid_argument("graph: edge " + std::to_string(k + 1) +
                                  " is a self-loop");
    }
  }
}

Eigen::MatrixXd build_incidence(const NetworkGraph& g) {
  validate(g);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(g.num_vertices, g.num_edges());
  for (int k = 0; k < g.num_edges(); ++k) {
    b(g.edges[k].first - 1, k) = -1.0;
    b(g.edges[k].second - 1, k) = 1.0;
  }
  return b;
}

Eigen::MatrixXd kron_lift(const Eigen::MatrixXd& a, int dim) {
  if (dim < 1) throw std::invalid_argument("kron_lift: dim must be >= 1");
  if (dim == 1) return a;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows() * dim, a.cols() * dim);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0)
        out.block(i * dim, j * dim, dim, dim) =
            a(i, j) * Eigen::MatrixXd::Identity(dim, dim);
  return out;
}

Eigen::MatrixXd laplacian(const NetworkGraph& g) {
  Eigen::MatrixXd b = build_incidence(g);
  return b * b.transpose();
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

int num_components(const NetworkGraph& g) {
  validate(g);
  UnionFind uf(g.num_vertices);
  for (const auto& [tail, head] : g.edges) uf.unite(tail - 1, head - 1);
  int count = 0;
  for (int i = 0; i < g.num_vertices; ++i)
    if (uf.find(i) == i) ++count;
  return count;
}

bool is_weakly_connected(const NetworkGraph& g) { return num_components(g) == 1; }

bool is_strongly_connected(const NetworkGraph& g) {
  validate(g);
  const int n = g.num_vertices;
  // Reachability from vertex 0 along forward and reverse edges.
  auto reach = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (const auto& [tail, head] : g.edges) {
        int from = (forward ? tail : head) - 1;
        int to = (forward ? head : tail) - 1;
        if (from == u && !seen[to]) {
          seen[to] = 1;
          stack.push_back(to);
        }
      }
    }
    for (char c : seen)
      if (!c) return false;
    return true;
  };
  return reach(true) && reach(false);
}

}  // namespace elnet::graph
