#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace elnet::graph {

/// Communication graph of the network. Edges are ordered (tail, head) pairs
/// with 1-based vertex indices; undirected graphs are represented by an
/// arbitrary but fixed orientation (tail = smaller index). The edge spring
/// state flips sign with orientation, which cancels in all L = B*B^T terms.
struct NetworkGraph {
  int num_vertices = 0;                       // N
  int agent_dim = 1;                          // n, shared by all agents
  std::vector<std::pair<int, int>> edges;     // (tail, head), 1-based

  int num_edges() const { return static_cast<int>(edges.size()); }
};

/// Throws std::invalid_argument on self-loops or vertex indices outside 1..N.
void validate(const NetworkGraph& g);

/// N x M incidence matrix: entry (i,k) is -1 if vertex i is the tail of edge
/// k, +1 if the head, 0 otherwise.
Eigen::MatrixXd build_incidence(const NetworkGraph& g);

/// Kronecker product A (x) I_dim.
Eigen::MatrixXd kron_lift(const Eigen::MatrixXd& a, int dim);

/// L = B*B^T, symmetric positive semidefinite, L*1 = 0.
Eigen::MatrixXd laplacian(const NetworkGraph& g);

/// True iff the undirected version of the graph is connected. A single
/// vertex with no edges counts as connected.
bool is_weakly_connected(const NetworkGraph& g);

/// Directed connectivity: every ordered vertex pair joined by a directed path.
bool is_strongly_connected(const NetworkGraph& g);

/// Number of weakly connected components (union-find).
int num_components(const NetworkGraph& g);

}  // namespace elnet::graph
