#pragma once

#include <utility>
#include <vector>

#include "edgelq/types.hpp"

namespace edgelq {

// Directed weighted communication graph. Node 0 is the externally controlled
// reference node; nodes 1..N carry designed controls. Edge k = (tail, head)
// fixes column k of the incidence matrix and all edge-space indexing; the
// edge list is immutable after construction.
class DirectedGraph {
 public:
  // Throws std::invalid_argument on self-loops, out-of-range endpoints, or a
  // graph that is disconnected when edge directions are ignored.
  DirectedGraph(int node_count, std::vector<std::pair<int, int>> edges);

  int node_count() const { return node_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  int tail(int edge) const { return edges_.at(edge).first; }
  int head(int edge) const { return edges_.at(edge).second; }
  bool incident(int node, int edge) const {
    return tail(edge) == node || head(edge) == node;
  }

 private:
  int node_count_;
  std::vector<std::pair<int, int>> edges_;
};

// Per-agent edge weights. Agent i holds running weights mu(i, k) and terminal
// weights omega(i, k) over edges k, nonzero where agent i penalizes edge k,
// plus a control penalty r(i) > 0. Construction enforces r_i = r_j across
// every edge (i, j) between non-reference agents.
class EdgeWeights {
 public:
  // mu, omega: one row per agent 1..N (row index agent-1), m columns.
  // r: one entry per agent 1..N.
  EdgeWeights(const DirectedGraph& g, Mat mu, Mat omega, Vec r);

  int agent_count() const { return static_cast<int>(r_.size()); }
  int edge_count() const { return static_cast<int>(mu_.cols()); }
  double mu(int agent, int edge) const { return mu_(agent - 1, edge); }
  double omega(int agent, int edge) const { return omega_(agent - 1, edge); }
  double r(int agent) const { return r_(agent - 1); }

  // Diagonal m x m running / terminal weight matrix of one agent.
  Mat running_diag(int agent) const;
  Mat terminal_diag(int agent) const;

  // Per-edge reduced scalars: the edge's own diagonal entry of its weight
  // matrices, and the control penalty shared by the edge's endpoints (a
  // reference-node edge takes the non-reference endpoint's r).
  double edge_mu(const DirectedGraph& g, int edge) const;
  double edge_omega(const DirectedGraph& g, int edge) const;
  double edge_r(const DirectedGraph& g, int edge) const;

 private:
  Mat mu_;
  Mat omega_;
  Vec r_;
};

// Incidence matrix, node_count x m: column k has -1 at the tail of edge k and
// +1 at its head, so the edge state z_k = x_head - x_tail.
Mat incidence_matrix(const DirectedGraph& g);

// D diag(w) D^T for one agent's per-edge weight vector w (length m, entries
// >= 0); symmetric positive semidefinite with zero row sums.
Mat distributed_laplacian(const DirectedGraph& g, const Vec& w);

}  // namespace edgelq
