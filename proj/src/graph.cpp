#include "edgelq/graph.hpp"

#include <queue>
#include <stdexcept>
#include <string>

namespace edgelq {

DirectedGraph::DirectedGraph(int node_count,
                             std::vector<std::pair<int, int>> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count_ <= 0) {
    throw std::invalid_argument("graph: node_count must be positive");
  }
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const auto [t, h] = edges_[k];
    if (t < 0 || t >= node_count_ || h < 0 || h >= node_count_) {
      throw std::invalid_argument("graph: edge " + std::to_string(k) +
                                  " endpoint out of range");
    }
    if (t == h) {
      throw std::invalid_argument("graph: edge " + std::to_string(k) +
                                  " is a self-loop");
    }
  }
  // Connectivity over the undirected support.
  std::vector<std::vector<int>> adj(node_count_);
  for (const auto& [t, h] : edges_) {
    adj[t].push_back(h);
    adj[h].push_back(t);
  }
  std::vector<bool> seen(node_count_, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int reached = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int u : adj[v]) {
      if (!seen[u]) {
        seen[u] = true;
        ++reached;
        frontier.push(u);
      }
    }
  }
  if (reached != node_count_) {
    throw std::invalid_argument("graph: not connected (ignoring directions)");
  }
}

EdgeWeights::EdgeWeights(const DirectedGraph& g, Mat mu, Mat omega, Vec r)
    : mu_(std::move(mu)), omega_(std::move(omega)), r_(std::move(r)) {
  const int n_agents = g.node_count() - 1;
  const int m = g.edge_count();
  if (mu_.rows() != n_agents || mu_.cols() != m || omega_.rows() != n_agents ||
      omega_.cols() != m || r_.size() != n_agents) {
    throw std::invalid_argument("weights: shape mismatch with graph");
  }
  if ((mu_.array() < 0.0).any() || (omega_.array() < 0.0).any()) {
    throw std::invalid_argument("weights: mu and omega must be nonnegative");
  }
  if ((r_.array() <= 0.0).any()) {
    throw std::invalid_argument("weights: r must be positive");
  }
  for (int k = 0; k < m; ++k) {
    const int t = g.tail(k);
    const int h = g.head(k);
    if (t >= 1 && h >= 1 && r_(t - 1) != r_(h - 1)) {
      throw std::invalid_argument(
          "weights: r must agree across edge " + std::to_string(k) +
          " endpoints");
    }
  }
}

Mat EdgeWeights::running_diag(int agent) const {
  return Mat(mu_.row(agent - 1).asDiagonal());
}

Mat EdgeWeights::terminal_diag(int agent) const {
  return Mat(omega_.row(agent - 1).asDiagonal());
}

double EdgeWeights::edge_mu(const DirectedGraph& g, int edge) const {
  // The edge's own running weight: the diagonal entry every penalizing
  // endpoint must share. Prefer the head; a reference-node head defers to
  // the tail.
  const int owner = g.head(edge) >= 1 ? g.head(edge) : g.tail(edge);
  return mu(owner, edge);
}

double EdgeWeights::edge_omega(const DirectedGraph& g, int edge) const {
  const int owner = g.head(edge) >= 1 ? g.head(edge) : g.tail(edge);
  return omega(owner, edge);
}

double EdgeWeights::edge_r(const DirectedGraph& g, int edge) const {
  const int owner = g.head(edge) >= 1 ? g.head(edge) : g.tail(edge);
  return r(owner);
}

Mat incidence_matrix(const DirectedGraph& g) {
  Mat d = Mat::Zero(g.node_count(), g.edge_count());
  for (int k = 0; k < g.edge_count(); ++k) {
    d(g.tail(k), k) = -1.0;
    d(g.head(k), k) = 1.0;
  }
  return d;
}

Mat distributed_laplacian(const DirectedGraph& g, const Vec& w) {
  if (w.size() != g.edge_count()) {
    throw std::invalid_argument("laplacian: weight vector length mismatch");
  }
  const Mat d = incidence_matrix(g);
  return d * w.asDiagonal() * d.transpose();
}

}  // namespace edgelq
