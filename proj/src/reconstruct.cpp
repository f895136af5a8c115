#include "edgelq/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace edgelq {

SpanningTreeMap spanning_tree(const DirectedGraph& g) {
  const int n = g.node_count();
  // Undirected adjacency with edge labels, neighbors ascending.
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge)
  for (int k = 0; k < g.edge_count(); ++k) {
    adj[g.tail(k)].push_back({g.head(k), k});
    adj[g.head(k)].push_back({g.tail(k), k});
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());

  SpanningTreeMap tree;
  tree.parent.assign(n, -1);
  tree.via_edge.assign(n, -1);
  tree.sign.assign(n, 0.0);
  std::vector<bool> seen(n, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  while (!frontier.empty()) {
    const int node = frontier.front();
    frontier.pop();
    tree.order.push_back(node);
    for (const auto& [next, edge] : adj[node]) {
      if (seen[next]) continue;
      seen[next] = true;
      tree.parent[next] = node;
      tree.via_edge[next] = edge;
      tree.sign[next] = g.head(edge) == next ? 1.0 : -1.0;
      frontier.push(next);
    }
  }
  return tree;
}

EdgeTrajectorySource edge_source(const ClosedFormSolution& sol) {
  EdgeTrajectorySource src;
  src.m = sol.edge_count();
  src.q = sol.q();
  src.tau = sol.tau();
  src.horizon = sol.horizon_full();
  src.z = [sol](double t) { return sol.eval_z(t); };
  src.xi = [sol](double t) { return sol.eval_xi(t); };
  return src;
}

Trajectory reconstruct_nodes(const GameSpec& spec,
                             const EdgeTrajectorySource& src, int samples) {
  if (samples < 2) {
    throw std::invalid_argument("reconstruct_nodes: need at least 2 samples");
  }
  const int n = spec.nodes();
  const int q = spec.q;
  const double horizon = spec.horizon;
  const double step = horizon / (samples - 1);
  const double issue_end = horizon - spec.tau;
  const SpanningTreeMap tree = spanning_tree(spec.graph);

  Trajectory traj = make_trajectory(n, q, 0.0, step, samples,
                                    Trajectory::Provenance::closed_form);
  for (int k = 0; k < samples; ++k) {
    const double t = std::min(traj.time(k), horizon);
    const Vec z = src.z(t);
    const bool in_window = t <= issue_end + 1e-12;
    const double ts = std::min(t, issue_end);
    const Vec xi = in_window ? src.xi(ts) : Vec();

    traj.pos[0].row(k) = spec.leader.position(t).transpose();
    traj.vel[0].row(k) = spec.leader.velocity(t).transpose();
    // The reference node has no discretionary control; its row stays zero,
    // and every follower's row holds only the edge-control chain. The
    // known reference acceleration is a pre-loaded schedule on the plant
    // side, not part of the issued input.

    for (size_t idx = 1; idx < tree.order.size(); ++idx) {
      const int node = tree.order[idx];
      const int parent = tree.parent[node];
      const int edge = tree.via_edge[node];
      const double sign = tree.sign[node];
      for (int j = 0; j < q; ++j) {
        traj.pos[node](k, j) =
            traj.pos[parent](k, j) + sign * z(edge * q + j);
        traj.vel[node](k, j) =
            traj.vel[parent](k, j) + sign * z((src.m + edge) * q + j);
        if (in_window) {
          traj.ctrl[node](k, j) =
              traj.ctrl[parent](k, j) + sign * xi(edge * q + j);
        }
      }
    }
  }
  return traj;
}

std::vector<std::pair<int, double>> cycle_consistency(
    const GameSpec& spec, const EdgeTrajectorySource& src, int samples) {
  const Trajectory traj = reconstruct_nodes(spec, src, samples);
  const SpanningTreeMap tree = spanning_tree(spec.graph);
  std::vector<bool> in_tree(spec.graph.edge_count(), false);
  for (int node = 0; node < spec.nodes(); ++node) {
    if (tree.via_edge[node] >= 0) in_tree[tree.via_edge[node]] = true;
  }

  std::vector<std::pair<int, double>> out;
  for (int edge = 0; edge < spec.graph.edge_count(); ++edge) {
    if (in_tree[edge]) continue;
    const int tail = spec.graph.tail(edge);
    const int head = spec.graph.head(edge);
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
      const Vec z = src.z(std::min(traj.time(k), src.horizon));
      for (int j = 0; j < spec.q; ++j) {
        const double gap_p = traj.pos[head](k, j) - traj.pos[tail](k, j) -
                             z(edge * spec.q + j);
        const double gap_v = traj.vel[head](k, j) - traj.vel[tail](k, j) -
                             z((src.m + edge) * spec.q + j);
        worst = std::max({worst, std::abs(gap_p), std::abs(gap_v)});
      }
    }
    out.push_back({edge, worst});
  }
  return out;
}

}  // namespace edgelq
