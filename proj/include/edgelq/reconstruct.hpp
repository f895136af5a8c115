#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "edgelq/closed_form.hpp"
#include "edgelq/game.hpp"
#include "edgelq/trajectory.hpp"
#include "edgelq/types.hpp"

namespace edgelq {

// Spanning tree of the undirected view of the graph, rooted at the
// reference node, breadth first with ascending node index as the
// tie-break. sign(child) is +1 when the child is the head of the edge to
// its parent (so child state = parent state + edge state).
struct SpanningTreeMap {
  std::vector<int> parent;    // -1 for the root
  std::vector<int> via_edge;  // -1 for the root
  std::vector<double> sign;   // 0 for the root
  std::vector<int> order;     // traversal order, root first
};

SpanningTreeMap spanning_tree(const DirectedGraph& g);

// Edge-space trajectory source: states in original coordinates on [0, T]
// and controls in issue time on [0, T - tau]. Decouples node
// reconstruction from where the edge solution came from (closed form or
// boundary-problem baseline).
struct EdgeTrajectorySource {
  int m = 0;
  int q = 1;
  double tau = 0.0;
  double horizon = 0.0;                // T
  std::function<Vec(double)> z;        // 2mq on [0, T]
  std::function<Vec(double)> xi;       // mq on [0, T - tau]
};

EdgeTrajectorySource edge_source(const ClosedFormSolution& sol);

// Walks the spanning tree accumulating node states x_child = x_parent
// +- z_edge and issued controls u_child = u_parent +- xi_edge; the
// reference node's state is analytic and it issues no control. Controls
// are zero past the issue window [0, T - tau].
Trajectory reconstruct_nodes(const GameSpec& spec,
                             const EdgeTrajectorySource& src, int samples);

// For each edge outside the spanning tree, the largest deviation over the
// grid between the edge state and the difference of its reconstructed
// endpoints. Empty for a tree graph.
std::vector<std::pair<int, double>> cycle_consistency(
    const GameSpec& spec, const EdgeTrajectorySource& src, int samples);

}  // namespace edgelq
