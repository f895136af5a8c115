#include "edgelq/reconstruct.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "edgelq/closed_form.hpp"
#include "edgelq/edge_system.hpp"
#include "edgelq/game.hpp"
#include "edgelq/graph.hpp"
#include "edgelq/types.hpp"

namespace edgelq {
namespace {

TEST(SpanningTree, BundledGraphStructure) {
  const DirectedGraph g(4, {{0, 1}, {1, 2}, {1, 3}});
  const SpanningTreeMap tree = spanning_tree(g);
  EXPECT_EQ(tree.parent[0], -1);
  EXPECT_EQ(tree.parent[1], 0);
  EXPECT_EQ(tree.parent[2], 1);
  EXPECT_EQ(tree.parent[3], 1);
  EXPECT_EQ(tree.via_edge[1], 0);
  EXPECT_EQ(tree.via_edge[2], 1);
  EXPECT_EQ(tree.via_edge[3], 2);
  // Every child here is the head of its connecting edge.
  EXPECT_DOUBLE_EQ(tree.sign[1], 1.0);
  EXPECT_DOUBLE_EQ(tree.sign[2], 1.0);
  EXPECT_DOUBLE_EQ(tree.sign[3], 1.0);
  ASSERT_EQ(tree.order.size(), 4u);
  EXPECT_EQ(tree.order[0], 0);
}

TEST(SpanningTree, ReversedEdgeGetsNegativeSign) {
  // Edge (1, 0): node 1 is the tail, so walking 0 -> 1 subtracts the edge
  // state.
  const DirectedGraph g(2, {{1, 0}});
  const SpanningTreeMap tree = spanning_tree(g);
  EXPECT_EQ(tree.parent[1], 0);
  EXPECT_DOUBLE_EQ(tree.sign[1], -1.0);
}

TEST(ReconstructNodes, InitialSampleMatchesTheScenario) {
  for (double tau : {0.0, 0.5}) {
    const GameSpec spec = consensus_example(tau);
    const DelayFreeSystem dfs = eliminate_delay(to_edge_system(spec));
    const ClosedFormSolution sol =
        ClosedFormSolution::build(dfs, Formulation::delay_compensated);
    const Trajectory traj =
        reconstruct_nodes(spec, edge_source(sol), 161);
    for (int node = 0; node < 4; ++node) {
      EXPECT_LT((traj.pos[node].row(0).transpose() -
                 spec.pos0.row(node).transpose())
                    .cwiseAbs()
                    .maxCoeff(),
                1e-9)
          << "tau " << tau << " node " << node;
      EXPECT_LT((traj.vel[node].row(0).transpose() -
                 spec.vel0.row(node).transpose())
                    .cwiseAbs()
                    .maxCoeff(),
                1e-9)
          << "tau " << tau << " node " << node;
    }
  }
}

TEST(ReconstructNodes, EdgeDifferencesReproduceTheEdgeStates) {
  // (I_2 kron D^T) x = z at every sample: reconstruction inverts the edge
  // reduction along the tree.
  const GameSpec spec = consensus_example(0.5);
  const DelayFreeSystem dfs = eliminate_delay(to_edge_system(spec));
  const ClosedFormSolution sol =
      ClosedFormSolution::build(dfs, Formulation::delay_compensated);
  const EdgeTrajectorySource src = edge_source(sol);
  const Trajectory traj = reconstruct_nodes(spec, src, 161);
  const int m = 3, q = 2;
  for (int k = 0; k < traj.count; k += 16) {
    const double t = traj.time(k);
    const Vec z = src.z(t);
    for (int e = 0; e < m; ++e) {
      const int tail = spec.graph.tail(e), head = spec.graph.head(e);
      for (int j = 0; j < q; ++j) {
        const double dp = traj.pos[head](k, j) - traj.pos[tail](k, j);
        const double dv = traj.vel[head](k, j) - traj.vel[tail](k, j);
        EXPECT_NEAR(dp, z(e * q + j), 1e-9);
        EXPECT_NEAR(dv, z((m + e) * q + j), 1e-9);
      }
    }
  }
}

TEST(ReconstructNodes, ControlChainsAlongTheTree) {
  // The reference node issues nothing; u_1 = xi over edge 0, u_2 = u_1 +
  // xi over edge 1, u_3 = u_1 + xi over edge 2 at issue times.
  const GameSpec spec = consensus_example(0.5);
  const DelayFreeSystem dfs = eliminate_delay(to_edge_system(spec));
  const ClosedFormSolution sol =
      ClosedFormSolution::build(dfs, Formulation::delay_compensated);
  const EdgeTrajectorySource src = edge_source(sol);
  const Trajectory traj = reconstruct_nodes(spec, src, 161);
  const int q = 2;
  const double issue_end = spec.horizon - spec.tau;
  for (int k = 0; k < traj.count; ++k) {
    const double t = traj.time(k);
    if (t > issue_end + 1e-9) {
      for (int node = 0; node < 4; ++node) {
        EXPECT_LT(traj.ctrl[node].row(k).cwiseAbs().maxCoeff(), 1e-300);
      }
      continue;
    }
    const Vec xi = src.xi(std::min(t, issue_end));
    for (int j = 0; j < q; ++j) {
      EXPECT_NEAR(traj.ctrl[0](k, j), 0.0, 1e-300);
      EXPECT_NEAR(traj.ctrl[1](k, j), xi(0 * q + j), 1e-10);
      EXPECT_NEAR(traj.ctrl[2](k, j),
                  traj.ctrl[1](k, j) + xi(1 * q + j), 1e-10);
      EXPECT_NEAR(traj.ctrl[3](k, j),
                  traj.ctrl[1](k, j) + xi(2 * q + j), 1e-10);
    }
  }
}

TEST(ReconstructNodes, LeaderSamplesAreAnalytic) {
  const GameSpec spec = consensus_example(0.5);
  const DelayFreeSystem dfs = eliminate_delay(to_edge_system(spec));
  const ClosedFormSolution sol =
      ClosedFormSolution::build(dfs, Formulation::delay_compensated);
  const Trajectory traj = reconstruct_nodes(spec, edge_source(sol), 81);
  for (int k = 0; k < traj.count; k += 20) {
    const double t = traj.time(k);
    EXPECT_LT((traj.pos[0].row(k).transpose() - spec.leader.position(t))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-14);
    EXPECT_LT((traj.vel[0].row(k).transpose() - spec.leader.velocity(t))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-14);
  }
}

// On a graph with a cycle the reconstruction uses the tree edges; the
// consistency helper reports how far the off-tree edge state drifts from
// the reconstructed endpoint difference. When every edge problem carries
// the same scalars, all edges share one transition map, so a cycle
// relation satisfied at t = 0 is preserved exactly and the residual stays
// at round-off level.
TEST(CycleConsistency, UniformTriangleStaysConsistent) {
  DirectedGraph graph(3, {{0, 1}, {1, 2}, {0, 2}});
  const Mat mu = Mat::Ones(2, 3);
  const Mat omega = Mat::Ones(2, 3);
  Vec r = Vec::Ones(2);
  EdgeWeights weights(graph, mu, omega, r);
  LeaderTrajectory leader = LeaderTrajectory::from_position_basis(
      1, {{0, LeaderTerm::Kind::poly, 0.0, 0.0}});
  Mat pos0(3, 1), vel0(3, 1);
  // z over edge (0,2) equals the sum over (0,1) and (1,2) initially.
  pos0 << 0.0, 1.0, 3.0;
  vel0 << 0.0, -1.0, 0.5;
  const GameSpec spec =
      make_game_spec(graph, weights, 1, 0.0, 6.0, pos0, vel0, leader);
  const DelayFreeSystem dfs = eliminate_delay(to_edge_system(spec));
  const ClosedFormSolution sol =
      ClosedFormSolution::build(dfs, Formulation::delay_compensated);
  const auto report = cycle_consistency(spec, edge_source(sol), 101);
  ASSERT_EQ(report.size(), 1u);
  // Breadth-first from node 0 claims edges (0,1) and (0,2) for the tree,
  // leaving edge 1 = (1,2) as the off-tree check.
  EXPECT_EQ(report[0].first, 1);
  EXPECT_LT(report[0].second, 1e-6);
}

// Heterogeneous weights break the shared transition map, so the off-tree
// residual is genuinely nonzero; the helper must see it.
TEST(CycleConsistency, HeterogeneousTriangleDrifts) {
  DirectedGraph graph(3, {{0, 1}, {1, 2}, {0, 2}});
  Mat mu(2, 3);
  mu << 2.0, 0.3, 0.3,  //
      2.0, 0.3, 0.3;
  const Mat omega = Mat::Ones(2, 3);
  Vec r = Vec::Ones(2);
  EdgeWeights weights(graph, mu, omega, r);
  LeaderTrajectory leader = LeaderTrajectory::from_position_basis(
      1, {{0, LeaderTerm::Kind::poly, 0.0, 0.0}});
  Mat pos0(3, 1), vel0(3, 1);
  pos0 << 0.0, 1.0, 3.0;
  vel0 << 0.0, -1.0, 0.5;
  const GameSpec spec =
      make_game_spec(graph, weights, 1, 0.0, 6.0, pos0, vel0, leader);
  const DelayFreeSystem dfs = eliminate_delay(to_edge_system(spec));
  const ClosedFormSolution sol =
      ClosedFormSolution::build(dfs, Formulation::delay_compensated);
  const auto report = cycle_consistency(spec, edge_source(sol), 101);
  ASSERT_EQ(report.size(), 1u);
  EXPECT_GT(report[0].second, 1e-3);
}

TEST(CycleConsistency, TreeGraphHasNothingToReport) {
  const GameSpec spec = consensus_example(0.5);
  const DelayFreeSystem dfs = eliminate_delay(to_edge_system(spec));
  const ClosedFormSolution sol =
      ClosedFormSolution::build(dfs, Formulation::delay_compensated);
  EXPECT_TRUE(cycle_consistency(spec, edge_source(sol), 51).empty());
}

}  // namespace
}  // namespace edgelq
