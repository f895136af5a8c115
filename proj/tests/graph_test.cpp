#include "edgelq/graph.hpp"

#include <stdexcept>

#include <gtest/gtest.h>

#include "edgelq/types.hpp"

namespace edgelq {
namespace {

DirectedGraph bundled_graph() {
  return DirectedGraph(4, {{0, 1}, {1, 2}, {1, 3}});
}

EdgeWeights bundled_weights(const DirectedGraph& g) {
  Mat mu(3, 3), omega(3, 3);
  mu << 1.0, 0.7, 0.5,  //
      0.0, 0.7, 0.0,    //
      0.0, 0.0, 0.5;
  omega = Mat::Ones(3, 3);
  return EdgeWeights(g, mu, omega, Vec::Ones(3));
}

TEST(DirectedGraph, RejectsMalformedInput) {
  EXPECT_THROW(DirectedGraph(3, {{0, 0}}), std::invalid_argument);
  EXPECT_THROW(DirectedGraph(3, {{0, 3}}), std::invalid_argument);
  EXPECT_THROW(DirectedGraph(3, {{-1, 1}}), std::invalid_argument);
  // 0-1 and 2-3 are two components.
  EXPECT_THROW(DirectedGraph(4, {{0, 1}, {2, 3}}),
               std::invalid_argument);
}

TEST(DirectedGraph, AcceptsConnectedGraphAndReportsIncidence) {
  const DirectedGraph g = bundled_graph();
  EXPECT_EQ(g.node_count(), 4);
  EXPECT_EQ(g.edge_count(), 3);
  EXPECT_EQ(g.tail(0), 0);
  EXPECT_EQ(g.head(0), 1);
  EXPECT_TRUE(g.incident(1, 2));
  EXPECT_FALSE(g.incident(2, 2));
}

TEST(IncidenceMatrix, BundledGraphEntries) {
  const DirectedGraph g = bundled_graph();
  const Mat d = incidence_matrix(g);
  Mat expected(4, 3);
  expected << -1.0, 0.0, 0.0,  //
      1.0, -1.0, -1.0,         //
      0.0, 1.0, 0.0,           //
      0.0, 0.0, 1.0;
  EXPECT_LT((d - expected).cwiseAbs().maxCoeff(), 1e-15);
  // Columns sum to zero: each edge has one tail and one head.
  EXPECT_LT(d.colwise().sum().cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DistributedLaplacian, AgentOneWeighting) {
  const DirectedGraph g = bundled_graph();
  const EdgeWeights w = bundled_weights(g);
  Vec mu1(3);
  mu1 << w.mu(1, 0), w.mu(1, 1), w.mu(1, 2);
  const Mat l1 = distributed_laplacian(g, mu1);
  Mat expected(4, 4);
  expected << 1.0, -1.0, 0.0, 0.0,  //
      -1.0, 2.2, -0.7, -0.5,        //
      0.0, -0.7, 0.7, 0.0,          //
      0.0, -0.5, 0.0, 0.5;
  EXPECT_LT((l1 - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DistributedLaplacian, SymmetricPsdZeroRowSums) {
  const DirectedGraph g = bundled_graph();
  Vec w(3);
  w << 0.3, 1.2, 0.8;
  const Mat l = distributed_laplacian(g, w);
  EXPECT_LT((l - l.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT(l.rowwise().sum().cwiseAbs().maxCoeff(), 1e-14);
  const Eigen::SelfAdjointEigenSolver<Mat> eig(l);
  EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-12);
}

TEST(EdgeWeights, ValidatesShapesAndSharedControlPenalty) {
  const DirectedGraph g = bundled_graph();
  EXPECT_THROW(EdgeWeights(g, Mat::Ones(2, 3), Mat::Ones(3, 3), Vec::Ones(3)),
               std::invalid_argument);
  EXPECT_THROW(EdgeWeights(g, Mat::Ones(3, 2), Mat::Ones(3, 3), Vec::Ones(3)),
               std::invalid_argument);
  // Edge (1, 2) joins agents 1 and 2, so r must agree there.
  Vec r(3);
  r << 1.0, 2.0, 1.0;
  EXPECT_THROW(EdgeWeights(g, Mat::Ones(3, 3), Mat::Ones(3, 3), r),
               std::invalid_argument);
}

TEST(EdgeWeights, PerEdgeReducedScalars) {
  const DirectedGraph g = bundled_graph();
  const EdgeWeights w = bundled_weights(g);
  // Each edge's scalars come from the non-reference endpoint that owns the
  // reduced problem: (0,1) -> agent 1, (1,2) -> agent 2, (1,3) -> agent 3.
  EXPECT_DOUBLE_EQ(w.edge_mu(g, 0), 1.0);
  EXPECT_DOUBLE_EQ(w.edge_mu(g, 1), 0.7);
  EXPECT_DOUBLE_EQ(w.edge_mu(g, 2), 0.5);
  EXPECT_DOUBLE_EQ(w.edge_omega(g, 0), 1.0);
  EXPECT_DOUBLE_EQ(w.edge_omega(g, 1), 1.0);
  EXPECT_DOUBLE_EQ(w.edge_omega(g, 2), 1.0);
  EXPECT_DOUBLE_EQ(w.edge_r(g, 0), 1.0);
  EXPECT_DOUBLE_EQ(w.edge_r(g, 1), 1.0);
  EXPECT_DOUBLE_EQ(w.edge_r(g, 2), 1.0);
}

TEST(EdgeWeights, DiagonalWeightMatrices) {
  const DirectedGraph g = bundled_graph();
  const EdgeWeights w = bundled_weights(g);
  const Mat w1 = w.running_diag(1);
  Mat expected = Mat::Zero(3, 3);
  expected(0, 0) = 1.0;
  expected(1, 1) = 0.7;
  expected(2, 2) = 0.5;
  EXPECT_LT((w1 - expected).cwiseAbs().maxCoeff(), 1e-15);
  const Mat w2 = w.running_diag(2);
  EXPECT_DOUBLE_EQ(w2(1, 1), 0.7);
  EXPECT_DOUBLE_EQ(w2(0, 0), 0.0);
  EXPECT_LT((w.terminal_diag(3) - Mat::Identity(3, 3)).cwiseAbs().maxCoeff(),
            1e-15);
}

}  // namespace
}  // namespace edgelq
