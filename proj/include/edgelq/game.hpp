#pragma once

#include <vector>

#include "edgelq/graph.hpp"
#include "edgelq/trajectory.hpp"
#include "edgelq/types.hpp"

namespace edgelq {

// One basis term of one coordinate of the reference node's trajectory:
// coefficient * t^param (poly), coefficient * sin(param * t), or
// coefficient * cos(param * t). Restricting to this basis keeps position,
// velocity, and acceleration exact (no numeric differentiation anywhere).
struct LeaderTerm {
  enum class Kind { poly, sin, cos };
  int coord = 0;
  Kind kind = Kind::poly;
  double coefficient = 0.0;
  double param = 0.0;  // power for poly (nonnegative integer), else frequency
};

// Reference-node trajectory with exact derivatives. Velocity and
// acceleration terms are derived analytically from the position basis; the
// constructor cross-checks them against finite differences (tol 1e-6).
class LeaderTrajectory {
 public:
  static LeaderTrajectory from_position_basis(int q,
                                              std::vector<LeaderTerm> terms);

  int q() const { return q_; }
  Vec position(double t) const;
  Vec velocity(double t) const;
  Vec acceleration(double t) const;
  const std::vector<LeaderTerm>& position_terms() const { return pos_; }

 private:
  LeaderTrajectory(int q, std::vector<LeaderTerm> pos,
                   std::vector<LeaderTerm> vel, std::vector<LeaderTerm> acc);
  static Vec eval(int q, const std::vector<LeaderTerm>& terms, double t);

  int q_;
  std::vector<LeaderTerm> pos_, vel_, acc_;
};

// Full problem instance in node space.
struct GameSpec {
  DirectedGraph graph;
  EdgeWeights weights;
  int q = 1;
  double tau = 0.0;
  double horizon = 0.0;
  Mat pos0;  // (N+1) x q initial positions, node 0 first
  Mat vel0;  // (N+1) x q initial velocities
  LeaderTrajectory leader;

  int nodes() const { return graph.node_count(); }
  int agents() const { return graph.node_count() - 1; }
};

// Validates dimensions, horizon > tau, and that row 0 of the initial state
// matches the leader trajectory at t = 0. Throws std::invalid_argument.
GameSpec make_game_spec(DirectedGraph graph, EdgeWeights weights, int q,
                        double tau, double horizon, Mat pos0, Mat vel0,
                        LeaderTrajectory leader);

// The bundled four-node consensus scenario (q = 2, T = 8): reference node
// follows [cos t, t]; three follower agents with heterogeneous edge weights.
GameSpec consensus_example(double tau);

// Stacked node-space dynamics: A0 of size 2(N+1)q with A0^2 = 0, and one
// input matrix per node placing that node's control in its velocity block.
struct StackedDynamics {
  Mat a0;
  std::vector<Mat> b;  // per node 0..N
};
StackedDynamics stacked_dynamics(const GameSpec& spec);

// Per-agent consensus error at one stacked state
// x = [p_0; ...; p_N; v_0; ...; v_N]: for each agent i >= 1,
// sum_k mu(i,k) (|dp_k|^2 + |dv_k|^2) over edges, dp_k the position gap
// across edge k. Equals x^T (I_2 kron L_i kron I_q) x.
Vec consensus_error(const GameSpec& spec, const Vec& x);

// Stacked state at one trajectory sample.
Vec stacked_state(const Trajectory& traj, int k);

// Per-agent performance values over a sampled trajectory.
struct PerformanceReport {
  Vec total;        // J_i = terminal_i + running_i
  Vec terminal;     // weighted edge gaps at the horizon
  Vec running;      // integral of gap cost plus control effort
  double step = 0.0;
  bool trapezoid_tail = false;  // a segment had an odd interval count
};

// Composite Simpson quadrature on the trajectory grid, split at t = tau when
// the seam is grid-aligned (the plant input switches on there). The control
// effort term reads the issued control at t - tau (zero for t < tau).
PerformanceReport evaluate_performance(const GameSpec& spec,
                                       const Trajectory& traj);

}  // namespace edgelq
