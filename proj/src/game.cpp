#include "edgelq/game.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "edgelq/matrix_ops.hpp"

namespace edgelq {

namespace {

LeaderTerm differentiate(const LeaderTerm& term) {
  LeaderTerm d = term;
  switch (term.kind) {
    case LeaderTerm::Kind::poly:
      d.coefficient = term.coefficient * term.param;
      d.param = term.param > 0.0 ? term.param - 1.0 : 0.0;
      break;
    case LeaderTerm::Kind::sin:
      d.kind = LeaderTerm::Kind::cos;
      d.coefficient = term.coefficient * term.param;
      break;
    case LeaderTerm::Kind::cos:
      d.kind = LeaderTerm::Kind::sin;
      d.coefficient = -term.coefficient * term.param;
      break;
  }
  return d;
}

std::vector<LeaderTerm> differentiate(const std::vector<LeaderTerm>& terms) {
  std::vector<LeaderTerm> out;
  out.reserve(terms.size());
  for (const auto& t : terms) {
    LeaderTerm d = differentiate(t);
    if (d.coefficient != 0.0) out.push_back(d);
  }
  return out;
}

}  // namespace

LeaderTrajectory LeaderTrajectory::from_position_basis(
    int q, std::vector<LeaderTerm> terms) {
  for (const auto& t : terms) {
    if (t.coord < 0 || t.coord >= q) {
      throw std::invalid_argument("leader: term coordinate out of range");
    }
    if (t.kind == LeaderTerm::Kind::poly &&
        (t.param < 0.0 || t.param != std::floor(t.param))) {
      throw std::invalid_argument(
          "leader: poly powers must be nonnegative integers");
    }
  }
  std::vector<LeaderTerm> vel = differentiate(terms);
  std::vector<LeaderTerm> acc = differentiate(vel);
  return LeaderTrajectory(q, std::move(terms), std::move(vel), std::move(acc));
}

LeaderTrajectory::LeaderTrajectory(int q, std::vector<LeaderTerm> pos,
                                   std::vector<LeaderTerm> vel,
                                   std::vector<LeaderTerm> acc)
    : q_(q), pos_(std::move(pos)), vel_(std::move(vel)), acc_(std::move(acc)) {
  // Finite-difference consistency guard over a few probe times.
  const double h = 1e-5;
  for (double t : {0.0, 0.7, 2.3}) {
    const Vec dp = (eval(q_, pos_, t + h) - eval(q_, pos_, t - h)) / (2 * h);
    const Vec dv = (eval(q_, vel_, t + h) - eval(q_, vel_, t - h)) / (2 * h);
    if ((dp - eval(q_, vel_, t)).cwiseAbs().maxCoeff() > 1e-6 ||
        (dv - eval(q_, acc_, t)).cwiseAbs().maxCoeff() > 1e-6) {
      throw std::invalid_argument("leader: derivative basis inconsistent");
    }
  }
}

Vec LeaderTrajectory::eval(int q, const std::vector<LeaderTerm>& terms,
                           double t) {
  Vec out = Vec::Zero(q);
  for (const auto& term : terms) {
    double v = 0.0;
    switch (term.kind) {
      case LeaderTerm::Kind::poly:
        v = term.coefficient * std::pow(t, term.param);
        break;
      case LeaderTerm::Kind::sin:
        v = term.coefficient * std::sin(term.param * t);
        break;
      case LeaderTerm::Kind::cos:
        v = term.coefficient * std::cos(term.param * t);
        break;
    }
    out(term.coord) += v;
  }
  return out;
}

Vec LeaderTrajectory::position(double t) const { return eval(q_, pos_, t); }
Vec LeaderTrajectory::velocity(double t) const { return eval(q_, vel_, t); }
Vec LeaderTrajectory::acceleration(double t) const { return eval(q_, acc_, t); }

GameSpec make_game_spec(DirectedGraph graph, EdgeWeights weights, int q,
                        double tau, double horizon, Mat pos0, Mat vel0,
                        LeaderTrajectory leader) {
  if (q < 1 || q > 3) {
    throw std::invalid_argument("spec: q must be 1, 2, or 3");
  }
  if (tau < 0.0) {
    throw std::invalid_argument("spec: tau must be nonnegative");
  }
  if (!(horizon > tau)) {
    throw std::invalid_argument("spec: horizon must exceed tau");
  }
  const int n = graph.node_count();
  if (pos0.rows() != n || pos0.cols() != q || vel0.rows() != n ||
      vel0.cols() != q) {
    throw std::invalid_argument("spec: initial state shape mismatch");
  }
  if (leader.q() != q) {
    throw std::invalid_argument("spec: leader dimension mismatch");
  }
  if ((pos0.row(0).transpose() - leader.position(0)).cwiseAbs().maxCoeff() >
          1e-9 ||
      (vel0.row(0).transpose() - leader.velocity(0)).cwiseAbs().maxCoeff() >
          1e-9) {
    throw std::invalid_argument(
        "spec: node-0 initial state disagrees with the leader trajectory");
  }
  return GameSpec{std::move(graph), std::move(weights), q,
                  tau,              horizon,            std::move(pos0),
                  std::move(vel0),  std::move(leader)};
}

GameSpec consensus_example(double tau) {
  DirectedGraph graph(4, {{0, 1}, {1, 2}, {1, 3}});
  Mat mu(3, 3), omega(3, 3);
  mu << 1.0, 0.7, 0.5,  //
      0.0, 0.7, 0.0,    //
      0.0, 0.0, 0.5;
  omega = Mat::Ones(3, 3);
  Vec r = Vec::Ones(3);
  EdgeWeights weights(graph, mu, omega, r);

  const int q = 2;
  std::vector<LeaderTerm> basis = {
      {0, LeaderTerm::Kind::cos, 1.0, 1.0},   // cos t
      {1, LeaderTerm::Kind::poly, 1.0, 1.0},  // t
  };
  LeaderTrajectory leader = LeaderTrajectory::from_position_basis(q, basis);

  Mat pos0(4, 2), vel0(4, 2);
  pos0 << 1.0, 0.0,  //
      -1.0, 1.0,     //
      4.0, 4.0,      //
      6.0, 9.0;
  vel0 << 0.0, 1.0,  //
      0.0, 2.0,      //
      0.0, 0.0,      //
      2.0, 0.0;
  return make_game_spec(std::move(graph), std::move(weights), q, tau, 8.0,
                        std::move(pos0), std::move(vel0), std::move(leader));
}

StackedDynamics stacked_dynamics(const GameSpec& spec) {
  const int n = spec.nodes();
  const int q = spec.q;
  Mat a2(2, 2);
  a2 << 0.0, 1.0, 0.0, 0.0;
  StackedDynamics out;
  out.a0 = kron(kron(a2, Mat::Identity(n, n)), Mat::Identity(q, q));
  out.b.reserve(n);
  for (int i = 0; i < n; ++i) {
    Mat sel = Mat::Zero(2 * n, 1);
    sel(n + i, 0) = 1.0;
    out.b.push_back(kron(sel, Mat::Identity(q, q)));
  }
  return out;
}

Vec consensus_error(const GameSpec& spec, const Vec& x) {
  const int n = spec.nodes();
  const int q = spec.q;
  if (x.size() != 2 * n * q) {
    throw std::invalid_argument("consensus_error: state dimension mismatch");
  }
  const auto& g = spec.graph;
  Vec errors = Vec::Zero(spec.agents());
  for (int agent = 1; agent <= spec.agents(); ++agent) {
    double total = 0.0;
    for (int k = 0; k < g.edge_count(); ++k) {
      const double w = spec.weights.mu(agent, k);
      if (w == 0.0) continue;
      const Vec dp = x.segment(g.head(k) * q, q) - x.segment(g.tail(k) * q, q);
      const Vec dv = x.segment((n + g.head(k)) * q, q) -
                     x.segment((n + g.tail(k)) * q, q);
      total += w * (dp.squaredNorm() + dv.squaredNorm());
    }
    errors(agent - 1) = total;
  }
  return errors;
}

Vec stacked_state(const Trajectory& traj, int k) {
  const int n = traj.nodes();
  const int q = static_cast<int>(traj.pos[0].cols());
  Vec x(2 * n * q);
  for (int i = 0; i < n; ++i) {
    x.segment(i * q, q) = traj.pos[i].row(k).transpose();
    x.segment((n + i) * q, q) = traj.vel[i].row(k).transpose();
  }
  return x;
}

namespace {

// Composite Simpson over samples [lo, hi] of f (values on a uniform grid of
// width h). Odd interval counts get a trapezoid on the final interval.
double simpson(const Vec& f, int lo, int hi, double h, bool* trapezoid_tail) {
  const int intervals = hi - lo;
  if (intervals <= 0) return 0.0;
  double total = 0.0;
  int even_end = hi;
  if (intervals % 2 != 0) {
    even_end = hi - 1;
    total += 0.5 * h * (f(even_end) + f(hi));
    if (trapezoid_tail != nullptr) *trapezoid_tail = true;
  }
  for (int k = lo; k < even_end; k += 2) {
    total += h / 3.0 * (f(k) + 4.0 * f(k + 1) + f(k + 2));
  }
  return total;
}

}  // namespace

PerformanceReport evaluate_performance(const GameSpec& spec,
                                       const Trajectory& traj) {
  const int n_agents = spec.agents();
  const auto& g = spec.graph;
  if (traj.nodes() != spec.nodes()) {
    throw std::invalid_argument("evaluate_performance: node count mismatch");
  }
  if (traj.count < 3) {
    throw std::invalid_argument("evaluate_performance: too few samples");
  }
  const double end_time = traj.time(traj.count - 1);
  if (traj.t0 > 1e-12 || end_time < spec.horizon - 1e-9) {
    throw std::invalid_argument(
        "evaluate_performance: trajectory does not cover the horizon");
  }

  PerformanceReport report;
  report.step = traj.step;
  report.total = Vec::Zero(n_agents);
  report.terminal = Vec::Zero(n_agents);
  report.running = Vec::Zero(n_agents);

  // Terminal gap cost at the horizon.
  const int last = traj.count - 1;
  for (int agent = 1; agent <= n_agents; ++agent) {
    double c = 0.0;
    for (int k = 0; k < g.edge_count(); ++k) {
      const double w = spec.weights.omega(agent, k);
      if (w == 0.0) continue;
      const Vec dp =
          (traj.pos[g.head(k)].row(last) - traj.pos[g.tail(k)].row(last))
              .transpose();
      const Vec dv =
          (traj.vel[g.head(k)].row(last) - traj.vel[g.tail(k)].row(last))
              .transpose();
      c += w * (dp.squaredNorm() + dv.squaredNorm());
    }
    report.terminal(agent - 1) = c;
  }

  // Running integrand samples per agent, gap cost and control effort kept
  // apart: the effort term jumps at t = tau (the plant input switches on),
  // so the seam sample belongs to the left segment with its left limit.
  Mat gap_cost(traj.count, n_agents);
  Mat effort(traj.count, n_agents);
  for (int k = 0; k < traj.count; ++k) {
    const double t = traj.time(k);
    for (int agent = 1; agent <= n_agents; ++agent) {
      double gap = 0.0;
      for (int e = 0; e < g.edge_count(); ++e) {
        const double w = spec.weights.mu(agent, e);
        if (w == 0.0) continue;
        const Vec dp =
            (traj.pos[g.head(e)].row(k) - traj.pos[g.tail(e)].row(k))
                .transpose();
        const Vec dv =
            (traj.vel[g.head(e)].row(k) - traj.vel[g.tail(e)].row(k))
                .transpose();
        gap += w * (dp.squaredNorm() + dv.squaredNorm());
      }
      gap_cost(k, agent - 1) = gap;
      double eff = 0.0;
      if (t >= spec.tau - 1e-12) {
        const Vec u = traj.control_at(agent, t - spec.tau);
        eff = spec.weights.r(agent) * u.squaredNorm();
      }
      effort(k, agent - 1) = eff;
    }
  }

  // Split the quadrature at the seam where the plant input switches on.
  const double seam = spec.tau / traj.step;
  const int seam_index = static_cast<int>(std::llround(seam));
  const bool aligned = spec.tau > 0.0 && std::abs(seam - seam_index) < 1e-9 &&
                       seam_index > 0 && seam_index < traj.count - 1;
  for (int agent = 0; agent < n_agents; ++agent) {
    const Vec full = gap_cost.col(agent) + effort.col(agent);
    double run = 0.0;
    if (aligned) {
      run += simpson(gap_cost.col(agent), 0, seam_index, traj.step,
                     &report.trapezoid_tail);
      run += simpson(full, seam_index, traj.count - 1, traj.step,
                     &report.trapezoid_tail);
    } else {
      run += simpson(full, 0, traj.count - 1, traj.step,
                     &report.trapezoid_tail);
    }
    report.running(agent) = run;
    report.total(agent) = report.terminal(agent) + run;
  }
  return report;
}

}  // namespace edgelq
