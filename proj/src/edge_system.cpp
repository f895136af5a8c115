#include "edgelq/edge_system.hpp"

#include <stdexcept>

#include "edgelq/matrix_ops.hpp"

namespace edgelq {

const char* formulation_name(Formulation f) {
  switch (f) {
    case Formulation::velocity_coupled:
      return "velocity_coupled";
    case Formulation::delay_compensated:
      return "delay_compensated";
  }
  return "unknown";
}

Mat EdgeSystem::q_running(int edge) const {
  Mat t2(2, 2);
  t2 << 1.0, tau, tau, tau * tau + 1.0;
  return kron(t2, w_running.at(edge));
}

Mat EdgeSystem::q_terminal(int edge) const {
  Mat t2(2, 2);
  t2 << 1.0, tau, tau, tau * tau + 1.0;
  return kron(t2, w_terminal.at(edge));
}

Vec EdgeSystem::b_hat0(int edge) const {
  const Vec& b = b_hat.at(edge);
  return b - tau * (a_hat * b);
}

Mat EdgeSystem::s_matrix(int edge, Formulation f) const {
  const Vec b = f == Formulation::delay_compensated ? b_hat0(edge)
                                                    : b_hat.at(edge);
  return b * b.transpose() / r_hat(edge);
}

EdgeSystem to_edge_system(const GameSpec& spec) {
  const auto& g = spec.graph;
  const int m = g.edge_count();
  const int q = spec.q;
  EdgeSystem es;
  es.m = m;
  es.q = q;
  es.tau = spec.tau;
  es.horizon = spec.horizon;

  Mat a2(2, 2);
  a2 << 0.0, 1.0, 0.0, 0.0;
  es.a_hat = kron(a2, Mat::Identity(m, m));

  es.b_hat.reserve(m);
  es.mu = Vec(m);
  es.omega = Vec(m);
  es.r_hat = Vec(m);
  es.w_running.reserve(m);
  es.w_terminal.reserve(m);
  for (int k = 0; k < m; ++k) {
    Vec b = Vec::Zero(2 * m);
    b(m + k) = 1.0;
    es.b_hat.push_back(std::move(b));
    es.mu(k) = spec.weights.edge_mu(g, k);
    es.omega(k) = spec.weights.edge_omega(g, k);
    es.r_hat(k) = spec.weights.edge_r(g, k);
    const int owner = g.head(k) >= 1 ? g.head(k) : g.tail(k);
    es.w_running.push_back(spec.weights.running_diag(owner));
    es.w_terminal.push_back(spec.weights.terminal_diag(owner));
  }

  // z0 = (I_2 kron D^T kron I_q) x0 with x0 = [positions; velocities].
  es.z0 = Vec(2 * m * q);
  for (int k = 0; k < m; ++k) {
    const Vec dp = (spec.pos0.row(g.head(k)) - spec.pos0.row(g.tail(k)))
                       .transpose();
    const Vec dv = (spec.vel0.row(g.head(k)) - spec.vel0.row(g.tail(k)))
                       .transpose();
    es.z0.segment(k * q, q) = dp;
    es.z0.segment((m + k) * q, q) = dv;
  }
  return es;
}

DelayFreeSystem eliminate_delay(const EdgeSystem& es) {
  if (!(es.horizon > es.tau)) {
    throw std::invalid_argument("eliminate_delay: horizon must exceed tau");
  }
  DelayFreeSystem dfs;
  dfs.edge = es;
  // y(0) = (I - tau A)(I + tau A) z0 = z0 by nilpotency; stored directly.
  dfs.y0 = es.z0;
  dfs.horizon_eff = es.horizon - es.tau;
  return dfs;
}

double costate_residual(const DelayFreeSystem& dfs, const Mat& y,
                        const Mat& psi, int edge, double step) {
  const int n = static_cast<int>(y.rows());
  if (n < 3 || psi.rows() != n) {
    throw std::invalid_argument("costate_residual: need 3+ aligned samples");
  }
  const int q = dfs.edge.q;
  const Mat iq = Mat::Identity(q, q);
  const Mat qi = kron(dfs.edge.q_running(edge), iq);
  const Mat qit = kron(dfs.edge.q_terminal(edge), iq);
  const Mat at = kron(dfs.edge.a_hat.transpose(), iq);

  double residual = 0.0;
  for (int k = 1; k + 1 < n; ++k) {
    const Vec dpsi =
        (psi.row(k + 1) - psi.row(k - 1)).transpose() / (2.0 * step);
    const Vec r = dpsi + qi * y.row(k).transpose() +
                  at * psi.row(k).transpose();
    residual = std::max(residual, r.cwiseAbs().maxCoeff());
  }
  const Vec terminal = psi.row(n - 1).transpose() -
                       qit * y.row(n - 1).transpose();
  return residual + terminal.cwiseAbs().maxCoeff();
}

}  // namespace edgelq
