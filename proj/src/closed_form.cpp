#include "edgelq/closed_form.hpp"

#include <cmath>
#include <stdexcept>

#include "edgelq/tpbvp.hpp"

namespace edgelq {

ClosedFormSolution ClosedFormSolution::assemble(const DelayFreeSystem& dfs,
                                                Formulation f,
                                                FormulaVariant v) {
  const EdgeSystem& es = dfs.edge;
  ClosedFormSolution sol;
  sol.m_ = es.m;
  sol.q_ = es.q;
  sol.tau_ = es.tau;
  sol.horizon_eff_ = dfs.horizon_eff;
  sol.formulation_ = f;
  sol.tau_struct_ = f == Formulation::velocity_coupled ? es.tau : 0.0;
  sol.y0_ = dfs.y0;
  sol.w_running_ = es.w_running;
  sol.w_terminal_ = es.w_terminal;
  sol.r_hat_ = es.r_hat;
  if (f == Formulation::delay_compensated) {
    sol.pre_ << 1.0, -es.tau, 0.0, 1.0;
    sol.post_ << 1.0, es.tau, 0.0, 1.0;
  }
  sol.meta_.formulation = f;
  sol.meta_.variant = v;
  for (int i = 0; i < es.m; ++i) {
    sol.kernels_.push_back(EdgeKernel::build(es.mu(i), es.omega(i),
                                             es.r_hat(i), sol.tau_struct_,
                                             dfs.horizon_eff, v));
    sol.meta_.lambda.push_back(sol.kernels_.back().lambda());
    sol.meta_.delta.push_back(sol.kernels_.back().delta());
  }
  return sol;
}

double ClosedFormSolution::oracle_deviation(const ClosedFormSolution& sol,
                                            const DelayFreeSystem& dfs,
                                            Formulation f) {
  const TransitionFamily tf = TransitionFamily::build(dfs, f);
  const int m = sol.m_;
  const double t_end = sol.horizon_eff_;
  double worst = 0.0;
  for (double phi : {0.3 * t_end, 0.7 * t_end, t_end}) {
    const Mat oracle = tf.h_matrix(phi);
    Mat assembled = Mat::Zero(2 * m, 2 * m);
    for (int i = 0; i < m; ++i) {
      const Mat2 block = sol.edge_h_block(i, phi);
      assembled(i, i) = block(0, 0);
      assembled(i, m + i) = block(0, 1);
      assembled(m + i, i) = block(1, 0);
      assembled(m + i, m + i) = block(1, 1);
    }
    const double scale = std::max(1.0, oracle.cwiseAbs().maxCoeff());
    worst = std::max(worst,
                     (assembled - oracle).cwiseAbs().maxCoeff() / scale);
  }
  return worst;
}

ClosedFormSolution ClosedFormSolution::build(const DelayFreeSystem& dfs,
                                             Formulation f) {
  ClosedFormSolution whole = assemble(dfs, f, FormulaVariant::whole_re);
  ClosedFormSolution factored = assemble(dfs, f, FormulaVariant::factored_re);
  const double dev_whole = oracle_deviation(whole, dfs, f);
  const double dev_factored = oracle_deviation(factored, dfs, f);
  ClosedFormSolution& winner =
      dev_whole <= dev_factored ? whole : factored;
  winner.meta_.deviation_whole = dev_whole;
  winner.meta_.deviation_factored = dev_factored;
  return winner;
}

ClosedFormSolution ClosedFormSolution::build_with_variant(
    const DelayFreeSystem& dfs, Formulation f, FormulaVariant v) {
  return assemble(dfs, f, v);
}

Vec2 ClosedFormSolution::slot_pair(const Vec& v, int edge, int comp) const {
  Vec2 out;
  out(0) = v(edge * q_ + comp);
  out(1) = v((m_ + edge) * q_ + comp);
  return out;
}

Mat2 ClosedFormSolution::edge_state_map(int edge, double t, int deriv) const {
  return pre_ * kernel(edge).state_map(t, deriv) * post_;
}

Mat2 ClosedFormSolution::edge_h_block(int edge, double phi) const {
  return pre_ * kernel(edge).h_block(phi) * post_;
}

Vec ClosedFormSolution::eval_y(double t) const {
  Vec y(2 * m_ * q_);
  for (int i = 0; i < m_; ++i) {
    const Mat2 map = edge_state_map(i, t);
    for (int j = 0; j < q_; ++j) {
      const Vec2 out = map * slot_pair(y0_, i, j);
      y(i * q_ + j) = out(0);
      y((m_ + i) * q_ + j) = out(1);
    }
  }
  return y;
}

Vec ClosedFormSolution::eval_xi(double t) const {
  Vec xi(m_ * q_);
  for (int i = 0; i < m_; ++i) {
    const Mat2 rate = edge_state_map(i, t, 1);
    for (int j = 0; j < q_; ++j) {
      xi(i * q_ + j) = rate.row(1).dot(slot_pair(y0_, i, j));
    }
  }
  return xi;
}

Vec ClosedFormSolution::eval_z(double t) const {
  Vec z(2 * m_ * q_);
  if (t < tau_) {
    // No input has reached the plant yet: positions drift along the
    // initial velocities.
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < q_; ++j) {
        const Vec2 zp = slot_pair(y0_, i, j);
        z(i * q_ + j) = zp(0) + t * zp(1);
        z((m_ + i) * q_ + j) = zp(1);
      }
    }
    return z;
  }
  const Vec y = eval_y(t - tau_);
  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j < q_; ++j) {
      const Vec2 yp = slot_pair(y, i, j);
      z(i * q_ + j) = yp(0) + tau_ * yp(1);
      z((m_ + i) * q_ + j) = yp(1);
    }
  }
  return z;
}

Vec ClosedFormSolution::eval_costate(int edge, double t) const {
  if (edge < 0 || edge >= m_) {
    throw std::out_of_range("eval_costate: edge index out of range");
  }
  const double ts = tau_struct_;
  const double a1 = 1.0, a2 = ts;
  const double b1 = ts, b2 = ts * ts + 1.0;
  const Mat& wi = w_running_[static_cast<size_t>(edge)];
  const Mat& wt = w_terminal_[static_cast<size_t>(edge)];
  const double s_left = horizon_eff_ - t;

  Vec psi(2 * m_ * q_);
  for (int k = 0; k < m_; ++k) {
    const EdgeKernel& ker = kernel(k);
    const double cw = wi(k, k);
    const double ct = wt(k, k);
    const Mat2 p_end = ker.state_map(horizon_eff_);
    for (int j = 0; j < q_; ++j) {
      // Kernel coordinates: the compensated path works in the shifted
      // frame, so the initial pair picks up the post factor.
      const Vec2 u0 = post_ * slot_pair(y0_, k, j);
      const Vec2 u_end = p_end * u0;
      const double psi_pos_end = ct * (a1 * u_end(0) + a2 * u_end(1));
      const double psi_vel_end = ct * (b1 * u_end(0) + b2 * u_end(1));

      const double ip = ker.p_integral(0, 0, t) * u0(0) +
                        ker.p_integral(0, 1, t) * u0(1);
      const double iv = ker.p_integral(1, 0, t) * u0(0) +
                        ker.p_integral(1, 1, t) * u0(1);
      const double iip = ker.p_integral(0, 0, t, 2) * u0(0) +
                         ker.p_integral(0, 1, t, 2) * u0(1);
      const double iiv = ker.p_integral(1, 0, t, 2) * u0(0) +
                         ker.p_integral(1, 1, t, 2) * u0(1);

      double psi_pos = psi_pos_end + cw * (a1 * ip + a2 * iv);
      double psi_vel = psi_vel_end + cw * (b1 * ip + b2 * iv) +
                       psi_pos_end * s_left + cw * (a1 * iip + a2 * iiv);
      if (formulation_ == Formulation::delay_compensated) {
        // Back to the boundary-problem frame.
        psi_vel += tau_ * psi_pos;
      }
      psi(k * q_ + j) = psi_pos;
      psi((m_ + k) * q_ + j) = psi_vel;
    }
  }
  return psi;
}

}  // namespace edgelq
