#include "edgelq/tpbvp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "edgelq/errors.hpp"
#include "edgelq/matrix_ops.hpp"

namespace edgelq {

TransitionFamily TransitionFamily::build(const DelayFreeSystem& dfs,
                                         Formulation f) {
  TransitionFamily tf;
  tf.ham_ = assemble_M(dfs, f);
  tf.horizon_ = dfs.horizon_eff;
  tf.m_ = dfs.edge.m;
  tf.q_ = dfs.edge.q;
  tf.r_hat_ = dfs.edge.r_hat;

  const int m = tf.m_;
  tf.stack_ = Mat::Zero(2 * m * (m + 1), 2 * m);
  tf.stack_.topRows(2 * m) = Mat::Identity(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    tf.stack_.middleRows(2 * m * (i + 1), 2 * m) = dfs.edge.q_terminal(i);
  }
  for (int i = 0; i < m; ++i) {
    tf.b_eff_.push_back(f == Formulation::delay_compensated
                            ? dfs.edge.b_hat0(i)
                            : dfs.edge.b_hat[static_cast<size_t>(i)]);
  }

  tf.h_t_ = tf.h_matrix(tf.horizon_);
  Eigen::JacobiSVD<Mat> svd(tf.h_t_);
  const Vec sigma = svd.singularValues();
  const double smax = sigma(0);
  const double smin = sigma(sigma.size() - 1);
  tf.condition_ = smin > 0.0 ? smax / smin
                             : std::numeric_limits<double>::infinity();
  if (tf.condition_ > 1e12) {
    throw SingularBoundaryError(
        "ill-conditioned two-point boundary problem: the boundary map at "
        "the horizon cannot be inverted reliably");
  }
  tf.lu_ = tf.h_t_.partialPivLu();
  const double det = std::abs(tf.lu_.determinant());
  if (det <= 1e-10 * std::pow(smax, 2 * m)) {
    throw SingularBoundaryError(
        "singular boundary map at the horizon: no unique terminal state");
  }
  return tf;
}

Mat TransitionFamily::h_matrix(double phi) const {
  return full_map(phi).topRows(2 * m_);
}

Mat TransitionFamily::full_map(double phi) const {
  return expm(phi * ham_.m) * stack_;
}

Mat TransitionFamily::reshape_columns(const Vec& flat) const {
  Mat cols(2 * m_, q_);
  for (int b = 0; b < 2 * m_; ++b) {
    for (int j = 0; j < q_; ++j) {
      cols(b, j) = flat(b * q_ + j);
    }
  }
  return cols;
}

Vec TransitionFamily::flatten(const Mat& cols) const {
  Vec flat(2 * m_ * q_);
  for (int b = 0; b < 2 * m_; ++b) {
    for (int j = 0; j < q_; ++j) {
      flat(b * q_ + j) = cols(b, j);
    }
  }
  return flat;
}

Vec TransitionFamily::boundary_coefficients(const Vec& y0) const {
  if (y0.size() != 2 * m_ * q_) {
    throw std::invalid_argument("boundary_coefficients: wrong y0 size");
  }
  return flatten(lu_.solve(reshape_columns(y0)));
}

Vec TransitionFamily::state_at(double t, const Vec& coeff) const {
  return flatten(h_matrix(horizon_ - t) * reshape_columns(coeff));
}

Vec TransitionFamily::costate_at(int edge, double t, const Vec& coeff) const {
  if (edge < 0 || edge >= m_) {
    throw std::out_of_range("costate_at: edge index out of range");
  }
  const Mat block =
      full_map(horizon_ - t).middleRows(2 * m_ * (edge + 1), 2 * m_);
  return flatten(block * reshape_columns(coeff));
}

Vec TransitionFamily::control_at(double t, const Vec& coeff) const {
  const Mat full = full_map(horizon_ - t);
  const Mat cols = reshape_columns(coeff);
  Vec xi(m_ * q_);
  for (int i = 0; i < m_; ++i) {
    const Mat psi = full.middleRows(2 * m_ * (i + 1), 2 * m_) * cols;
    const Vec weights = b_eff_[static_cast<size_t>(i)] / r_hat_(i);
    for (int j = 0; j < q_; ++j) {
      xi(i * q_ + j) = -weights.dot(psi.col(j));
    }
  }
  return xi;
}

Mat2 closed_inverse_block(const EdgeKernel& k) {
  const double t = k.horizon();
  Mat2 inv;
  inv << -k.eta(t), k.beta(t), k.gamma(t), -k.alpha(t);
  return inv / k.delta();
}

}  // namespace edgelq
