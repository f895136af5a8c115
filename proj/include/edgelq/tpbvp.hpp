#pragma once

#include "edgelq/edge_system.hpp"
#include "edgelq/kernel.hpp"
#include "edgelq/spectral.hpp"
#include "edgelq/types.hpp"

namespace edgelq {

// Matrix-exponential solver for the two-point boundary problem behind the
// edge game: the state/costate stack evolves with the assembled matrix M,
// terminal costates are pinned to Q_T times the terminal state, and the
// boundary map H(phi) = [I 0 ...] e^{phi M} [I; Q_T stack] carries the
// terminal state to earlier times. Everything here works in the reduced
// 2m-space; the q coordinate directions decouple and are handled by
// treating the initial state as 2m x q columns.
class TransitionFamily {
 public:
  static TransitionFamily build(const DelayFreeSystem& dfs, Formulation f);

  const HamiltonianMatrix& hamiltonian() const { return ham_; }
  double horizon() const { return horizon_; }
  int edge_count() const { return m_; }
  int q() const { return q_; }

  // Boundary map H(phi), 2m x 2m.
  Mat h_matrix(double phi) const;
  // Full stack e^{phi M} [I; Q_T stack], 2m(m+1) x 2m; rows are the state
  // block followed by one costate block per edge.
  Mat full_map(double phi) const;

  // Condition number of H at the horizon (largest over smallest singular
  // value).
  double h_condition() const { return condition_; }

  // Terminal state per q-column: c = H(horizon)^{-1} y0, flattened back to
  // 2mq. Throws SingularBoundaryError when H(horizon) is singular or too
  // ill-conditioned (checked at build time as well).
  Vec boundary_coefficients(const Vec& y0) const;

  // y(t) = H(horizon - t) c and psi_i(t) from the matching costate block
  // rows, both 2mq, with c = boundary_coefficients(y0).
  Vec state_at(double t, const Vec& coeff) const;
  Vec costate_at(int edge, double t, const Vec& coeff) const;
  // Edge controls at t: for the compensated structure
  // xi_i = -(1/r_i) b0_i^T psi_i, for the plain one -(1/r_i) b_i^T psi_i.
  // Returns mq values, edge-major.
  Vec control_at(double t, const Vec& coeff) const;

 private:
  TransitionFamily() = default;

  Mat reshape_columns(const Vec& flat) const;  // 2mq -> 2m x q
  Vec flatten(const Mat& cols) const;          // 2m x q -> 2mq

  HamiltonianMatrix ham_;
  Mat stack_;  // 2m(m+1) x 2m
  std::vector<Vec> b_eff_;  // per-edge effective input column (2m)
  Vec r_hat_;
  double horizon_ = 0.0;
  int m_ = 0;
  int q_ = 1;
  double condition_ = 0.0;
  Mat h_t_;                       // H(horizon)
  Eigen::PartialPivLU<Mat> lu_;   // factorization of H(horizon)
};

// Closed-form inverse of one edge's 2x2 boundary block at the horizon,
// (1 / delta) [[-eta, beta], [gamma, -alpha]]; an independent check of the
// LU-based inversion for the diagonal structure.
Mat2 closed_inverse_block(const EdgeKernel& k);

}  // namespace edgelq
