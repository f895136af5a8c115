#pragma once

#include <vector>

#include "edgelq/edge_system.hpp"
#include "edgelq/kernel.hpp"
#include "edgelq/types.hpp"

namespace edgelq {

struct SolutionMetadata {
  Formulation formulation = Formulation::velocity_coupled;
  FormulaVariant variant = FormulaVariant::whole_re;
  // Max relative deviation of each variant's assembled boundary map from
  // the matrix-exponential evaluation, over a few probe arguments; the
  // smaller one is selected.
  double deviation_whole = 0.0;
  double deviation_factored = 0.0;
  std::vector<Complex> lambda;  // per-edge principal root
  std::vector<double> delta;    // per-edge boundary normalizer
};

// Per-edge hyperbolic solution of the delay-free edge game. All state
// evaluations are exact formula evaluations; no quadrature and no costate
// enters the state or control path.
class ClosedFormSolution {
 public:
  // Builds both formula variants, compares them against the
  // matrix-exponential boundary map, and keeps the closer one.
  static ClosedFormSolution build(const DelayFreeSystem& dfs, Formulation f);
  // Skips the comparison and pins the variant; for tests.
  static ClosedFormSolution build_with_variant(const DelayFreeSystem& dfs,
                                               Formulation f,
                                               FormulaVariant v);

  const SolutionMetadata& metadata() const { return meta_; }
  int edge_count() const { return m_; }
  int q() const { return q_; }
  double tau() const { return tau_; }
  double horizon_eff() const { return horizon_eff_; }
  double horizon_full() const { return horizon_eff_ + tau_; }
  const EdgeKernel& kernel(int edge) const {
    return kernels_.at(static_cast<size_t>(edge));
  }
  const Vec& y0() const { return y0_; }

  // Delay-free state y(t) on [0, T - tau], 2mq.
  Vec eval_y(double t) const;
  // Edge controls xi(t) on [0, T - tau], mq (edge-major q blocks).
  Vec eval_xi(double t) const;
  // Original-coordinate edge state z(t) on [0, T]: a pure drift before the
  // delay has passed, the compensator-shifted delay-free state after.
  Vec eval_z(double t) const;
  // Costate of edge problem `edge` at t, 2mq; exact via the kernel's
  // iterated antiderivatives. Diagnostic only.
  Vec eval_costate(int edge, double t) const;

  // Per-edge 2x2 state map (compensator factors applied) and its time
  // derivatives: y_edge(t) = map * y_edge(0) componentwise in q.
  Mat2 edge_state_map(int edge, double t, int deriv = 0) const;
  // Per-edge 2x2 boundary block with compensator factors applied.
  Mat2 edge_h_block(int edge, double phi) const;

 private:
  ClosedFormSolution() = default;
  static ClosedFormSolution assemble(const DelayFreeSystem& dfs, Formulation f,
                                     FormulaVariant v);
  // Max relative deviation of the assembled boundary map from the
  // matrix-exponential one at a few probe arguments.
  static double oracle_deviation(const ClosedFormSolution& sol,
                                 const DelayFreeSystem& dfs, Formulation f);

  int m_ = 0;
  int q_ = 1;
  double tau_ = 0.0;
  double horizon_eff_ = 0.0;
  double tau_struct_ = 0.0;
  Formulation formulation_ = Formulation::velocity_coupled;
  std::vector<EdgeKernel> kernels_;
  Mat2 pre_ = Mat2::Identity();   // compensator factor on the left
  Mat2 post_ = Mat2::Identity();  // and on the right
  Vec y0_;                        // 2mq
  std::vector<Mat> w_running_;    // per edge-OCP m x m diagonal
  std::vector<Mat> w_terminal_;
  Vec r_hat_;
  SolutionMetadata meta_;

  // Slot (edge, component) of the 2mq layout as a position/velocity pair.
  Vec2 slot_pair(const Vec& v, int edge, int comp) const;
};

}  // namespace edgelq
