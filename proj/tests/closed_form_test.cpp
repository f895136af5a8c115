#include "edgelq/closed_form.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "edgelq/edge_system.hpp"
#include "edgelq/game.hpp"
#include "edgelq/matrix_ops.hpp"
#include "edgelq/tpbvp.hpp"
#include "edgelq/types.hpp"

namespace edgelq {
namespace {

DelayFreeSystem bundled_dfs(double tau) {
  return eliminate_delay(to_edge_system(consensus_example(tau)));
}

TEST(ClosedFormSolution, SelectsTheOutsideRealPartVariant) {
  const DelayFreeSystem dfs = bundled_dfs(0.5);
  const ClosedFormSolution sol =
      ClosedFormSolution::build(dfs, Formulation::delay_compensated);
  EXPECT_EQ(sol.metadata().variant, FormulaVariant::whole_re);
  EXPECT_LT(sol.metadata().deviation_whole, 1e-9);
  EXPECT_GT(sol.metadata().deviation_factored,
            1e3 * sol.metadata().deviation_whole);
}

TEST(ClosedFormSolution, StartsFromTheInitialState) {
  for (double tau : {0.0, 0.5}) {
    for (Formulation f : {Formulation::velocity_coupled,
                          Formulation::delay_compensated}) {
      const DelayFreeSystem dfs = bundled_dfs(tau);
      const ClosedFormSolution sol = ClosedFormSolution::build(dfs, f);
      EXPECT_LT((sol.eval_y(0.0) - dfs.y0).cwiseAbs().maxCoeff(), 1e-9)
          << formulation_name(f) << " tau " << tau;
    }
  }
}

// The central equivalence: the per-edge hyperbolic formulas and the
// matrix-exponential boundary solver must produce the same trajectory.
TEST(ClosedFormSolution, MatchesTransitionFamilyEverywhere) {
  for (double tau : {0.0, 0.5}) {
    for (Formulation f : {Formulation::velocity_coupled,
                          Formulation::delay_compensated}) {
      const DelayFreeSystem dfs = bundled_dfs(tau);
      const ClosedFormSolution sol = ClosedFormSolution::build(dfs, f);
      const TransitionFamily tf = TransitionFamily::build(dfs, f);
      const Vec coeff = tf.boundary_coefficients(dfs.y0);
      const int samples = 100;
      double worst = 0.0;
      for (int k = 0; k < samples; ++k) {
        const double t = dfs.horizon_eff * k / (samples - 1);
        const Vec a = sol.eval_y(t);
        const Vec b = tf.state_at(t, coeff);
        const double denom = std::max(b.cwiseAbs().maxCoeff(), 1e-9);
        worst = std::max(worst, (a - b).cwiseAbs().maxCoeff() / denom);
      }
      EXPECT_LT(worst, 1e-6) << formulation_name(f) << " tau " << tau;

      // Controls agree as well.
      double worst_xi = 0.0;
      for (int k = 0; k < samples; ++k) {
        const double t = dfs.horizon_eff * k / (samples - 1);
        worst_xi = std::max(
            worst_xi, (sol.eval_xi(t) - tf.control_at(t, coeff))
                          .cwiseAbs()
                          .maxCoeff());
      }
      EXPECT_LT(worst_xi, 1e-6) << formulation_name(f) << " tau " << tau;
    }
  }
}

// The compensated structure is conjugate to the undelayed one: its 2x2
// boundary blocks are J_minus H0 J_plus with J_pm = [[1, +-tau], [0, 1]]
// and H0 built on the tau = 0 scalars over the same horizon.
TEST(ClosedFormSolution, CompensatedBlocksAreConjugated) {
  const double tau = 0.5;
  const DelayFreeSystem dfs = bundled_dfs(tau);
  const ClosedFormSolution sol =
      ClosedFormSolution::build(dfs, Formulation::delay_compensated);
  Mat2 j_minus, j_plus;
  j_minus << 1.0, -tau, 0.0, 1.0;
  j_plus << 1.0, tau, 0.0, 1.0;
  for (int e = 0; e < sol.edge_count(); ++e) {
    const EdgeKernel zero_kernel = EdgeKernel::build(
        dfs.edge.mu(e), dfs.edge.omega(e), dfs.edge.r_hat(e), 0.0,
        dfs.horizon_eff, FormulaVariant::whole_re);
    for (double phi : {0.7, 2.4, dfs.horizon_eff}) {
      const Mat2 lhs = sol.edge_h_block(e, phi);
      const Mat2 rhs = j_minus * zero_kernel.h_block(phi) * j_plus;
      EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(ClosedFormSolution, EdgeStateContinuousAcrossTheDelay) {
  const DelayFreeSystem dfs = bundled_dfs(0.5);
  const ClosedFormSolution sol =
      ClosedFormSolution::build(dfs, Formulation::delay_compensated);
  const double tau = 0.5;
  const Vec before = sol.eval_z(std::nextafter(tau, 0.0));
  const Vec after = sol.eval_z(tau);
  EXPECT_LT((before - after).cwiseAbs().maxCoeff(), 1e-10);
  // Before the delay has passed the edge state is the exact drift.
  const double t = 0.3;
  const Vec z = sol.eval_z(t);
  const Vec z0 = dfs.edge.z0;
  const int mq = 6;
  EXPECT_LT((z.head(mq) - z0.head(mq) - t * z0.tail(mq))
                .cwiseAbs()
                .maxCoeff(),
            1e-14);
  EXPECT_LT((z.tail(mq) - z0.tail(mq)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ClosedFormSolution, ControlIsTheVelocityRowRate) {
  // xi = d/dt of the velocity half of y, by construction of the edge
  // dynamics; finite differences must agree.
  for (Formulation f : {Formulation::velocity_coupled,
                        Formulation::delay_compensated}) {
    const DelayFreeSystem dfs = bundled_dfs(0.5);
    const ClosedFormSolution sol = ClosedFormSolution::build(dfs, f);
    const double h = 1e-6;
    const int mq = 6;
    for (double t : {0.9, 3.5, 6.1}) {
      const Vec fd =
          (sol.eval_y(t + h).tail(mq) - sol.eval_y(t - h).tail(mq)) /
          (2.0 * h);
      EXPECT_LT((sol.eval_xi(t) - fd).cwiseAbs().maxCoeff(), 1e-5)
          << formulation_name(f);
    }
  }
}

TEST(ClosedFormSolution, CostateSatisfiesItsEquations) {
  for (double tau : {0.0, 0.5}) {
    for (Formulation f : {Formulation::velocity_coupled,
                          Formulation::delay_compensated}) {
      const DelayFreeSystem dfs = bundled_dfs(tau);
      const ClosedFormSolution sol = ClosedFormSolution::build(dfs, f);
      const double step = 1e-3;
      const int rows =
          static_cast<int>(std::llround(dfs.horizon_eff / step)) + 1;
      const double h = dfs.horizon_eff / (rows - 1);
      Mat y(rows, 12);
      for (int k = 0; k < rows; ++k) {
        y.row(k) = sol.eval_y(h * k).transpose();
      }
      for (int e = 0; e < 3; ++e) {
        Mat psi(rows, 12);
        for (int k = 0; k < rows; ++k) {
          psi.row(k) = sol.eval_costate(e, h * k).transpose();
        }
        EXPECT_LT(costate_residual(dfs, y, psi, e, h), 1e-4)
            << formulation_name(f) << " tau " << tau << " edge " << e;
      }
    }
  }
}

TEST(ClosedFormSolution, CostateReproducesTheControl) {
  // The stationarity condition ties the control to the costate through
  // the input column: xi_i = -(1/r) b^T psi_i for the structure in use.
  for (Formulation f : {Formulation::velocity_coupled,
                        Formulation::delay_compensated}) {
    const DelayFreeSystem dfs = bundled_dfs(0.5);
    const ClosedFormSolution sol = ClosedFormSolution::build(dfs, f);
    const int m = 3, q = 2;
    for (double t : {0.5, 2.7, 6.9}) {
      const Vec xi = sol.eval_xi(t);
      for (int e = 0; e < m; ++e) {
        const Vec psi = sol.eval_costate(e, t);
        const Vec b = f == Formulation::delay_compensated
                          ? dfs.edge.b_hat0(e)
                          : dfs.edge.b_hat[e];
        for (int j = 0; j < q; ++j) {
          double expected = 0.0;
          for (int slot = 0; slot < 2 * m; ++slot) {
            expected -= b(slot) / dfs.edge.r_hat(e) * psi(slot * q + j);
          }
          EXPECT_NEAR(xi(e * q + j), expected, 1e-8)
              << formulation_name(f) << " t " << t;
        }
      }
    }
  }
}

TEST(ClosedFormSolution, UndelayedFormulationsCoincide) {
  const DelayFreeSystem dfs = bundled_dfs(0.0);
  const ClosedFormSolution a =
      ClosedFormSolution::build(dfs, Formulation::velocity_coupled);
  const ClosedFormSolution b =
      ClosedFormSolution::build(dfs, Formulation::delay_compensated);
  for (double t : {0.0, 1.3, 4.9, 8.0}) {
    EXPECT_LT((a.eval_y(t) - b.eval_y(t)).cwiseAbs().maxCoeff(), 1e-300);
    EXPECT_LT((a.eval_z(t) - b.eval_z(t)).cwiseAbs().maxCoeff(), 1e-300);
  }
  for (double t : {0.0, 1.3, 4.9}) {
    EXPECT_LT((a.eval_xi(t) - b.eval_xi(t)).cwiseAbs().maxCoeff(), 1e-300);
  }
}

}  // namespace
}  // namespace edgelq
