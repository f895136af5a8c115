#include "edgelq/spectral.hpp"

#include <algorithm>
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "edgelq/edge_system.hpp"
#include "edgelq/game.hpp"
#include "edgelq/types.hpp"

namespace edgelq {
namespace {

GameSpec single_edge_game(double mu, double r, double tau, double horizon) {
  DirectedGraph graph(2, {{0, 1}});
  Mat mu_m(1, 1), omega_m(1, 1);
  mu_m << mu;
  omega_m << 1.0;
  Vec r_v(1);
  r_v << r;
  EdgeWeights weights(graph, mu_m, omega_m, r_v);
  LeaderTrajectory leader = LeaderTrajectory::from_position_basis(
      1, {{0, LeaderTerm::Kind::poly, 0.0, 0.0}});
  Mat pos0(2, 1), vel0(2, 1);
  pos0 << 0.0, 1.0;
  vel0 << 0.0, 0.0;
  return make_game_spec(graph, weights, 1, tau, horizon, pos0, vel0, leader);
}

DelayFreeSystem bundled_dfs(double tau) {
  return eliminate_delay(to_edge_system(consensus_example(tau)));
}

TEST(AssembleM, SingleEdgeBlockLayout) {
  const GameSpec spec = single_edge_game(0.7, 1.0, 0.5, 4.0);
  const DelayFreeSystem dfs = eliminate_delay(to_edge_system(spec));
  const HamiltonianMatrix h =
      assemble_M(dfs, Formulation::velocity_coupled);
  ASSERT_EQ(h.m.rows(), 4);
  Mat expected(4, 4);
  expected << 0.0, -1.0, 0.0, 0.0,  //
      0.0, 0.0, 0.0, 1.0,           //
      0.7, 0.35, 0.0, 0.0,          //
      0.35, 0.875, 1.0, 0.0;
  EXPECT_LT((h.m - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(AssembleM, BundledDimensionsAndScalars) {
  const DelayFreeSystem dfs = bundled_dfs(0.5);
  const HamiltonianMatrix h =
      assemble_M(dfs, Formulation::velocity_coupled);
  EXPECT_EQ(h.m.rows(), 24);
  EXPECT_EQ(h.edge_count, 3);
  Vec mu(3);
  mu << 1.0, 0.7, 0.5;
  EXPECT_LT((h.mu - mu).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_DOUBLE_EQ(h.spectral_tau(), 0.5);
  const HamiltonianMatrix hc =
      assemble_M(dfs, Formulation::delay_compensated);
  EXPECT_DOUBLE_EQ(hc.spectral_tau(), 0.0);
}

// Oracle: the closed-form quartet must coincide with the numerically
// computed nonzero eigenvalues of the assembled matrix.
void expect_spectrum_matches_numeric(const HamiltonianMatrix& h,
                                     double tol) {
  const EdgeSpectrum spectrum = edge_eigenvalues(h);
  const Eigen::EigenSolver<Mat> solver(h.m);
  std::vector<Complex> numeric;
  for (int k = 0; k < solver.eigenvalues().size(); ++k) {
    const Complex ev = solver.eigenvalues()(k);
    if (std::abs(ev) > 1e-6) numeric.push_back(ev);
  }
  ASSERT_EQ(static_cast<int>(numeric.size()), 4 * h.edge_count);
  for (int e = 0; e < h.edge_count; ++e) {
    for (int sign : {+1, -1}) {
      for (bool conj : {false, true}) {
        Complex lam = spectrum.lambda[static_cast<size_t>(e)];
        if (conj) lam = std::conj(lam);
        lam *= static_cast<double>(sign);
        double best = 1e300;
        for (const Complex& ev : numeric) {
          best = std::min(best, std::abs(ev - lam));
        }
        EXPECT_LT(best, tol) << "edge " << e;
      }
    }
  }
}

TEST(EdgeEigenvalues, MatchNumericSpectrum) {
  for (double tau : {0.0, 0.5}) {
    const DelayFreeSystem dfs = bundled_dfs(tau);
    expect_spectrum_matches_numeric(
        assemble_M(dfs, Formulation::velocity_coupled), 1e-8);
  }
}

// The compensated structure is similar to the undelayed one, so at
// positive delay its numeric spectrum must still be the tau = 0 quartet.
TEST(EdgeEigenvalues, CompensatedSpectrumIsDelayFree) {
  const DelayFreeSystem dfs = bundled_dfs(0.5);
  const HamiltonianMatrix h =
      assemble_M(dfs, Formulation::delay_compensated);
  expect_spectrum_matches_numeric(h, 1e-8);
  const DelayFreeSystem dfs0 = bundled_dfs(0.0);
  const EdgeSpectrum s_delayed = edge_eigenvalues(h);
  const EdgeSpectrum s_zero =
      edge_eigenvalues(assemble_M(dfs0, Formulation::velocity_coupled));
  for (int e = 0; e < 3; ++e) {
    EXPECT_LT(std::abs(s_delayed.lambda[e] - s_zero.lambda[e]), 1e-14);
  }
}

TEST(EdgeEigenvalues, RejectsNonpositiveWeights) {
  const GameSpec spec = single_edge_game(0.7, 1.0, 0.0, 4.0);
  DelayFreeSystem dfs = eliminate_delay(to_edge_system(spec));
  HamiltonianMatrix h = assemble_M(dfs, Formulation::velocity_coupled);
  h.mu(0) = 0.0;
  EXPECT_THROW(edge_eigenvalues(h), std::domain_error);
}

TEST(ModeResiduals, ClosedFormEigenpairsSolveTheProblem) {
  for (double tau : {0.0, 0.5}) {
    for (Formulation f : {Formulation::velocity_coupled,
                          Formulation::delay_compensated}) {
      const DelayFreeSystem dfs = bundled_dfs(tau);
      const HamiltonianMatrix h = assemble_M(dfs, f);
      for (const ModeResidual& r : mode_residuals(h)) {
        EXPECT_LT(r.quartic, 1e-9) << formulation_name(f) << " tau " << tau;
        EXPECT_LT(r.right, 1e-9) << formulation_name(f) << " tau " << tau;
        EXPECT_LT(r.left, 1e-9) << formulation_name(f) << " tau " << tau;
        EXPECT_LT(r.normalization, 1e-9)
            << formulation_name(f) << " tau " << tau;
      }
    }
  }
}

// With a long delay the biquadratic discriminant turns nonnegative and the
// quartet is real; the spectral closed forms still apply.
TEST(ModeResiduals, RealQuartetRegime) {
  const GameSpec spec = single_edge_game(1.0, 1.0, 3.0, 8.0);
  const DelayFreeSystem dfs = eliminate_delay(to_edge_system(spec));
  const HamiltonianMatrix h =
      assemble_M(dfs, Formulation::velocity_coupled);
  const EdgeSpectrum spectrum = edge_eigenvalues(h);
  EXPECT_LT(std::abs(spectrum.lambda[0].imag()), 1e-12);
  for (const ModeResidual& r : mode_residuals(h)) {
    EXPECT_LT(r.quartic, 1e-9);
    EXPECT_LT(r.right, 1e-9);
    EXPECT_LT(r.left, 1e-9);
    EXPECT_LT(r.normalization, 1e-9);
  }
}

TEST(VerifyJordanStructure, BundledNullChain) {
  for (double tau : {0.0, 0.5}) {
    for (Formulation f : {Formulation::velocity_coupled,
                          Formulation::delay_compensated}) {
      const DelayFreeSystem dfs = bundled_dfs(tau);
      const JordanReport rep = verify_jordan_structure(assemble_M(dfs, f));
      // Zero blocks pair edges: m(m-1) = 6 kernel directions, Jordan
      // chains of length two saturating at 12.
      EXPECT_EQ(rep.null_dim, 6) << formulation_name(f) << " tau " << tau;
      EXPECT_EQ(rep.null_dim_sq, 12)
          << formulation_name(f) << " tau " << tau;
      EXPECT_EQ(rep.null_dim_cube, 12)
          << formulation_name(f) << " tau " << tau;
      EXPECT_TRUE(rep.gap_ok);
      EXPECT_TRUE(rep.nonzero_simple);
      EXPECT_LT(rep.char_poly_rel_err, 1e-8);
    }
  }
}

TEST(VerifyJordanStructure, SingleEdgeHasTrivialNullspace) {
  const GameSpec spec = single_edge_game(0.7, 1.0, 0.5, 4.0);
  const DelayFreeSystem dfs = eliminate_delay(to_edge_system(spec));
  const JordanReport rep = verify_jordan_structure(
      assemble_M(dfs, Formulation::velocity_coupled));
  EXPECT_EQ(rep.null_dim, 0);
  EXPECT_EQ(rep.null_dim_sq, 0);
  EXPECT_TRUE(rep.nonzero_simple);
  EXPECT_LT(rep.char_poly_rel_err, 1e-8);
}

}  // namespace
}  // namespace edgelq
