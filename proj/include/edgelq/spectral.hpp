#pragma once

#include <vector>

#include "edgelq/edge_system.hpp"
#include "edgelq/types.hpp"

namespace edgelq {

// The reduced boundary-value matrix in the q-factored 2m(m+1)-space:
// first block row (-A, S_1 ... S_m), then one block row (Q_i, A^T) per edge.
struct HamiltonianMatrix {
  Mat m;            // 2m(m+1) square
  int edge_count = 0;
  double tau = 0.0;
  Formulation formulation = Formulation::velocity_coupled;
  Vec mu, omega, r_hat;             // per-edge scalars
  std::vector<Vec> w_running_diag;  // per edge-OCP running weight diagonal

  // Delay parameter entering the per-edge quartic. The delay-compensated
  // structure is similar to the undelayed one, so its spectrum is the
  // tau = 0 quartic's.
  double spectral_tau() const {
    return formulation == Formulation::velocity_coupled ? tau : 0.0;
  }
};

// Per-edge closed-form spectrum: the principal quartic root lambda_i (the
// other three are -lambda_i and the conjugates) and the normalization
// weight varpi_i^2 = lambda^3 / (2 (mu/r - lambda^4)).
struct EdgeSpectrum {
  std::vector<Complex> lambda;
  std::vector<Complex> varpi_sq;
};

// Null-space structure and characteristic-polynomial report.
struct JordanReport {
  int null_dim = 0;        // dim N(M)
  int null_dim_sq = 0;     // dim N(M^2)
  int null_dim_cube = 0;   // dim N(M^3)
  double min_gap = 0.0;    // worst singular-value gap across the rank cuts
  bool gap_ok = false;     // every gap >= 1e3
  bool nonzero_simple = false;      // each nonzero eigenvalue has a 1-dim kernel
  double char_poly_rel_err = 0.0;   // det(M - xI) vs closed form, sampled
};

HamiltonianMatrix assemble_M(const DelayFreeSystem& dfs, Formulation f);

// Roots of lambda^4 - (mu/r)(tau^2+1) lambda^2 + mu/r per edge (principal
// branch: nonnegative real part, then positive imaginary part). Rejects
// nonpositive mu or r.
EdgeSpectrum edge_eigenvalues(const HamiltonianMatrix& h);

// Closed-form right/left eigenvectors of M for edge i at +lambda_i,
// normalized so w . v = 1. sign selects the eigenvalue branch: +1 for
// +lambda, -1 for -lambda; conj picks the conjugate pair.
struct EigenPair {
  CVec v;  // right, column
  CVec w;  // left, row (stored as a column; use w.transpose())
};
EigenPair eigenvectors(const HamiltonianMatrix& h, const EdgeSpectrum& s,
                       int edge, int sign = +1, bool conj = false);

JordanReport verify_jordan_structure(const HamiltonianMatrix& h);

// Residuals of the closed-form spectral data for one eigenvalue branch:
// quartic = |lambda^4 - k (ts^2+1) lambda^2 + k| with k = mu/r,
// right = |M v - lambda v| / |v|, left = |w^T M - lambda w^T| / |w|,
// normalization = |w . v - 1|.
struct ModeResidual {
  int edge = 0;
  Complex lambda;
  double quartic = 0.0;
  double right = 0.0;
  double left = 0.0;
  double normalization = 0.0;
};

// All four branches (+/- lambda, conjugates) for every edge.
std::vector<ModeResidual> mode_residuals(const HamiltonianMatrix& h);

}  // namespace edgelq
