#include "edgelq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/LU>

#include "edgelq/matrix_ops.hpp"

namespace edgelq {

namespace {

// All four roots of x^4 - kappa (tau^2+1) x^2 + kappa. For a complex
// biquadratic root u the set is {sqrt(u), -sqrt(u)} plus the conjugates;
// for two real biquadratic roots it is the four real square roots.
std::vector<Complex> quartic_roots(double kappa, double tau) {
  const double b = kappa * (tau * tau + 1.0);
  const double disc = b * b - 4.0 * kappa;
  const Complex root_disc = std::sqrt(Complex(disc, 0.0));
  const Complex u_plus = (Complex(b, 0.0) + root_disc) / 2.0;
  const Complex u_minus = (Complex(b, 0.0) - root_disc) / 2.0;
  const Complex l1 = std::sqrt(u_plus);
  const Complex l2 = std::sqrt(u_minus);
  return {l1, -l1, l2, -l2};
}

Complex principal_root(double kappa, double tau) {
  const double b = kappa * (tau * tau + 1.0);
  const double disc = b * b - 4.0 * kappa;
  // Pick the biquadratic root in the closed upper half plane, then the
  // square root with nonnegative real part.
  Complex u = (Complex(b, 0.0) + std::sqrt(Complex(disc, 0.0))) / 2.0;
  if (u.imag() < 0.0) u = std::conj(u);
  Complex lam = std::sqrt(u);
  if (lam.real() < 0.0) lam = -lam;
  return lam;
}

Complex varpi_sq_at(Complex lam, double kappa) {
  const Complex lam4 = lam * lam * lam * lam;
  return 0.5 * lam * lam * lam / (Complex(kappa, 0.0) - lam4);
}

}  // namespace

HamiltonianMatrix assemble_M(const DelayFreeSystem& dfs, Formulation f) {
  const EdgeSystem& es = dfs.edge;
  const int m = es.m;
  const int dim = 2 * m * (m + 1);
  HamiltonianMatrix h;
  h.m = Mat::Zero(dim, dim);
  h.edge_count = m;
  h.tau = es.tau;
  h.formulation = f;
  h.mu = es.mu;
  h.omega = es.omega;
  h.r_hat = es.r_hat;
  for (int i = 0; i < m; ++i) {
    h.w_running_diag.push_back(es.w_running[static_cast<size_t>(i)].diagonal());
  }

  // Block layout: state rows [0, 2m), costate i rows [2m(i+1), 2m(i+2)).
  h.m.block(0, 0, 2 * m, 2 * m) = -es.a_hat;
  for (int i = 0; i < m; ++i) {
    const int row = 2 * m * (i + 1);
    h.m.block(0, row, 2 * m, 2 * m) = es.s_matrix(i, f);
    h.m.block(row, 0, 2 * m, 2 * m) = es.q_running(i);
    h.m.block(row, row, 2 * m, 2 * m) = es.a_hat.transpose();
  }
  return h;
}

EdgeSpectrum edge_eigenvalues(const HamiltonianMatrix& h) {
  EdgeSpectrum s;
  const double tau_s = h.spectral_tau();
  for (int i = 0; i < h.edge_count; ++i) {
    if (h.mu(i) <= 0.0 || h.r_hat(i) <= 0.0) {
      throw std::domain_error(
          "edge_eigenvalues: edge weight ratio mu/r must be positive");
    }
    const double kappa = h.mu(i) / h.r_hat(i);
    const Complex lam = principal_root(kappa, tau_s);
    s.lambda.push_back(lam);
    s.varpi_sq.push_back(varpi_sq_at(lam, kappa));
  }
  return s;
}

EigenPair eigenvectors(const HamiltonianMatrix& h, const EdgeSpectrum& s,
                       int edge, int sign, bool conj) {
  const int m = h.edge_count;
  const int dim = 2 * m * (m + 1);
  if (edge < 0 || edge >= m) {
    throw std::out_of_range("eigenvectors: edge index out of range");
  }
  Complex lam = s.lambda[static_cast<size_t>(edge)];
  if (conj) lam = std::conj(lam);
  if (sign < 0) lam = -lam;

  const double tau_s = h.spectral_tau();
  const double kappa = h.mu(edge) / h.r_hat(edge);
  const Complex wsq = varpi_sq_at(lam, kappa);
  const Complex w1 = std::sqrt(wsq);

  // Per-edge running weights in the reduced m-space: slot k of edge-OCP i
  // carries weight w_running[i](k, k).
  // sigma = varpi e_edge; all blocks below are supported on that slot.
  const Complex inv = 1.0 / lam;
  const Complex inv2 = inv * inv;
  const double t2p1 = tau_s * tau_s + 1.0;

  CVec v = CVec::Zero(dim);
  CVec w = CVec::Zero(dim);

  // Right vector: state block (sigma; -lam sigma), costate block i is
  // ((1/lam - tau) W_i sigma; (1/lam^2 - (tau^2+1)) W_i sigma).
  v(edge) = w1;
  v(m + edge) = -lam * w1;
  // Left vector: state block (c sigma; sigma) with
  // c = mu tau / (r lam^2) + mu (tau^2+1) / (r lam) - lam; costate block i
  // is (sigma^T delta_i / lam^2, sigma^T delta_i / lam), delta_i the
  // edge-i selector scaled by 1/r.
  const Complex c = kappa * tau_s * inv2 + kappa * t2p1 * inv - lam;
  w(edge) = c * w1;
  w(m + edge) = w1;

  for (int j = 0; j < m; ++j) {
    const int row = 2 * m * (j + 1);
    // (W_j sigma) is supported on slot `edge` with weight w_running[j](edge).
    const double wje = h.w_running_diag[static_cast<size_t>(j)](edge);
    if (wje != 0.0) {
      v(row + edge) = (inv - tau_s) * wje * w1;
      v(row + m + edge) = (inv2 - t2p1) * wje * w1;
    }
    if (j == edge) {
      const double inv_r = 1.0 / h.r_hat(edge);
      w(row + edge) = inv2 * inv_r * w1;
      w(row + m + edge) = inv * inv_r * w1;
    }
  }

  if (h.formulation == Formulation::delay_compensated) {
    // The compensated matrix is a similarity transform of the undelayed
    // one: conjugate the undelayed eigenvectors by the block-diagonal map
    // diag(I - tau A, I + tau A^T, ...). In the reduced 2m-space
    // (I - tau A) x maps (p, v) to (p - tau v, v) and (I + tau A^T) psi
    // maps (pp, pv) to (pp, pv + tau pp). The left vector transforms by
    // the inverse transpose.
    const double tau = h.tau;
    for (int k = 0; k < m; ++k) {
      v(k) -= tau * v(m + k);          // state: p - tau v
      w(m + k) += tau * w(k);          // inverse transpose on the state
    }
    for (int j = 0; j < m; ++j) {
      const int row = 2 * m * (j + 1);
      for (int k = 0; k < m; ++k) {
        v(row + m + k) += tau * v(row + k);  // costate: pv + tau pp
        w(row + k) -= tau * w(row + m + k);  // inverse transpose
      }
    }
  }

  EigenPair pair;
  pair.v = v;
  pair.w = w;
  return pair;
}

JordanReport verify_jordan_structure(const HamiltonianMatrix& h) {
  JordanReport rep;
  const Mat& m = h.m;
  const int mm = h.edge_count;
  const double rel_tol = 1e-8;

  double gap1 = 0.0, gap2 = 0.0, gap3 = 0.0;
  rep.null_dim = nullspace_dimension(m, rel_tol, &gap1);
  rep.null_dim_sq = nullspace_dimension(Mat(m * m), rel_tol, &gap2);
  rep.null_dim_cube = nullspace_dimension(Mat(m * m * m), rel_tol, &gap3);
  rep.min_gap = std::min({gap1, gap2, gap3});
  rep.gap_ok = rep.min_gap >= 1e3;

  // Characteristic polynomial: det(x I - M) should equal
  // x^{2m(m-1)} prod_i (x^4 - (mu_i/r_i)(tau_s^2+1) x^2 + mu_i/r_i).
  // Note det(M - x I) = det(x I - M) since the dimension is even.
  const double tau_s = h.spectral_tau();
  const double t2p1 = tau_s * tau_s + 1.0;
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> coef(-1.5, 1.5);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const Complex x(coef(rng), coef(rng));
    CMat shifted = m.cast<Complex>();
    shifted -= x * CMat::Identity(m.rows(), m.cols());
    const Complex det = shifted.determinant();
    Complex expected = std::pow(x, 2 * mm * (mm - 1));
    for (int i = 0; i < mm; ++i) {
      const double kappa = h.mu(i) / h.r_hat(i);
      const Complex x2 = x * x;
      expected *= x2 * x2 - kappa * t2p1 * x2 + kappa;
    }
    const double denom = std::max(1.0, std::abs(expected));
    worst = std::max(worst, std::abs(det - expected) / denom);
  }
  rep.char_poly_rel_err = worst;

  // Geometric multiplicity of every nonzero eigenvalue must match its
  // algebraic multiplicity of one (repeated ratios across edges would show
  // up as a larger kernel and fail here).
  std::vector<Complex> all;
  for (int i = 0; i < mm; ++i) {
    const double kappa = h.mu(i) / h.r_hat(i);
    for (const Complex& root : quartic_roots(kappa, tau_s)) {
      all.push_back(root);
    }
  }
  bool simple = true;
  for (size_t a = 0; a < all.size(); ++a) {
    int count = 0;
    for (size_t b = 0; b < all.size(); ++b) {
      if (std::abs(all[a] - all[b]) <
          1e-9 * std::max(1.0, std::abs(all[a]))) {
        ++count;
      }
    }
    CMat shifted = m.cast<Complex>();
    shifted -= all[a] * CMat::Identity(m.rows(), m.cols());
    const int kernel = nullspace_dimension(shifted, rel_tol);
    if (kernel != count) simple = false;
    if (count != 1) simple = false;
  }
  rep.nonzero_simple = simple;
  return rep;
}

std::vector<ModeResidual> mode_residuals(const HamiltonianMatrix& h) {
  const EdgeSpectrum spectrum = edge_eigenvalues(h);
  const CMat m = h.m.cast<Complex>();
  const double ts = h.spectral_tau();
  std::vector<ModeResidual> out;
  for (int edge = 0; edge < h.edge_count; ++edge) {
    const double kappa = h.mu(edge) / h.r_hat(edge);
    for (int sign : {+1, -1}) {
      for (bool conj : {false, true}) {
        Complex lam = spectrum.lambda[static_cast<size_t>(edge)];
        if (conj) lam = std::conj(lam);
        lam *= static_cast<double>(sign);
        const EigenPair pair = eigenvectors(h, spectrum, edge, sign, conj);
        ModeResidual r;
        r.edge = edge;
        r.lambda = lam;
        r.quartic = std::abs(lam * lam * lam * lam -
                             kappa * (ts * ts + 1.0) * lam * lam + kappa);
        r.right = (m * pair.v - lam * pair.v).norm() / pair.v.norm();
        r.left = (pair.w.transpose() * m - lam * pair.w.transpose()).norm() /
                 pair.w.norm();
        r.normalization =
            std::abs(pair.w.cwiseProduct(pair.v).sum() - Complex(1.0, 0.0));
        out.push_back(r);
      }
    }
  }
  return out;
}

}  // namespace edgelq
