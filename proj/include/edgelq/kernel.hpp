#pragma once

#include <vector>

#include "edgelq/types.hpp"

namespace edgelq {

// Two ways of turning the complex mode coefficients into real scalars:
//   whole_re     take the real part of the full complex combination once,
//                on the outside.
//   factored_re  distribute the real part over each factor (normalization,
//                coefficient, hyperbolic term) before multiplying.
// Both are built and compared against the exponential-of-M oracle when a
// solution is assembled; the closer one is selected and the deviations are
// recorded. They agree only when the cross terms of the imaginary parts
// vanish, so the selection is expected to be one-sided.
enum class FormulaVariant { whole_re, factored_re };

const char* formula_variant_name(FormulaVariant v);

// A finite family 4 Re(cs sinh(phi lambda) + cc cosh(phi lambda)
//                      + sum_k poly[k] phi^k).
// Closed under differentiation and antidifferentiation, which is what makes
// the costate integrals exact rather than quadrature-based.
struct ScalarMode {
  Complex lambda{0.0, 0.0};
  Complex cs{0.0, 0.0};
  Complex cc{0.0, 0.0};
  std::vector<Complex> poly;

  // Throws on |phi lambda| > 300, where cosh overflows double range.
  double eval(double phi) const;
  ScalarMode derivative() const;
  // The antiderivative F with F(0) = 0.
  ScalarMode antiderivative() const;
};

enum class KernelScalar { alpha, beta, gamma, eta };

// Hyperbolic closed form for one scalar edge problem with weight ratio
// kappa = mu / r_hat, terminal weight omega, and structural delay tau. The
// four base scalars are the entries of the 2x2 boundary map
// H(phi) = [[alpha, beta], [gamma, eta]]; gamma and eta are the negated
// phi-derivatives of alpha and beta, so the state map below has an exact
// position-row/velocity-row derivative relation.
class EdgeKernel {
 public:
  // Throws std::domain_error when the characteristic quartet is not a
  // complex conjugate set of four distinct roots (the hyperbolic form
  // needs it) and std::invalid_argument on nonpositive mu, r, or horizon.
  static EdgeKernel build(double mu, double omega, double r_hat,
                          double tau_struct, double horizon,
                          FormulaVariant variant);

  double mu() const { return mu_; }
  double omega() const { return omega_; }
  double r_hat() const { return r_hat_; }
  double tau_struct() const { return tau_; }
  double horizon() const { return horizon_; }
  FormulaVariant variant() const { return variant_; }
  Complex lambda() const { return lambda_; }
  Complex varpi_sq() const { return varpi_sq_; }

  // Normalizer beta(T) gamma(T) - alpha(T) eta(T) at the horizon. The
  // boundary problem is singular when it vanishes.
  double delta() const { return delta_; }

  double scalar(KernelScalar which, double phi, int deriv = 0) const;
  double alpha(double phi) const { return scalar(KernelScalar::alpha, phi); }
  double beta(double phi) const { return scalar(KernelScalar::beta, phi); }
  double gamma(double phi) const { return scalar(KernelScalar::gamma, phi); }
  double eta(double phi) const { return scalar(KernelScalar::eta, phi); }

  // The 2x2 boundary map [[alpha, beta], [gamma, eta]] at phi.
  Mat2 h_block(double phi) const;

  // The 2x2 state map P with u(t) = P(t) u(0) on [0, horizon], or its
  // deriv-th time derivative. P(0) = I and the top row of dP/dt equals the
  // bottom row of P.
  Mat2 state_map(double t, int deriv = 0) const;

  // Iterated integral of the state-map entry (row, col) from t up to the
  // horizon; depth 2 gives int_t^T int_u^T. Used by the exact costate
  // reconstruction.
  double p_integral(int row, int col, double t, int depth = 1) const;

 private:
  EdgeKernel() = default;

  double mu_ = 0.0, omega_ = 0.0, r_hat_ = 1.0, tau_ = 0.0, horizon_ = 0.0;
  FormulaVariant variant_ = FormulaVariant::whole_re;
  Complex lambda_{0.0, 0.0};
  Complex varpi_sq_{0.0, 0.0};
  double delta_ = 0.0;
  ScalarMode base_[4];       // alpha, beta, gamma, eta as functions of phi
  ScalarMode q_mode_[2][2];  // state-map numerators as functions of
                             // s = horizon - t
  ScalarMode q_int_[2][2][2];  // single and double antiderivatives
};

// Independent four-term exponential-sum evaluation of the same scalars:
// sum over the characteristic quartet nu of e^{phi nu} times the residue
// weight. Shares no code with the hyperbolic path; used as an oracle.
double exponential_sum_reference(KernelScalar which, double mu, double omega,
                                 double r_hat, double tau, double phi);

}  // namespace edgelq
