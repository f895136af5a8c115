#include "edgelq/kernel.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "edgelq/errors.hpp"

namespace edgelq {

namespace {

ScalarMode combo(const ScalarMode& x, double xc, const ScalarMode& y,
                 double yc) {
  ScalarMode out;
  out.lambda = x.lambda;
  out.cs = xc * x.cs + yc * y.cs;
  out.cc = xc * x.cc + yc * y.cc;
  out.poly.resize(std::max(x.poly.size(), y.poly.size()), Complex(0.0, 0.0));
  for (size_t k = 0; k < x.poly.size(); ++k) out.poly[k] += xc * x.poly[k];
  for (size_t k = 0; k < y.poly.size(); ++k) out.poly[k] += yc * y.poly[k];
  return out;
}

ScalarMode nth_derivative(ScalarMode m, int order) {
  for (int k = 0; k < order; ++k) m = m.derivative();
  return m;
}

}  // namespace

const char* formula_variant_name(FormulaVariant v) {
  return v == FormulaVariant::whole_re ? "whole_re" : "factored_re";
}

double ScalarMode::eval(double phi) const {
  if (std::abs(phi) * std::abs(lambda) > 300.0) {
    throw std::overflow_error(
        "kernel scalar: |phi * lambda| exceeds the hyperbolic overflow guard");
  }
  const Complex arg = phi * lambda;
  Complex acc = cs * std::sinh(arg) + cc * std::cosh(arg);
  double power = 1.0;
  for (const Complex& ck : poly) {
    acc += ck * power;
    power *= phi;
  }
  return 4.0 * acc.real();
}

ScalarMode ScalarMode::derivative() const {
  ScalarMode d;
  d.lambda = lambda;
  d.cs = lambda * cc;
  d.cc = lambda * cs;
  if (poly.size() > 1) {
    d.poly.resize(poly.size() - 1);
    for (size_t k = 1; k < poly.size(); ++k) {
      d.poly[k - 1] = static_cast<double>(k) * poly[k];
    }
  }
  return d;
}

ScalarMode ScalarMode::antiderivative() const {
  if (std::abs(lambda) == 0.0) {
    throw std::logic_error("ScalarMode: antiderivative needs lambda != 0");
  }
  ScalarMode f;
  f.lambda = lambda;
  f.cs = cc / lambda;
  f.cc = cs / lambda;
  f.poly.resize(poly.size() + 1, Complex(0.0, 0.0));
  for (size_t k = 0; k < poly.size(); ++k) {
    f.poly[k + 1] = poly[k] / static_cast<double>(k + 1);
  }
  f.poly[0] = -f.cc;  // pins F(0) = 0
  return f;
}

EdgeKernel EdgeKernel::build(double mu, double omega, double r_hat,
                             double tau_struct, double horizon,
                             FormulaVariant variant) {
  if (mu <= 0.0 || r_hat <= 0.0) {
    throw std::invalid_argument("EdgeKernel: mu and r must be positive");
  }
  if (omega < 0.0) {
    throw std::invalid_argument("EdgeKernel: omega must be nonnegative");
  }
  if (tau_struct < 0.0 || horizon <= 0.0) {
    throw std::invalid_argument(
        "EdgeKernel: need tau >= 0 and a positive horizon");
  }

  const double kappa = mu / r_hat;
  const double t2p1 = tau_struct * tau_struct + 1.0;
  const double b = kappa * t2p1;
  const double disc = b * b - 4.0 * kappa;
  if (disc >= 0.0) {
    throw std::domain_error(
        "EdgeKernel: characteristic roots are real or repeated; the "
        "hyperbolic closed form needs a complex conjugate quartet "
        "(mu (tau^2+1)^2 < 4 r)");
  }

  EdgeKernel k;
  k.mu_ = mu;
  k.omega_ = omega;
  k.r_hat_ = r_hat;
  k.tau_ = tau_struct;
  k.horizon_ = horizon;
  k.variant_ = variant;

  // Principal quartic root: the square root with positive real part of the
  // upper-half-plane biquadratic root.
  const Complex u(b / 2.0, std::sqrt(-disc) / 2.0);
  const Complex lam = std::sqrt(u);
  k.lambda_ = lam;
  const Complex lam2 = lam * lam;
  const Complex lam4 = lam2 * lam2;
  const Complex wsq = 0.5 * lam * lam2 / (Complex(kappa, 0.0) - lam4);
  k.varpi_sq_ = wsq;

  // Even / odd coefficient split of the boundary residues.
  const Complex f1 = (omega / r_hat + mu * tau_struct / r_hat) / lam2;
  const Complex f2 =
      (omega * tau_struct / r_hat + mu * t2p1 / r_hat) / lam - lam;
  const Complex g1 = (omega * tau_struct / r_hat) / lam2 + 1.0;
  const Complex g2 = omega * t2p1 / (r_hat * lam);

  ScalarMode& alpha = k.base_[0];
  ScalarMode& beta = k.base_[1];
  ScalarMode& gamma = k.base_[2];
  ScalarMode& eta = k.base_[3];
  for (ScalarMode* m : {&alpha, &beta, &gamma, &eta}) m->lambda = lam;

  if (variant == FormulaVariant::whole_re) {
    alpha.cs = wsq * f1;
    alpha.cc = wsq * f2;
    beta.cs = wsq * g1;
    beta.cc = wsq * g2;
    gamma.cs = -lam * wsq * f2;
    gamma.cc = -lam * wsq * f1;
    eta.cs = -lam * wsq * g2;
    eta.cc = -lam * wsq * g1;
  } else {
    const double wr = wsq.real();
    const double lw = (lam * wsq).real();
    alpha.cs = wr * f1.real();
    alpha.cc = wr * f2.real();
    beta.cs = wr * g1.real();
    beta.cc = wr * g2.real();
    gamma.cs = -lw * f2.real();
    gamma.cc = -lw * f1.real();
    eta.cs = -lw * g2.real();
    eta.cc = -lw * g1.real();
  }

  const double a_t = alpha.eval(horizon);
  const double b_t = beta.eval(horizon);
  const double g_t = gamma.eval(horizon);
  const double h_t = eta.eval(horizon);
  k.delta_ = b_t * g_t - a_t * h_t;
  const double scale =
      std::max(1.0, std::abs(b_t * g_t) + std::abs(a_t * h_t));
  if (std::abs(k.delta_) < 1e-12 * scale) {
    throw SingularBoundaryError(
        "EdgeKernel: boundary normalizer vanishes at this horizon");
  }

  // State-map numerators as functions of s = horizon - t.
  k.q_mode_[0][0] = combo(beta, g_t, alpha, -h_t);
  k.q_mode_[0][1] = combo(alpha, b_t, beta, -a_t);
  k.q_mode_[1][0] = combo(eta, g_t, gamma, -h_t);
  k.q_mode_[1][1] = combo(gamma, b_t, eta, -a_t);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      k.q_int_[r][c][0] = k.q_mode_[r][c].antiderivative();
      k.q_int_[r][c][1] = k.q_int_[r][c][0].antiderivative();
    }
  }
  return k;
}

double EdgeKernel::scalar(KernelScalar which, double phi, int deriv) const {
  const ScalarMode& base = base_[static_cast<int>(which)];
  if (deriv == 0) return base.eval(phi);
  return nth_derivative(base, deriv).eval(phi);
}

Mat2 EdgeKernel::h_block(double phi) const {
  Mat2 h;
  h << base_[0].eval(phi), base_[1].eval(phi), base_[2].eval(phi),
      base_[3].eval(phi);
  return h;
}

Mat2 EdgeKernel::state_map(double t, int deriv) const {
  const double s = horizon_ - t;
  const double sign = (deriv % 2 == 0) ? 1.0 : -1.0;
  Mat2 p;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      p(r, c) = sign * nth_derivative(q_mode_[r][c], deriv).eval(s) / delta_;
    }
  }
  return p;
}

double EdgeKernel::p_integral(int row, int col, double t, int depth) const {
  if (row < 0 || row > 1 || col < 0 || col > 1 || depth < 1 || depth > 2) {
    throw std::out_of_range("EdgeKernel::p_integral: bad index");
  }
  const double s = horizon_ - t;
  return q_int_[row][col][depth - 1].eval(s) / delta_;
}

double exponential_sum_reference(KernelScalar which, double mu, double omega,
                                 double r_hat, double tau, double phi) {
  const double kappa = mu / r_hat;
  const double t2p1 = tau * tau + 1.0;
  const double b = kappa * t2p1;
  const Complex disc = std::sqrt(Complex(b * b - 4.0 * kappa, 0.0));
  const Complex u = (Complex(b, 0.0) + disc) / 2.0;
  const Complex l1 = std::sqrt(u);
  const Complex quartet[4] = {l1, -l1, std::conj(l1), -std::conj(l1)};

  Complex acc(0.0, 0.0);
  for (const Complex& nu : quartet) {
    const Complex nu2 = nu * nu;
    const Complex nu4 = nu2 * nu2;
    const Complex w2 = 0.5 * nu * nu2 / (Complex(kappa, 0.0) - nu4);
    const Complex f = (omega / r_hat + mu * tau / r_hat) / nu2 +
                      (omega * tau / r_hat + mu * t2p1 / r_hat) / nu - nu;
    const Complex g =
        (omega * tau / r_hat) / nu2 + 1.0 + omega * t2p1 / (r_hat * nu);
    Complex coef;
    switch (which) {
      case KernelScalar::alpha:
        coef = w2 * f;
        break;
      case KernelScalar::beta:
        coef = w2 * g;
        break;
      case KernelScalar::gamma:
        coef = -nu * w2 * f;
        break;
      case KernelScalar::eta:
        coef = -nu * w2 * g;
        break;
    }
    acc += std::exp(phi * nu) * coef;
  }
  return acc.real();
}

}  // namespace edgelq
