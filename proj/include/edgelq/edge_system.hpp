#pragma once

#include <vector>

#include "edgelq/game.hpp"
#include "edgelq/types.hpp"

namespace edgelq {

// Which two-point boundary-value structure the solver works with. The
// reduced Hamiltonian matrix couples each control into the state through
// S_i = B (1/r) B^T; the two choices of B differ at positive delay:
//   velocity_coupled   B is the plain velocity-slot selector, so controls
//                      couple into velocity rows only. The per-edge
//                      hyperbolic kernel and the diagonal H decomposition
//                      target exactly this structure.
//   delay_compensated  B is premultiplied by (I - tau*A), the compensator
//                      the delay elimination introduces. Trajectories of
//                      this structure close under the delay-free dynamics
//                      and the delayed node dynamics; it is the production
//                      formulation.
// The two coincide at tau = 0.
enum class Formulation { velocity_coupled, delay_compensated };

const char* formulation_name(Formulation f);

// The m-edge reduced system in the 2m-space (positions then velocities, one
// slot per edge; the q-dimensional extension is applied lazily).
struct EdgeSystem {
  int m = 0;
  int q = 1;
  double tau = 0.0;
  double horizon = 0.0;
  Mat a_hat;                    // 2m x 2m, [[0,I],[0,0]] blocks; a_hat^2 = 0
  std::vector<Vec> b_hat;       // per edge, velocity-slot selector in 2m
  std::vector<Mat> w_running;   // per edge-OCP, m x m diagonal
  std::vector<Mat> w_terminal;  // per edge-OCP, m x m diagonal
  Vec mu, omega, r_hat;         // per-edge scalars of the reduced OCPs
  Vec z0;                       // 2mq initial edge state (I_2 kron D^T) x0

  // Delay-structured weight matrices (I + tau A^T) (I_2 kron W) (I + tau A)
  // = [[1,tau],[tau,tau^2+1]] kron W.
  Mat q_running(int edge) const;
  Mat q_terminal(int edge) const;
  // S_i = B (1/r) B^T for the requested structure.
  Mat s_matrix(int edge, Formulation f) const;
  // (I - tau A) b_hat_i: the delay-compensated input column.
  Vec b_hat0(int edge) const;
};

// The delay-eliminated optimal control data: same matrices, state y on the
// shortened horizon [0, T - tau], y(0) = z(0) exactly (nilpotent identity
// (I - tau A)(I + tau A) = I).
struct DelayFreeSystem {
  EdgeSystem edge;
  Vec y0;                   // equals edge.z0
  double horizon_eff = 0.0; // T - tau
};

EdgeSystem to_edge_system(const GameSpec& spec);
DelayFreeSystem eliminate_delay(const EdgeSystem& es);

// Pontryagin-conditions check for one edge-OCP: max over interior samples of
// the costate equation residual |dpsi/dt + Q_i y + A^T psi| (central finite
// differences on the uniform grid) plus the terminal mismatch
// |psi(end) - Q_iT y(end)|. y and psi are sampled row-wise (count x 2mq).
double costate_residual(const DelayFreeSystem& dfs, const Mat& y,
                        const Mat& psi, int edge, double step);

}  // namespace edgelq
