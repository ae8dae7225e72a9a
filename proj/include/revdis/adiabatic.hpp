#pragma once

// Checks for the adiabatic elimination of the mechanical mode. The thermal
// damped oscillator closes the operator triple (b^+2, b^+ b-ish cross term,
// b^2) under its adjoint flow; the 3x3 moment matrix M and its exponential
// S(t) = e^{Mt} carry that flow, and verify_superop_evolution confirms the
// resulting operator identities against brute-force Lindblad propagation.

#include <utility>

#include <Eigen/Dense>

#include "revdis/types.hpp"

namespace revdis {

// moment-flow matrix for a thermal damped mechanical mode:
//   [ g(2n+1)  -2g(n+1)   0       ]
//   [ g n       0         -g(n+1) ]
//   [ 0         2g n      -g(2n+1)]
// with g = gamma, n = n_bar_m
Eigen::Matrix3d m_matrix(double gamma, double n_bar_m);

// S(t) = e^{M t}; real for all inputs
Eigen::Matrix3d s_matrix(double gamma, double n_bar_m, double t);

// matrix exponential by scaling-and-squaring with an order-13 Pade
// approximant; exposed for direct testing
Eigen::MatrixXd real_expm(const Eigen::MatrixXd& a);

// Max elementwise discrepancy between the S(t)-resummed operator identities
//   b^+2 E_t(rho) = E_t[S00 b^+2 rho + S01 b^+ rho b^+ + S02 rho b^+2]
//   b^2  E_t(rho) = E_t[S20 rho b^2  + S21 b rho b     + S22 b^2 rho ]
// (E_t = mechanical Lindblad propagator for time t) over a fixed set of
// random low-lying density matrices on dims.n_mech levels. Both sides are
// propagated forward; only dims.n_mech is read from dims.
double verify_superop_evolution(HilbertDims dims, double gamma, double n_bar_m,
                                double t);

// Markov-limit mechanical sideband rates feeding the effective cavity
// model: (emission, absorption) = (4 g2^2 (n_bar_m+1)^2 / gamma,
// 4 g2^2 n_bar_m^2 / gamma). The one-sided memory integral of the
// mechanical correlators e^{-gamma s} contributes 1/gamma once.
std::pair<double, double> markov_coefficient_check(double g2, double gamma,
                                                   double n_bar_m);

}  // namespace revdis
