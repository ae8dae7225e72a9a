#pragma once

// Closed-form results for the cavity after the fast mechanical mode is
// eliminated: displaced field amplitude, the two-phonon resonance condition,
// effective emission/absorption coefficients for quadratic and linear
// coupling, optimal and critical mechanical occupations, the Lorentzian
// output spectrum, analytic mean-value dynamics, and the occupation <->
// temperature conversions used at the SI boundary.

#include <utility>
#include <vector>

#include "revdis/lindblad.hpp"
#include "revdis/types.hpp"

namespace revdis {

struct PhysicalConstants {
    static constexpr double hbar = 1.054571817e-34;  // J s
    static constexpr double k_B = 1.380649e-23;      // J / K
};

enum class CouplingKind { QUADRATIC, LINEAR };

// Effective cavity rates. Derived fields are computed from d_e and d_a
// (kappa_eff = d_e - d_a, n_ss = d_a / kappa_eff), so those identities hold
// exactly as floating-point expressions, not just analytically.
struct EffectiveCoeffs {
    double d_e = 0.0;        // emission coefficient
    double d_a = 0.0;        // absorption coefficient
    double kappa_eff = 0.0;  // effective cavity linewidth, d_e - d_a
    double n_ss = 0.0;       // steady-state photon number, d_a / kappa_eff
    double cooperativity = 0.0;
    CouplingKind coupling_kind = CouplingKind::QUADRATIC;
};

// alpha = eta / (-i delta_c + kappa/2), the displaced field amplitude
Complex cavity_amplitude(Complex eta, double delta_c, double kappa);

// Real detuning solving
//   delta^3 + 2 w_m delta^2 + (kappa^2/4) delta + w_m kappa^2/2
//     + 4 g0 |eta|^2 = 0,
// i.e. delta_c = -2 omega_m' self-consistently with the displaced frequency.
// Roots come from companion-matrix eigenvalues polished by Newton steps; the
// real root nearest -2 w_m is returned. Reads omega_m, kappa, g0_quad, eta.
double resonance_detuning(const SystemParams& p);

// all real roots of the same cubic, ascending (for closeness diagnostics)
std::vector<double> resonance_real_roots(const SystemParams& p);

// n = 1/(e^{hbar w / k_B T} - 1) and its inverse; temperature_from_occupation
// maps n = 0 to T = 0 by convention
double thermal_occupation(double omega, double temperature);
double temperature_from_occupation(double omega, double n_bar);

// cooperativities and the coupling that produces one
double quadratic_cooperativity(double g2, double gamma, double kappa);
double linear_cooperativity(double g1, double gamma, double kappa);
double coupling_for_cooperativity(double c, double gamma, double kappa);

// Quadratic coupling at the two-phonon resonance:
//   D_e = kappa (n_o+1) + (4 g2^2/gamma)(n_m+1)^2
//   D_a = kappa n_o     + (4 g2^2/gamma) n_m^2
// with C2 = 4 g2^2/(gamma kappa). The mechanical parts are exactly the
// markov_coefficient_check rates.
EffectiveCoeffs quad_coeffs(double kappa, double n_bar_o, double g2,
                            double gamma, double n_bar_m);

// same coefficients parameterized by C2 directly (gamma drops out)
EffectiveCoeffs quad_coeffs_from_c2(double kappa, double n_bar_o, double c2,
                                    double n_bar_m);

// Linear coupling counterparts:
//   D_e = kappa (n_o+1) + (4 g1^2/gamma)(n_m+1)
//   D_a = kappa n_o     + (4 g1^2/gamma) n_m
// with C1 = 4 g1^2/(gamma kappa); kappa_eff = kappa (1 + C1) for all n_m.
EffectiveCoeffs lin_coeffs(double kappa, double n_bar_o, double g1,
                           double gamma, double n_bar_m);
EffectiveCoeffs lin_coeffs_from_c1(double kappa, double n_bar_o, double c1,
                                   double n_bar_m);

// Mechanical occupation minimizing the quadratic-coupling n_ss, in the
// cancellation-free form 2 n_o / (1 + C2 + sqrt((1+C2)^2 + 4 C2 n_o)).
// C2 = 0 returns 0 (n_ss is then n_o regardless of n_m, so there is no
// interior minimum to report).
double n_m_star(double n_bar_o, double c2);

// critical occupations separating cavity cooling from heating
double n_m_crit_quad(double n_bar_o);           // n_o + sqrt(n_o (1+n_o))
double n_m_crit_lin(double n_bar_o);            // n_o

// S(w) = (n_ss/pi) (kappa_eff/2) / ((delta_c - w)^2 + kappa_eff^2/4)
SpectrumSeries lorentzian_spectrum(const EffectiveCoeffs& coeffs, double delta_c,
                                   const std::vector<double>& omega_grid);

// <a(t)> = a0 e^{(i delta_c - kappa_eff/2) t}
Complex mean_amplitude(double t, Complex a0, const EffectiveCoeffs& coeffs,
                       double delta_c);

// <a^+a>(t) = n_ss + (n0 - n_ss) e^{-kappa_eff t}
double mean_photon(double t, double n0, const EffectiveCoeffs& coeffs);

}  // namespace revdis
