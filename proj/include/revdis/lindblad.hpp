#pragma once

// Model assembly and master-equation solvers: adaptive time evolution,
// steady states by a bordered sparse LU solve, two-time correlations via
// the regression formula, and noise spectra via per-frequency resolvent
// solves.

#include <vector>

#include "revdis/kernels.hpp"
#include "revdis/types.hpp"

namespace revdis {

struct SystemParams {
    double omega_m = 1.0;   // mechanical frequency; usually the unit scale
    double delta_c = 0.0;   // pump detuning
    double g0_quad = 0.0;   // single-photon quadratic coupling
    double g1_lin = 0.0;    // field-enhanced linear coupling
    double kappa = 0.0;     // cavity energy decay rate
    double gamma = 0.0;     // mechanical energy decay rate
    double n_bar_o = 0.0;   // optical bath occupation
    double n_bar_m = 0.0;   // mechanical bath occupation
    Complex eta{0.0, 0.0};  // pump rate

    // throws ModelError naming the offending field
    void validate() const;
};

enum class FrameTag {
    RWA_QUADRATIC,          // interaction frame, resonant two-phonon exchange
    DISPLACED_FULL,         // displaced frame, counter-rotating terms kept
    RWA_LINEAR,             // interaction frame, beam-splitter exchange
    CAVITY_ONLY_EFFECTIVE,  // mechanics adiabatically eliminated
};

struct LindbladModel {
    HilbertDims dims;
    OperatorMatrix hamiltonian;
    std::vector<CollapseTerm> collapse_terms;
    FrameTag frame_tag = FrameTag::RWA_QUADRATIC;
    SuperOpMatrix generator;  // vectorized Liouvillian, built at construction

    // annihilation operators embedded in the joint space
    OperatorMatrix cavity_annihilation() const;
    OperatorMatrix mech_annihilation() const;
};

// validates, vectorizes, and freezes a model (all fields immutable after)
LindbladModel make_model(HilbertDims dims, OperatorMatrix hamiltonian,
                         std::vector<CollapseTerm> terms, FrameTag tag);

// Interaction-frame model at the two-phonon resonance: H = g2 (a^+ b^2 +
// b^+2 a) with g2 = g0_quad * alpha, and the four thermal dissipators
// (kappa(n_o+1), a), (kappa n_o, a^+), (gamma(n_m+1), b), (gamma n_m, b^+).
LindbladModel build_full_rwa_model(const SystemParams& p, HilbertDims dims,
                                   double alpha);

// Displaced-frame model with counter-rotating terms:
//   H = -delta_c a^+a + omega_m' b^+b - g0 alpha^2 (b^+2 + b^2)
//       + g0 alpha (a + a^+)(b + b^+)^2,   omega_m' = omega_m + 2 g0 alpha^2
// (the bare single-photon quadratic term, not amplified by alpha, is
// dropped as negligible at the operating point); same four dissipators.
LindbladModel build_displaced_model(const SystemParams& p, HilbertDims dims,
                                    double alpha);

// Interaction-frame linear model: H = g1 (a^+ b + b^+ a); same dissipators.
LindbladModel build_linear_rwa_model(const SystemParams& p, HilbertDims dims);

// Cavity-only effective model: H = -delta_c a^+a with collapse terms
// (d_e, a) and (d_a, a^+). Requires d_e > d_a >= 0 for a steady state.
LindbladModel build_effective_cavity_model(double d_e, double d_a, double delta_c,
                                           int n_cav);

// static mechanical frequency shift over the shifted frequency; the
// rotating-wave form is trustworthy when this is small (warn above 1e-2)
double rwa_shift_ratio(const SystemParams& p, double alpha);
inline constexpr double kRwaWarnThreshold = 1e-2;

// e^{L t} v0 by adaptive embedded Runge-Kutta (Dormand-Prince 5(4)); the
// workhorse under evolve, two-time correlations, and the regression checks.
// v0 may be any vectorized operator, not just a density matrix.
ComplexVector propagate_vectorized(const CsrMatrix& l, const ComplexVector& v0,
                                   double t, double rtol);
ComplexVector propagate_vectorized(const SuperOpMatrix& l, const ComplexVector& v0,
                                   double t, double rtol);

// rho(t) = unvec(e^{L t} vec(rho0)) with relative local error tol; the
// result is reported raw (no silent renormalization)
OperatorMatrix evolve(const LindbladModel& model, const OperatorMatrix& rho0,
                      double t, double tol);

// Unit-trace Hermitian kernel element of the generator, found by replacing
// one row of L with the trace constraint and solving the bordered system
// with sparse LU. Residual contract: |L vec(rho)|_inf < 1e-8 |L|_inf.
OperatorMatrix steady_state(const LindbladModel& model);

// C(tau) = Tr{A unvec(e^{L tau} vec(B rho_ss))} on a sorted grid of
// non-negative lags
std::vector<Complex> two_time_correlation(const LindbladModel& model,
                                          const OperatorMatrix& a_op,
                                          const OperatorMatrix& b_op,
                                          const std::vector<double>& tau_grid);

// S(omega) = (1/pi) Re Tr{a^+ unvec(x)} with (i omega I + L) x =
// -vec(a rho_ss). Grid points with a singular resolvent are skipped and
// recorded in meta.skipped_omegas. Solves are parallelized over omega with
// scheduling-independent output.
SpectrumSeries spectrum(const LindbladModel& model,
                        const std::vector<double>& omega_grid);

// <a^+a^+aa> / <a^+a>^2 for a single-mode state; vacuum input is an error
double g2_zero(const OperatorMatrix& rho_ss);

}  // namespace revdis
