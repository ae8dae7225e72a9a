#pragma once

// Mechanical-bath thermometry from cavity noise spectra: fit a Lorentzian
// to S(omega), invert the quadratic-coupling linewidth formula for the
// phonon occupation, and convert to a temperature.

#include <Eigen/Dense>

#include "revdis/types.hpp"

namespace revdis {

struct LorentzianFit {
    double center = 0.0;         // omega_0
    double fwhm = 0.0;           // Gamma > 0
    double area = 0.0;           // A > 0
    double residual_norm = 0.0;  // 2-norm of the residual vector at optimum
    Eigen::Matrix3d covariance;  // parameter order (area, center, fwhm)
    int iterations = 0;
};

// Least-squares fit of A (Gamma/2)/pi / ((w - w0)^2 + Gamma^2/4) by
// Levenberg-Marquardt with an analytic Jacobian. Initialized from the peak
// sample, the half-maximum crossings, and the trapezoidal area. Requires at
// least 8 points and a grid spanning 3x the apparent width; stops when the
// max relative step drops below 1e-10, and reports non-convergence after
// 200 iterations as a fit error with diagnostics.
LorentzianFit fit_lorentzian(const SpectrumSeries& series);

// Inversion of fwhm = kappa (1 + C2 (2 n_m + 1)):
//   n_m = ((fwhm/kappa - 1)/C2 - 1)/2.
// The linewidth floor kappa (1 + C2) is the zero-temperature limit;
// measured widths within floor_tol below it clamp to 0 (fit noise), widths
// further below are inconsistent with the model and raise an error. Pass
// 3x the fitted width's standard error as floor_tol for noisy input.
double infer_phonon_occupation(double fwhm, double kappa, double c2,
                               double floor_tol = 0.0);

// bath temperature for the inferred occupation at angular frequency
// omega_m (SI); n_bar_m = 0 maps to 0 K by convention
double infer_temperature(double n_bar_m, double omega_m);

}  // namespace revdis
