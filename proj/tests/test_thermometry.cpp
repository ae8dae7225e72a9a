#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "revdis/effective.hpp"
#include "revdis/errors.hpp"
#include "revdis/lindblad.hpp"
#include "revdis/thermometry.hpp"

using namespace revdis;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i)
        out.push_back(lo + (hi - lo) * double(i) / double(n - 1));
    return out;
}

double lorentz(double area, double center, double fwhm, double w) {
    const double half = fwhm / 2.0;
    const double d = w - center;
    return area / std::numbers::pi * half / (d * d + half * half);
}

SpectrumSeries synth_series(double area, double center, double fwhm,
                            double halfspan_widths = 10.0, int points = 400) {
    SpectrumSeries s;
    s.omega_grid = linspace(center - halfspan_widths * fwhm,
                            center + halfspan_widths * fwhm, points);
    for (const double w : s.omega_grid)
        s.values.push_back(lorentz(area, center, fwhm, w));
    s.meta.model = "synthetic";
    s.meta.delta_c = center;
    return s;
}

}  // namespace

TEST_CASE("noiseless fits recover the generating parameters") {
    const double cases[][3] = {
        {0.41, -2.0, 0.005}, {1.3, 0.7, 0.02}, {0.05, 5.0, 1.5}, {2.0, -10.0, 0.3}};
    for (const auto& c : cases) {
        const LorentzianFit fit = fit_lorentzian(synth_series(c[0], c[1], c[2]));
        CHECK(fit.area == doctest::Approx(c[0]).epsilon(1e-6));
        CHECK(fit.center == doctest::Approx(c[1]).epsilon(1e-6));
        CHECK(fit.fwhm == doctest::Approx(c[2]).epsilon(1e-6));
        CHECK(fit.residual_norm < 1e-8 * c[0] / c[2]);
        CHECK(fit.iterations < 200);
        CHECK(std::isfinite(fit.covariance(2, 2)));
    }
}

TEST_CASE("one percent multiplicative noise leaves the width within two percent") {
    const double area = 0.41, center = -2.0, fwhm = 0.0075;
    const SpectrumSeries base = synth_series(area, center, fwhm);

    std::vector<double> errors;
    for (int seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(500 + seed);
        std::normal_distribution<double> gauss;
        SpectrumSeries noisy = base;
        for (double& v : noisy.values) v *= 1.0 + 0.01 * gauss(rng);
        const LorentzianFit fit = fit_lorentzian(noisy);
        errors.push_back(std::abs(fit.fwhm - fwhm) / fwhm);
    }
    std::sort(errors.begin(), errors.end());
    const double median = 0.5 * (errors[49] + errors[50]);
    CHECK(median < 0.02);
}

TEST_CASE("resolvent spectrum of the effective model fits to its linewidth") {
    const EffectiveCoeffs c = quad_coeffs_from_c2(0.0025, 1.0, 1.0, 0.5);
    const double delta_c = -2.0;
    const LindbladModel model =
        build_effective_cavity_model(c.d_e, c.d_a, delta_c, 24);
    const SpectrumSeries s = spectrum(
        model, linspace(delta_c - 10.0 * c.kappa_eff,
                        delta_c + 10.0 * c.kappa_eff, 400));
    const LorentzianFit fit = fit_lorentzian(s);
    CHECK(std::abs(fit.fwhm - c.kappa_eff) / c.kappa_eff < 0.005);
    CHECK(std::abs(fit.center - delta_c) < 0.05 * c.kappa_eff);
    CHECK(std::abs(fit.area - c.n_ss) / c.n_ss < 0.05);
}

TEST_CASE("fit preconditions are enforced") {
    const SpectrumSeries good = synth_series(1.0, 0.0, 1.0);

    SpectrumSeries mismatched = good;
    mismatched.values.pop_back();
    CHECK_THROWS_AS(fit_lorentzian(mismatched), DimensionError);

    SpectrumSeries tiny;
    tiny.omega_grid = linspace(-5.0, 5.0, 7);
    for (const double w : tiny.omega_grid)
        tiny.values.push_back(lorentz(1.0, 0.0, 1.0, w));
    CHECK_THROWS_AS(fit_lorentzian(tiny), DomainError);

    SpectrumSeries unsorted = good;
    std::swap(unsorted.omega_grid[10], unsorted.omega_grid[11]);
    CHECK_THROWS_AS(fit_lorentzian(unsorted), DomainError);

    SpectrumSeries infected = good;
    infected.values[3] = std::nan("");
    CHECK_THROWS_AS(fit_lorentzian(infected), DomainError);

    // span 2.4 widths is below the 3x requirement
    CHECK_THROWS_AS(fit_lorentzian(synth_series(1.0, 0.0, 1.0, 1.2)), DomainError);

    // a pure tail never crosses half maximum on the left
    SpectrumSeries tail;
    tail.omega_grid = linspace(2.0, 10.0, 100);
    for (const double w : tail.omega_grid)
        tail.values.push_back(lorentz(1.0, 0.0, 1.0, w));
    CHECK_THROWS_AS(fit_lorentzian(tail), DomainError);
}

TEST_CASE("linewidth inversion") {
    CHECK(infer_phonon_occupation(0.0075, 0.0025, 1.0) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(infer_phonon_occupation(0.017, 0.0025, 1.0) ==
          doctest::Approx(2.4).epsilon(1e-12));

    // the zero-temperature floor maps to zero occupation
    CHECK(infer_phonon_occupation(0.0025 * 2.0, 0.0025, 1.0) == 0.0);

    // slightly below floor: clamped within the tolerance, rejected beyond it
    const double floor = 0.0025 * 2.0;
    CHECK(infer_phonon_occupation(floor - 1e-7, 0.0025, 1.0, 1e-6) == 0.0);
    CHECK_THROWS_AS(infer_phonon_occupation(floor - 1e-4, 0.0025, 1.0, 1e-6),
                    InconsistentInputError);

    CHECK_THROWS_AS(infer_phonon_occupation(0.0075, 0.0025, 0.0), DomainError);
    CHECK_THROWS_AS(infer_phonon_occupation(0.0075, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(infer_phonon_occupation(0.0, 0.0025, 1.0), DomainError);
    CHECK_THROWS_AS(infer_phonon_occupation(0.0075, 0.0025, 1.0, -1.0),
                    DomainError);

    // round trip through the closed-form linewidth
    for (double n_m : {0.0, 0.3, 1.0, 4.2}) {
        for (double c2 : {0.2, 1.0, 7.0}) {
            const double width =
                quad_coeffs_from_c2(0.0025, 1.0, c2, n_m).kappa_eff;
            CHECK(infer_phonon_occupation(width, 0.0025, c2, 1e-9) ==
                  doctest::Approx(n_m).epsilon(1e-9));
        }
    }
}

TEST_CASE("temperature readout") {
    const double omega = 2.0 * std::numbers::pi * 1e6;
    CHECK(infer_temperature(0.0, omega) == 0.0);
    CHECK(infer_temperature(0.5, omega) ==
          doctest::Approx(PhysicalConstants::hbar * omega /
                          (PhysicalConstants::k_B * std::log(3.0)))
              .epsilon(1e-12));
    for (double n_m : {0.1, 1.0, 5.0}) {
        CHECK(thermal_occupation(omega, infer_temperature(n_m, omega)) ==
              doctest::Approx(n_m).epsilon(1e-12));
    }
    double prev = 0.0;
    for (double n_m : {0.25, 0.5, 1.0, 2.0}) {
        const double t = infer_temperature(n_m, omega);
        CHECK(t > prev);
        prev = t;
    }
    CHECK_THROWS_AS(infer_temperature(-0.1, omega), DomainError);
}

TEST_CASE("end-to-end occupation readout from closed-form spectra") {
    const double kappa = 0.0025, c2 = 1.0;
    for (double n_m : {0.5, 1.0, 2.414213562373095, 3.6}) {
        const EffectiveCoeffs c = quad_coeffs_from_c2(kappa, 1.0, c2, n_m);
        const SpectrumSeries s =
            lorentzian_spectrum(c, -2.0, linspace(-2.0 - 10.0 * c.kappa_eff,
                                                  -2.0 + 10.0 * c.kappa_eff, 400));
        const LorentzianFit fit = fit_lorentzian(s);
        const double inferred = infer_phonon_occupation(fit.fwhm, kappa, c2, 1e-9);
        CHECK(std::abs(inferred - n_m) / n_m < 0.01);
    }
}

TEST_CASE("linear-coupling spectra carry no occupation signal") {
    // a linearly coupled mechanical bath leaves the linewidth at its floor,
    // so the quadratic inverter reads ~0 regardless of the true occupation
    const double kappa = 0.0025;
    for (double n_m : {0.0, 1.0, 2.0, 4.0}) {
        const EffectiveCoeffs c = lin_coeffs_from_c1(kappa, 1.0, 1.0, n_m);
        const SpectrumSeries s =
            lorentzian_spectrum(c, -2.0, linspace(-2.0 - 10.0 * c.kappa_eff,
                                                  -2.0 + 10.0 * c.kappa_eff, 400));
        const LorentzianFit fit = fit_lorentzian(s);
        const double inferred =
            infer_phonon_occupation(fit.fwhm, kappa, 1.0, 1e-9);
        CHECK(inferred <= 0.05);
    }
}
