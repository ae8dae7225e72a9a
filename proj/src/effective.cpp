#include "revdis/effective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "revdis/adiabatic.hpp"
#include "revdis/errors.hpp"

namespace revdis {

namespace {

void require_rate(double v, const char* fn, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string(fn) + ": " + name + " must be > 0");
}

void require_occupation(double v, const char* fn, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw DomainError(std::string(fn) + ": " + name + " must be >= 0");
}

EffectiveCoeffs assemble(double d_e, double d_a, double cooperativity,
                         CouplingKind kind) {
    EffectiveCoeffs c;
    c.d_e = d_e;
    c.d_a = d_a;
    c.kappa_eff = d_e - d_a;
    if (!(c.kappa_eff > 0.0))
        throw StabilityError("effective coefficients need D_e > D_a");
    c.n_ss = d_a / c.kappa_eff;
    c.cooperativity = cooperativity;
    c.coupling_kind = kind;
    return c;
}

}  // namespace

Complex cavity_amplitude(Complex eta, double delta_c, double kappa) {
    require_rate(kappa, "cavity_amplitude", "kappa");
    if (!std::isfinite(delta_c))
        throw DomainError("cavity_amplitude: delta_c must be finite");
    return eta / Complex(kappa / 2.0, -delta_c);
}

// ---------------------------------------------------------------------------
// two-phonon resonance condition

namespace {

struct ResonanceCubic {
    // monic cubic x^3 + c2 x^2 + c1 x + c0
    double c2, c1, c0;

    double value(double x) const { return ((x + c2) * x + c1) * x + c0; }
    double slope(double x) const { return (3.0 * x + 2.0 * c2) * x + c1; }

    double polish(double x) const {
        for (int i = 0; i < 8; ++i) {
            const double f = value(x);
            const double df = slope(x);
            if (df == 0.0) break;
            const double step = f / df;
            x -= step;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
        }
        return x;
    }
};

ResonanceCubic resonance_cubic(const SystemParams& p) {
    require_rate(p.omega_m, "resonance_detuning", "omega_m");
    require_rate(p.kappa, "resonance_detuning", "kappa");
    require_occupation(p.g0_quad, "resonance_detuning", "g0_quad");
    const double drive = std::norm(p.eta);
    if (!std::isfinite(drive))
        throw DomainError("resonance_detuning: eta must be finite");
    return {2.0 * p.omega_m, p.kappa * p.kappa / 4.0,
            p.omega_m * p.kappa * p.kappa / 2.0 + 4.0 * p.g0_quad * drive};
}

}  // namespace

std::vector<double> resonance_real_roots(const SystemParams& p) {
    const ResonanceCubic cubic = resonance_cubic(p);
    Eigen::Matrix3d companion;
    companion << 0.0, 0.0, -cubic.c0,
                 1.0, 0.0, -cubic.c1,
                 0.0, 1.0, -cubic.c2;
    const Eigen::EigenSolver<Eigen::Matrix3d> es(companion);
    std::vector<double> roots;
    for (int i = 0; i < 3; ++i) {
        const Complex lambda = es.eigenvalues()[i];
        if (std::abs(lambda.imag()) <=
            1e-9 * std::max(1.0, std::abs(lambda)))
            roots.push_back(cubic.polish(lambda.real()));
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

double resonance_detuning(const SystemParams& p) {
    const std::vector<double> roots = resonance_real_roots(p);
    const double target = -2.0 * p.omega_m;
    double best = 0.0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const double r : roots) {
        const double dist = std::abs(r - target);
        if (dist < best_dist) {
            best_dist = dist;
            best = r;
        }
    }
    if (!(best_dist < p.omega_m))
        throw DomainError(
            "resonance_detuning: no real root near -2 omega_m (pump too strong "
            "for a self-consistent two-phonon resonance)");
    return best;
}

// ---------------------------------------------------------------------------
// occupation <-> temperature

double thermal_occupation(double omega, double temperature) {
    require_rate(omega, "thermal_occupation", "omega");
    if (!(temperature > 0.0) || !std::isfinite(temperature))
        throw DomainError("thermal_occupation: temperature must be > 0");
    const double x =
        PhysicalConstants::hbar * omega / (PhysicalConstants::k_B * temperature);
    return 1.0 / std::expm1(x);
}

double temperature_from_occupation(double omega, double n_bar) {
    require_rate(omega, "temperature_from_occupation", "omega");
    if (!(n_bar >= 0.0) || !std::isfinite(n_bar))
        throw DomainError("temperature_from_occupation: n_bar must be >= 0");
    if (n_bar == 0.0) return 0.0;  // vacuum occupation, by convention
    return PhysicalConstants::hbar * omega /
           (PhysicalConstants::k_B * std::log1p(1.0 / n_bar));
}

// ---------------------------------------------------------------------------
// effective coefficients

double quadratic_cooperativity(double g2, double gamma, double kappa) {
    require_rate(gamma, "quadratic_cooperativity", "gamma");
    require_rate(kappa, "quadratic_cooperativity", "kappa");
    require_occupation(g2, "quadratic_cooperativity", "g2");
    return 4.0 * g2 * g2 / (gamma * kappa);
}

double linear_cooperativity(double g1, double gamma, double kappa) {
    require_rate(gamma, "linear_cooperativity", "gamma");
    require_rate(kappa, "linear_cooperativity", "kappa");
    require_occupation(g1, "linear_cooperativity", "g1");
    return 4.0 * g1 * g1 / (gamma * kappa);
}

double coupling_for_cooperativity(double c, double gamma, double kappa) {
    require_rate(gamma, "coupling_for_cooperativity", "gamma");
    require_rate(kappa, "coupling_for_cooperativity", "kappa");
    require_occupation(c, "coupling_for_cooperativity", "c");
    return std::sqrt(c * gamma * kappa) / 2.0;
}

EffectiveCoeffs quad_coeffs(double kappa, double n_bar_o, double g2,
                            double gamma, double n_bar_m) {
    require_rate(kappa, "quad_coeffs", "kappa");
    require_rate(gamma, "quad_coeffs", "gamma");
    require_occupation(n_bar_o, "quad_coeffs", "n_bar_o");
    require_occupation(n_bar_m, "quad_coeffs", "n_bar_m");
    require_occupation(g2, "quad_coeffs", "g2");
    const auto [mech_e, mech_a] = markov_coefficient_check(g2, gamma, n_bar_m);
    return assemble(kappa * (n_bar_o + 1.0) + mech_e, kappa * n_bar_o + mech_a,
                    quadratic_cooperativity(g2, gamma, kappa),
                    CouplingKind::QUADRATIC);
}

EffectiveCoeffs quad_coeffs_from_c2(double kappa, double n_bar_o, double c2,
                                    double n_bar_m) {
    require_rate(kappa, "quad_coeffs_from_c2", "kappa");
    require_occupation(n_bar_o, "quad_coeffs_from_c2", "n_bar_o");
    require_occupation(n_bar_m, "quad_coeffs_from_c2", "n_bar_m");
    require_occupation(c2, "quad_coeffs_from_c2", "c2");
    return assemble(
        kappa * ((n_bar_o + 1.0) + c2 * (n_bar_m + 1.0) * (n_bar_m + 1.0)),
        kappa * (n_bar_o + c2 * n_bar_m * n_bar_m), c2,
        CouplingKind::QUADRATIC);
}

EffectiveCoeffs lin_coeffs(double kappa, double n_bar_o, double g1,
                           double gamma, double n_bar_m) {
    require_rate(kappa, "lin_coeffs", "kappa");
    require_rate(gamma, "lin_coeffs", "gamma");
    require_occupation(n_bar_o, "lin_coeffs", "n_bar_o");
    require_occupation(n_bar_m, "lin_coeffs", "n_bar_m");
    require_occupation(g1, "lin_coeffs", "g1");
    const double rate = 4.0 * g1 * g1 / gamma;
    return assemble(kappa * (n_bar_o + 1.0) + rate * (n_bar_m + 1.0),
                    kappa * n_bar_o + rate * n_bar_m,
                    linear_cooperativity(g1, gamma, kappa),
                    CouplingKind::LINEAR);
}

EffectiveCoeffs lin_coeffs_from_c1(double kappa, double n_bar_o, double c1,
                                   double n_bar_m) {
    require_rate(kappa, "lin_coeffs_from_c1", "kappa");
    require_occupation(n_bar_o, "lin_coeffs_from_c1", "n_bar_o");
    require_occupation(n_bar_m, "lin_coeffs_from_c1", "n_bar_m");
    require_occupation(c1, "lin_coeffs_from_c1", "c1");
    return assemble(kappa * ((n_bar_o + 1.0) + c1 * (n_bar_m + 1.0)),
                    kappa * (n_bar_o + c1 * n_bar_m), c1, CouplingKind::LINEAR);
}

double n_m_star(double n_bar_o, double c2) {
    require_occupation(n_bar_o, "n_m_star", "n_bar_o");
    require_occupation(c2, "n_m_star", "c2");
    if (c2 == 0.0) return 0.0;  // n_ss is flat in n_m; nothing to minimize
    const double s = 1.0 + c2;
    const double disc = s * s + 4.0 * c2 * n_bar_o;
    return std::max(0.0, 2.0 * n_bar_o / (s + std::sqrt(disc)));
}

double n_m_crit_quad(double n_bar_o) {
    require_occupation(n_bar_o, "n_m_crit_quad", "n_bar_o");
    return n_bar_o + std::sqrt(n_bar_o * (1.0 + n_bar_o));
}

double n_m_crit_lin(double n_bar_o) {
    require_occupation(n_bar_o, "n_m_crit_lin", "n_bar_o");
    return n_bar_o;
}

// ---------------------------------------------------------------------------
// analytic spectrum and mean-value dynamics

SpectrumSeries lorentzian_spectrum(const EffectiveCoeffs& coeffs, double delta_c,
                                   const std::vector<double>& omega_grid) {
    if (!(coeffs.kappa_eff > 0.0))
        throw DomainError("lorentzian_spectrum: kappa_eff must be > 0");
    if (omega_grid.empty())
        throw DomainError("lorentzian_spectrum: empty frequency grid");
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        if (!std::isfinite(omega_grid[i]))
            throw DomainError("lorentzian_spectrum: frequencies must be finite");
        if (i > 0 && omega_grid[i] <= omega_grid[i - 1])
            throw DomainError(
                "lorentzian_spectrum: frequency grid must be strictly increasing");
    }
    const double half = coeffs.kappa_eff / 2.0;
    SpectrumSeries out;
    out.omega_grid = omega_grid;
    out.values.reserve(omega_grid.size());
    for (const double w : omega_grid) {
        const double detune = delta_c - w;
        out.values.push_back(coeffs.n_ss / std::numbers::pi * half /
                             (detune * detune + half * half));
    }
    out.meta.model = "lorentzian";
    out.meta.delta_c = delta_c;
    return out;
}

Complex mean_amplitude(double t, Complex a0, const EffectiveCoeffs& coeffs,
                       double delta_c) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw DomainError("mean_amplitude: t must be finite and >= 0");
    if (!(coeffs.kappa_eff > 0.0))
        throw DomainError("mean_amplitude: kappa_eff must be > 0");
    return a0 * std::exp(Complex(-coeffs.kappa_eff / 2.0 * t, delta_c * t));
}

double mean_photon(double t, double n0, const EffectiveCoeffs& coeffs) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw DomainError("mean_photon: t must be finite and >= 0");
    if (!(n0 >= 0.0) || !std::isfinite(n0))
        throw DomainError("mean_photon: n0 must be >= 0");
    if (!(coeffs.kappa_eff > 0.0))
        throw DomainError("mean_photon: kappa_eff must be > 0");
    return coeffs.n_ss + (n0 - coeffs.n_ss) * std::exp(-coeffs.kappa_eff * t);
}

}  // namespace revdis
