#include "revdis/thermometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "revdis/effective.hpp"
#include "revdis/errors.hpp"

namespace revdis {

namespace {

struct LorentzianParams {
    double area;
    double center;
    double fwhm;
};

double model_value(const LorentzianParams& p, double w) {
    const double half = p.fwhm / 2.0;
    const double detune = w - p.center;
    return p.area / std::numbers::pi * half / (detune * detune + half * half);
}

// rows of the Jacobian in parameter order (area, center, fwhm)
Eigen::Vector3d model_gradient(const LorentzianParams& p, double w) {
    const double half = p.fwhm / 2.0;
    const double detune = w - p.center;
    const double denom = detune * detune + half * half;
    Eigen::Vector3d g;
    g[0] = half / (std::numbers::pi * denom);
    g[1] = p.area / std::numbers::pi * half * 2.0 * detune / (denom * denom);
    g[2] = p.area / std::numbers::pi *
           (0.5 / denom - half * half / (denom * denom));
    return g;
}

double sum_squared_residuals(const LorentzianParams& p,
                             const std::vector<double>& w,
                             const std::vector<double>& y) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double r = model_value(p, w[i]) - y[i];
        ssr += r * r;
    }
    return ssr;
}

// linear interpolation of the half-maximum crossing between two samples
double crossing(double w0, double y0, double w1, double y1, double level) {
    return w0 + (level - y0) / (y1 - y0) * (w1 - w0);
}

LorentzianParams initial_guess(const std::vector<double>& w,
                               const std::vector<double>& y) {
    const std::size_t peak =
        std::distance(y.begin(), std::max_element(y.begin(), y.end()));
    const double y_max = y[peak];
    if (!(y_max > 0.0))
        throw DomainError("fit_lorentzian: spectrum has no positive peak");
    const double level = y_max / 2.0;

    double left = 0.0, right = 0.0;
    bool have_left = false, have_right = false;
    for (std::size_t i = peak; i-- > 0;) {
        if (y[i] < level) {
            left = crossing(w[i], y[i], w[i + 1], y[i + 1], level);
            have_left = true;
            break;
        }
    }
    for (std::size_t i = peak + 1; i < y.size(); ++i) {
        if (y[i] < level) {
            right = crossing(w[i - 1], y[i - 1], w[i], y[i], level);
            have_right = true;
            break;
        }
    }
    if (!have_left || !have_right)
        throw DomainError(
            "fit_lorentzian: grid does not bracket the half maximum on both "
            "sides; widen the frequency window");

    double area = 0.0;
    for (std::size_t i = 1; i < w.size(); ++i)
        area += 0.5 * (y[i] + y[i - 1]) * (w[i] - w[i - 1]);

    LorentzianParams p{area, w[peak], right - left};
    if (!(p.fwhm > 0.0))
        throw DomainError("fit_lorentzian: degenerate half-maximum crossings");
    if (!(p.area > 0.0)) p.area = y_max * std::numbers::pi * p.fwhm / 2.0;
    return p;
}

}  // namespace

LorentzianFit fit_lorentzian(const SpectrumSeries& series) {
    const std::vector<double>& w = series.omega_grid;
    const std::vector<double>& y = series.values;
    if (w.size() != y.size())
        throw DimensionError("fit_lorentzian: grid/value size mismatch");
    if (w.size() < 8)
        throw DomainError("fit_lorentzian: needs at least 8 grid points");
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!std::isfinite(w[i]) || !std::isfinite(y[i]))
            throw DomainError("fit_lorentzian: non-finite input");
        if (i > 0 && w[i] <= w[i - 1])
            throw DomainError("fit_lorentzian: grid must be strictly increasing");
    }

    LorentzianParams p = initial_guess(w, y);
    if (w.back() - w.front() < 3.0 * p.fwhm)
        throw DomainError(
            "fit_lorentzian: grid spans less than 3x the apparent width");

    const int n = static_cast<int>(w.size());
    double lambda = 1e-3;
    double ssr = sum_squared_residuals(p, w, y);
    int iterations = 0;
    bool converged = false;

    Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
    for (; iterations < 200; ++iterations) {
        jtj.setZero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (int i = 0; i < n; ++i) {
            const Eigen::Vector3d g = model_gradient(p, w[i]);
            const double r = model_value(p, w[i]) - y[i];
            jtj += g * g.transpose();
            jtr += g * r;
        }

        bool accepted = false;
        for (int attempt = 0; attempt < 60; ++attempt) {
            Eigen::Matrix3d damped = jtj;
            damped.diagonal() += lambda * jtj.diagonal();
            const Eigen::Vector3d step = damped.fullPivLu().solve(-jtr);
            const LorentzianParams trial{p.area + step[0], p.center + step[1],
                                         p.fwhm + step[2]};
            if (trial.area > 0.0 && trial.fwhm > 0.0) {
                const double trial_ssr = sum_squared_residuals(trial, w, y);
                if (trial_ssr <= ssr) {
                    const double rel_step = std::max(
                        {std::abs(step[0]) / std::max(std::abs(p.area), 1e-300),
                         std::abs(step[1]) /
                             std::max(std::abs(p.center), std::abs(p.fwhm)),
                         std::abs(step[2]) / std::max(p.fwhm, 1e-300)});
                    p = trial;
                    ssr = trial_ssr;
                    lambda = std::max(lambda * 0.3, 1e-14);
                    accepted = true;
                    if (rel_step < 1e-10) converged = true;
                    break;
                }
            }
            lambda *= 2.0;
            if (lambda > 1e14) break;
        }
        if (converged) break;
        if (!accepted) {
            // no downhill step at any damping: either we are at the optimum
            // to roundoff or the fit is stuck
            const Eigen::Vector3d newton = jtj.fullPivLu().solve(-jtr);
            const double rel = newton.cwiseAbs().maxCoeff() /
                               std::max({std::abs(p.area), p.fwhm, 1e-300});
            if (rel < 1e-8) {
                converged = true;
                break;
            }
            throw FitError(
                "fit_lorentzian: no acceptable step after damping retries "
                "(iteration " + std::to_string(iterations) +
                ", ssr = " + std::to_string(ssr) + ")");
        }
    }
    if (!converged)
        throw FitError(
            "fit_lorentzian: not converged after 200 iterations (ssr = " +
            std::to_string(ssr) + ", area = " + std::to_string(p.area) +
            ", center = " + std::to_string(p.center) +
            ", fwhm = " + std::to_string(p.fwhm) + ")");

    LorentzianFit fit;
    fit.area = p.area;
    fit.center = p.center;
    fit.fwhm = p.fwhm;
    fit.residual_norm = std::sqrt(ssr);
    fit.iterations = iterations;
    jtj.setZero();
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector3d g = model_gradient(p, w[i]);
        jtj += g * g.transpose();
    }
    const double dof_variance = (n > 3) ? ssr / double(n - 3) : 0.0;
    fit.covariance = dof_variance * jtj.fullPivLu().inverse();
    return fit;
}

double infer_phonon_occupation(double fwhm, double kappa, double c2,
                               double floor_tol) {
    if (!(c2 > 0.0) || !std::isfinite(c2))
        throw DomainError("infer_phonon_occupation: C2 must be > 0");
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw DomainError("infer_phonon_occupation: kappa must be > 0");
    if (!(fwhm > 0.0) || !std::isfinite(fwhm))
        throw DomainError("infer_phonon_occupation: fwhm must be > 0");
    if (!(floor_tol >= 0.0) || !std::isfinite(floor_tol))
        throw DomainError("infer_phonon_occupation: floor_tol must be >= 0");

    const double floor = kappa * (1.0 + c2);
    if (fwhm >= floor)
        return std::max(0.0, ((fwhm / kappa - 1.0) / c2 - 1.0) / 2.0);
    if (fwhm >= floor - floor_tol) return 0.0;
    throw InconsistentInputError(
        "infer_phonon_occupation: fwhm " + std::to_string(fwhm) +
        " lies below the zero-temperature floor " + std::to_string(floor) +
        " by more than the tolerance " + std::to_string(floor_tol));
}

double infer_temperature(double n_bar_m, double omega_m) {
    if (!(n_bar_m >= 0.0) || !std::isfinite(n_bar_m))
        throw DomainError("infer_temperature: n_bar_m must be >= 0");
    if (n_bar_m == 0.0) return 0.0;
    return temperature_from_occupation(omega_m, n_bar_m);
}

}  // namespace revdis
