// Acceptance gate: ten numbered end-to-end checks, one PASS/FAIL line each.
// Every check carries a wall-clock budget; exceeding it fails the check even
// when the numbers come out right. Exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "revdis/adiabatic.hpp"
#include "revdis/effective.hpp"
#include "revdis/errors.hpp"
#include "revdis/kernels.hpp"
#include "revdis/lindblad.hpp"
#include "revdis/operators.hpp"
#include "revdis/thermometry.hpp"

using namespace revdis;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

void require(Outcome& o, bool cond, const std::string& msg) {
    if (cond) return;
    o.ok = false;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += msg;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i)
        out.push_back(lo + (hi - lo) * double(i) / double(n - 1));
    return out;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double area = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        area += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    return area;
}

// ---------------------------------------------------------------------------
// criteria

Outcome criterion_1() {
    Outcome o;
    const double star = n_m_star(1.0, 1.0);
    const double crit = n_m_crit_quad(1.0);
    require(o, std::abs(star - 0.414) < 1e-3,
            "n_m_star(1,1) = " + fmt(star) + ", want 0.414 within 1e-3");
    require(o, std::abs(crit - 2.414) < 1e-3,
            "n_m_crit_quad(1) = " + fmt(crit) + ", want 2.414 within 1e-3");
    o.detail = o.ok ? "optimal " + fmt(star) + ", critical " + fmt(crit)
                    : o.detail;
    return o;
}

Outcome criterion_2() {
    Outcome o;
    const double kappa = 0.0025;
    const double g2 = coupling_for_cooperativity(1.0, 1.0, kappa);
    const double occupations[] = {0.0, 0.5, 2.414, 3.6};
    const double stated[] = {0.005, 0.0075, 0.017, 0.023};
    // half an ulp of each value as printed (3 or 4 decimal places)
    const double tols[] = {5e-4, 5e-5, 5e-4, 5e-4};
    for (int i = 0; i < 4; ++i) {
        const double width =
            quad_coeffs(kappa, 1.0, g2, 1.0, occupations[i]).kappa_eff;
        require(o, std::abs(width - stated[i]) < tols[i],
                "kappa_eff(" + fmt(occupations[i]) + ") = " + fmt(width) +
                    ", want " + fmt(stated[i]) + " within " + fmt(tols[i]));
    }
    if (o.ok) o.detail = "four linewidths match to their stated digits";
    return o;
}

Outcome criterion_3() {
    Outcome o;
    SystemParams p;
    p.omega_m = 1.0;
    p.kappa = 0.0025;
    p.g0_quad = 5e-7;
    p.eta = Complex(0.0, 0.0);
    const auto residual = [&p](double d) {
        return ((d + 2.0 * p.omega_m) * d + p.kappa * p.kappa / 4.0) * d +
               p.omega_m * p.kappa * p.kappa / 2.0 +
               4.0 * p.g0_quad * std::norm(p.eta);
    };
    const double root0 = resonance_detuning(p);
    require(o, std::abs(root0 + 2.0) < 1e-12,
            "zero-pump root " + fmt(root0) + ", want -2 within 1e-12");
    require(o, std::abs(residual(root0)) < 1e-12,
            "zero-pump residual " + fmt(residual(root0)));

    double worst = 0.0;
    for (const double eta : linspace(0.0, 2000.0, 200)) {
        p.eta = Complex(eta, 0.0);
        worst = std::max(worst, std::abs(residual(resonance_detuning(p))));
    }
    require(o, worst < 1e-10,
            "sweep residual " + fmt(worst) + " exceeds 1e-10");
    if (o.ok) o.detail = "max residual over 200 pump values " + fmt(worst);
    return o;
}

Outcome criterion_4() {
    Outcome o;
    SystemParams p;
    p.omega_m = 1.0;
    p.kappa = 1.0;
    p.n_bar_o = 0.5;
    p.n_bar_m = 0.5;
    const HilbertDims dims{8, 30};
    const OperatorMatrix photon_number =
        tensor(number_op(dims.n_cav), identity_op(dims.n_mech));

    std::vector<double> errors;
    std::string listing;
    for (const double ratio : {10.0, 100.0, 1000.0}) {
        p.gamma = ratio * p.kappa;
        p.g0_quad = coupling_for_cooperativity(1.0, p.gamma, p.kappa);
        const LindbladModel model = build_full_rwa_model(p, dims, 1.0);
        const OperatorMatrix rho = steady_state(model);
        const double n_full = expectation(photon_number, rho).real();
        const double n_closed =
            quad_coeffs(p.kappa, p.n_bar_o, p.g0_quad, p.gamma, p.n_bar_m).n_ss;
        errors.push_back(std::abs(n_full - n_closed) / n_closed);
        if (!listing.empty()) listing += ", ";
        listing += fmt(ratio) + " -> " + fmt(errors.back());
    }
    require(o, errors[1] < 0.10,
            "rel error " + fmt(errors[1]) + " at ratio 100 exceeds 10%");
    require(o, errors[2] < 0.03,
            "rel error " + fmt(errors[2]) + " at ratio 1000 exceeds 3%");
    require(o, errors[0] > errors[1] && errors[1] > errors[2],
            "errors not strictly decreasing (" + listing + ")");
    if (o.ok) o.detail = listing;
    return o;
}

Outcome criterion_5() {
    Outcome o;
    std::string listing;
    for (const double t : {0.1, 0.5, 1.0}) {
        const double d = verify_superop_evolution(HilbertDims{2, 12}, 1.0, 0.0, t);
        require(o, d < 1e-6,
                "discrepancy " + fmt(d) + " at t = " + fmt(t) + " exceeds 1e-6");
        if (!listing.empty()) listing += ", ";
        listing += "t=" + fmt(t) + " -> " + fmt(d);
    }
    if (o.ok) o.detail = listing;
    return o;
}

Outcome criterion_6() {
    Outcome o;
    const EffectiveCoeffs c = quad_coeffs_from_c2(0.0025, 1.0, 1.0, 0.5);
    const double delta_c = -2.0;
    const LindbladModel model =
        build_effective_cavity_model(c.d_e, c.d_a, delta_c, 24);
    const std::vector<double> grid = linspace(delta_c - 50.0 * c.kappa_eff,
                                              delta_c + 50.0 * c.kappa_eff, 200);
    const SpectrumSeries s = spectrum(model, grid);
    const SpectrumSeries closed = lorentzian_spectrum(c, delta_c, grid);
    require(o, s.omega_grid.size() == grid.size(), "resolvent skipped points");

    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        worst = std::max(worst,
                         std::abs(s.values[i] - closed.values[i]) /
                             closed.values[i]);
    require(o, worst < 1e-6,
            "pointwise relative error " + fmt(worst) + " exceeds 1e-6");

    const double area = trapezoid(s.omega_grid, s.values);
    const double area_err = std::abs(area - c.n_ss) / c.n_ss;
    require(o, area_err < 0.015,
            "area " + fmt(area) + " off n_ss " + fmt(c.n_ss) + " by " +
                fmt(area_err));
    if (o.ok)
        o.detail = "pointwise " + fmt(worst) + ", area error " + fmt(area_err);
    return o;
}

Outcome criterion_7() {
    Outcome o;
    const double kappa = 0.0025;
    const double draws[][3] = {{1.0, 1.0, 0.5}, {0.7, 2.0, 1.0}, {1.0, 1.0, 3.6}};
    std::string listing;
    for (const auto& d : draws) {
        const EffectiveCoeffs c = quad_coeffs_from_c2(kappa, d[0], d[1], d[2]);
        const LindbladModel model =
            build_effective_cavity_model(c.d_e, c.d_a, -2.0, 40);
        const double g2 = g2_zero(steady_state(model));
        require(o, std::abs(g2 - 2.0) < 1e-3,
                "g2(0) = " + fmt(g2) + " for n_ss = " + fmt(c.n_ss));
        if (!listing.empty()) listing += ", ";
        listing += fmt(g2);
    }
    if (o.ok) o.detail = "g2(0) = " + listing;
    return o;
}

Outcome criterion_8() {
    Outcome o;
    const double kappa = 0.0025, c2 = 1.0, c1 = 1.0;
    const std::vector<double> occupations = linspace(0.0, 4.0, 81);

    double lin_min = 1e300, lin_max = -1e300;
    double worst_slope = 0.0;
    for (std::size_t i = 0; i < occupations.size(); ++i) {
        const double lin =
            lin_coeffs_from_c1(kappa, 1.0, c1, occupations[i]).kappa_eff;
        lin_min = std::min(lin_min, lin);
        lin_max = std::max(lin_max, lin);
        if (i > 0) {
            const double dn = occupations[i] - occupations[i - 1];
            const double slope =
                (quad_coeffs_from_c2(kappa, 1.0, c2, occupations[i]).kappa_eff -
                 quad_coeffs_from_c2(kappa, 1.0, c2, occupations[i - 1]).kappa_eff) /
                dn;
            worst_slope = std::max(worst_slope,
                                   std::abs(slope - 2.0 * kappa * c2));
        }
    }
    require(o, lin_max - lin_min < 1e-12,
            "linear linewidth varies by " + fmt(lin_max - lin_min));
    require(o, worst_slope < 1e-12,
            "quadratic slope off 2 kappa C2 by " + fmt(worst_slope));

    for (const double c : {0.1, 1.0, 10.0}) {
        const double n_ss = lin_coeffs_from_c1(kappa, 1.0, c, 1.0).n_ss;
        require(o, std::abs(n_ss - 1.0) < 1e-12,
                "linear n_ss = " + fmt(n_ss) + " at n_bar_m = n_bar_o, C1 = " +
                    fmt(c));
    }
    if (o.ok)
        o.detail = "linear variation " + fmt(lin_max - lin_min) +
                   ", slope error " + fmt(worst_slope);
    return o;
}

Outcome criterion_9() {
    Outcome o;
    const double kappa = 0.0025, c2 = 1.0;

    std::string listing;
    for (const double n_m : {0.0, 0.5, 2.414213562373095, 3.6}) {
        const EffectiveCoeffs truth = quad_coeffs_from_c2(kappa, 1.0, c2, n_m);
        const std::vector<double> grid =
            linspace(-2.0 - 10.0 * truth.kappa_eff, -2.0 + 10.0 * truth.kappa_eff,
                     400);
        const LorentzianFit fit =
            fit_lorentzian(lorentzian_spectrum(truth, -2.0, grid));
        const double n_est = infer_phonon_occupation(fit.fwhm, kappa, c2, 1e-9);
        const double err = (n_m == 0.0) ? std::abs(n_est)
                                        : std::abs(n_est - n_m) / n_m;
        require(o, err < 0.01,
                "noiseless recovery error " + fmt(err) + " at n_bar_m = " +
                    fmt(n_m));
        if (!listing.empty()) listing += ", ";
        listing += fmt(n_m) + " -> " + fmt(n_est);
    }

    const EffectiveCoeffs truth = quad_coeffs_from_c2(kappa, 1.0, c2, 0.5);
    const std::vector<double> grid = linspace(
        -2.0 - 10.0 * truth.kappa_eff, -2.0 + 10.0 * truth.kappa_eff, 400);
    const SpectrumSeries base = lorentzian_spectrum(truth, -2.0, grid);
    std::vector<double> errors;
    for (int i = 0; i < 100; ++i) {
        std::mt19937_64 rng(1000 + i);
        std::normal_distribution<double> gauss;
        SpectrumSeries noisy = base;
        for (double& v : noisy.values) v *= 1.0 + 0.01 * gauss(rng);
        const LorentzianFit fit = fit_lorentzian(noisy);
        errors.push_back(std::abs(fit.fwhm - truth.kappa_eff) /
                         truth.kappa_eff);
    }
    std::sort(errors.begin(), errors.end());
    const double median = 0.5 * (errors[49] + errors[50]);
    require(o, median < 0.02,
            "median FWHM error " + fmt(median) + " over 100 noisy fits");
    if (o.ok) o.detail = "recovered " + listing + "; median FWHM error " +
                          fmt(median);
    return o;
}

Outcome criterion_10() {
    Outcome o;
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> gauss;
    std::uniform_int_distribution<int> dim_draw(3, 7);
    std::uniform_int_distribution<int> term_draw(1, 3);
    std::uniform_real_distribution<double> rate_draw(0.1, 1.0);

    const auto random_matrix = [&](int n) {
        OperatorMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
        return m;
    };
    const auto random_density = [&](int n) {
        OperatorMatrix g = random_matrix(n);
        OperatorMatrix rho = g * g.adjoint();
        rho /= rho.trace().real();
        return rho;
    };

    double worst_oracle = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = dim_draw(rng);
        OperatorMatrix h = random_matrix(n);
        h = (0.5 * (h + h.adjoint())).eval();
        std::vector<CollapseTerm> terms;
        const int n_terms = term_draw(rng);
        for (int k = 0; k < n_terms; ++k)
            terms.push_back({rate_draw(rng), random_matrix(n)});
        const OperatorMatrix rho = random_density(n);

        const SuperOpMatrix l = vectorize_generator(h, terms);
        const ComplexVector v = vec(rho);
        ComplexVector lv(v.size());
        csr_matvec(CsrMatrix::from_sparse(l), v.data(), lv.data());
        const OperatorMatrix direct = lindblad_rhs_serial(h, terms, rho);
        worst_oracle = std::max(
            worst_oracle, (unvec(lv, n) - direct).cwiseAbs().maxCoeff());
    }
    require(o, worst_oracle < 1e-12,
            "vectorized generator deviates from the dense rule by " +
                fmt(worst_oracle));

    double worst_trace = 0.0, worst_herm = 0.0, worst_eig = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = dim_draw(rng);
        OperatorMatrix h = random_matrix(n);
        h = (0.5 * (h + h.adjoint())).eval();
        std::vector<CollapseTerm> terms;
        const int n_terms = term_draw(rng);
        for (int k = 0; k < n_terms; ++k)
            terms.push_back({rate_draw(rng), random_matrix(n)});
        const LindbladModel model = make_model(
            HilbertDims{n, 1}, h, terms, FrameTag::CAVITY_ONLY_EFFECTIVE);

        const OperatorMatrix rho = evolve(model, random_density(n), 0.05, 1e-10);
        worst_trace = std::max(worst_trace, std::abs(rho.trace().real() - 1.0) +
                                                std::abs(rho.trace().imag()));
        worst_herm =
            std::max(worst_herm,
                     (rho - OperatorMatrix(rho.adjoint())).cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<OperatorMatrix> eig(
            (0.5 * (rho + rho.adjoint())).eval(), Eigen::EigenvaluesOnly);
        worst_eig = std::min(worst_eig, eig.eigenvalues().minCoeff());
    }
    require(o, worst_trace < 1e-8, "trace drift " + fmt(worst_trace));
    require(o, worst_herm < 1e-8, "hermiticity drift " + fmt(worst_herm));
    require(o, worst_eig > -1e-8, "min eigenvalue " + fmt(worst_eig));
    if (o.ok)
        o.detail = "oracle " + fmt(worst_oracle) + ", trace " +
                   fmt(worst_trace) + ", herm " + fmt(worst_herm) +
                   ", min eig " + fmt(worst_eig);
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int index;
        const char* label;
        double budget_seconds;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria{
        {1, "closed-form landmark occupations", 0.001, criterion_1},
        {2, "reference effective linewidths", 0.001, criterion_2},
        {3, "resonance cubic roots", 0.1, criterion_3},
        {4, "full-model steady state vs closed form", 120.0, criterion_4},
        {5, "mechanical superoperator evolution", 30.0, criterion_5},
        {6, "resolvent spectrum vs closed-form line", 30.0, criterion_6},
        {7, "thermal intensity statistics", 30.0, criterion_7},
        {8, "linear vs quadratic linewidth contrast", 0.001, criterion_8},
        {9, "thermometry round trip", 60.0, criterion_9},
        {10, "property suites", 60.0, criterion_10},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        if (seconds >= c.budget_seconds) {
            o.ok = false;
            if (!o.detail.empty()) o.detail += "; ";
            o.detail += "runtime " + fmt(seconds) + " s exceeds budget " +
                        fmt(c.budget_seconds) + " s";
        }
        if (!o.ok) ++failures;
        std::printf("%s criterion %d: %s (%.3f s%s%s)\n",
                    o.ok ? "PASS" : "FAIL", c.index, c.label, seconds,
                    o.detail.empty() ? "" : "; ", o.detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}
