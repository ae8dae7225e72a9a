#include "revdis/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "revdis/effective.hpp"
#include "revdis/errors.hpp"
#include "revdis/operators.hpp"
#include "revdis/random.hpp"
#include "revdis/thermometry.hpp"

namespace revdis {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

// ---------------------------------------------------------------------------
// formatting

// 17 significant digits round-trip any double; '.' decimal point and plain
// ASCII regardless of locale
std::string num17(double v) {
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

// shortest round-trip form for human-facing text and column labels
std::string num_short(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// column-label-safe rendering: 0.5 -> "0p5", -2 -> "m2"
std::string axis_label(double v) {
    std::string s = num_short(v);
    for (char& c : s) {
        if (c == '.') c = 'p';
        if (c == '-') c = 'm';
    }
    return s;
}

class CsvFile {
  public:
    CsvFile(const std::filesystem::path& path)
        : path_(path), out_(path, std::ios::binary) {
        if (!out_)
            throw ConfigError("cannot open output file for writing: " +
                              path.string());
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    void finish() {
        out_.flush();
        if (!out_) throw ConfigError("write failed: " + path_.string());
    }

  private:
    std::filesystem::path path_;
    std::ofstream out_;
};

// ---------------------------------------------------------------------------
// grids

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i)
        out.push_back(lo + (hi - lo) * double(i) / double(n - 1));
    return out;
}

std::vector<double> geomspace(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i)
        out.push_back(lo * std::pow(hi / lo, double(i) / double(n - 1)));
    return out;
}

// sorted union of a base grid and landmark points (duplicates dropped)
std::vector<double> with_landmarks(std::vector<double> base,
                                   std::initializer_list<double> marks) {
    base.insert(base.end(), marks);
    std::sort(base.begin(), base.end());
    std::vector<double> out;
    out.reserve(base.size());
    for (const double v : base) {
        if (out.empty() || v - out.back() > 1e-12 * std::max(1.0, std::abs(v)))
            out.push_back(v);
    }
    return out;
}

GridSpec explicit_grid(std::vector<double> values) {
    GridSpec g;
    g.values = std::move(values);
    return g;
}

GridSpec range_grid(double lo, double hi, int count) {
    GridSpec g;
    g.min = lo;
    g.max = hi;
    g.count = count;
    return g;
}

json grid_echo(const std::vector<double>& grid) {
    json e;
    e["count"] = grid.size();
    e["min"] = grid.front();
    e["max"] = grid.back();
    return e;
}

// ---------------------------------------------------------------------------
// warnings

void warn_mech_truncation(double n_bar_m, int n_mech,
                          std::vector<std::string>& warnings) {
    if (n_bar_m <= 0.0) return;
    const double tail = std::pow(n_bar_m / (1.0 + n_bar_m), n_mech);
    if (tail > 1e-8)
        warnings.push_back(
            "mechanical truncation " + std::to_string(n_mech) +
            " leaves a thermal tail " + num_short(tail) +
            " above 1e-8 for n_bar_m = " + num_short(n_bar_m) +
            "; the 1e-8 rule needs n_mech >= " +
            std::to_string(thermal_truncation_for_tail(n_bar_m, 1e-8)));
}

void warn_cavity_truncation(const OperatorMatrix& rho_ss, HilbertDims dims,
                            std::vector<std::string>& warnings,
                            const std::string& context) {
    double top = 0.0;
    for (int i = std::max(0, dims.n_cav - 2); i < dims.n_cav; ++i)
        for (int k = 0; k < dims.n_mech; ++k)
            top += rho_ss(i * dims.n_mech + k, i * dims.n_mech + k).real();
    if (top >= 1e-6)
        warnings.push_back("cavity truncation " + std::to_string(dims.n_cav) +
                           " holds " + num_short(top) +
                           " population in its top two levels (" + context +
                           "); raise n_cav");
}

void warn_rwa_ratio(const SystemParams& p, double alpha,
                    std::vector<std::string>& warnings) {
    const double ratio = rwa_shift_ratio(p, alpha);
    if (ratio > kRwaWarnThreshold)
        warnings.push_back(
            "rotating-wave validity ratio g0 alpha^2 / omega_m' = " +
            num_short(ratio) + " exceeds " + num_short(kRwaWarnThreshold) +
            "; counter-rotating corrections may matter");
}

// ---------------------------------------------------------------------------
// summaries

json params_echo(const ScenarioConfig& cfg) {
    json p;
    p["omega_m"] = cfg.params.omega_m;
    p["delta_c"] = cfg.params.delta_c;
    p["g0_quad"] = cfg.params.g0_quad;
    p["g1_lin"] = cfg.params.g1_lin;
    p["kappa"] = cfg.params.kappa;
    p["gamma"] = cfg.params.gamma;
    p["n_bar_o"] = cfg.params.n_bar_o;
    p["n_bar_m"] = cfg.params.n_bar_m;
    p["eta"] = {cfg.params.eta.real(), cfg.params.eta.imag()};

    json top;
    top["params"] = p;
    top["dims"] = {{"n_cav", cfg.dims.n_cav}, {"n_mech", cfg.dims.n_mech}};
    top["options"] = {{"c2", cfg.options.c2},
                      {"c1", cfg.options.c1},
                      {"model", cfg.options.model},
                      {"noise_level", cfg.options.noise_level},
                      {"omega_m_si", cfg.options.omega_m_si}};
    top["seed"] = cfg.seed;
    top["output_dir"] = cfg.output_dir;
    return top;
}

RunSummary finalize(const ScenarioConfig& cfg, Clock::time_point t0,
                    json derived, json grids_echo,
                    std::vector<std::string> files,
                    std::vector<std::string> warnings) {
    RunSummary s;
    s.scenario = scenario_name(cfg.scenario);
    s.warnings = warnings;
    s.wall_time_seconds =
        std::chrono::duration<double>(Clock::now() - t0).count();

    const std::string summary_name = s.scenario + "_summary.json";
    files.push_back(summary_name);
    s.files = files;

    json doc;
    doc["schema_version"] = 1;
    doc["scenario"] = s.scenario;
    doc["parameters"] = params_echo(cfg);
    doc["grids"] = std::move(grids_echo);
    doc["derived"] = std::move(derived);
    doc["files"] = files;
    doc["warnings"] = warnings;
    doc["wall_time_seconds"] = s.wall_time_seconds;

    const std::filesystem::path path =
        std::filesystem::path(cfg.output_dir) / summary_name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file for writing: " +
                                path.string());
    out << doc.dump(2) << '\n';
    out.flush();
    if (!out) throw ConfigError("write failed: " + path.string());

    s.document = std::move(doc);
    return s;
}

std::vector<double> grid_or(const ScenarioConfig& cfg, const std::string& key,
                            std::vector<double> fallback) {
    const auto it = cfg.grids.find(key);
    if (it == cfg.grids.end()) return fallback;
    return it->second.materialize();
}

double trapezoid_area(const std::vector<double>& x,
                      const std::vector<double>& y) {
    double area = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        area += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    return area;
}

// ---------------------------------------------------------------------------
// scenario runners

RunSummary run_fig1(const ScenarioConfig& cfg, Clock::time_point t0) {
    const SystemParams& p = cfg.params;
    const std::vector<double> deltas =
        cfg.grids.at("delta_c").materialize();
    const std::vector<double> etas = cfg.grids.at("eta").materialize();
    std::vector<std::string> warnings;

    CsvFile surface(std::filesystem::path(cfg.output_dir) / "fig1.csv");
    surface.row({"delta_c(omega_m)", "eta(omega_m)", "alpha_abs(dimensionless)"});
    for (const double d : deltas)
        for (const double e : etas)
            surface.row({num17(d), num17(e),
                         num17(std::abs(cavity_amplitude(e, d, p.kappa)))});
    surface.finish();

    CsvFile resonance(std::filesystem::path(cfg.output_dir) /
                      "fig1_resonance.csv");
    resonance.row({"eta(omega_m)", "delta_c_resonance(omega_m)",
                   "cubic_residual(omega_m_cubed)"});
    double last_root = 0.0, worst_residual = 0.0;
    bool warned_close_roots = false;
    for (const double e : etas) {
        SystemParams pe = p;
        pe.eta = Complex(e, 0.0);
        const std::vector<double> roots = resonance_real_roots(pe);
        if (!warned_close_roots && roots.size() >= 2) {
            for (std::size_t i = 1; i < roots.size(); ++i) {
                if (roots[i] - roots[i - 1] < 0.05 * p.omega_m) {
                    warnings.push_back(
                        "resonance cubic has close real roots near eta = " +
                        num_short(e) + "; branch selection may be ambiguous");
                    warned_close_roots = true;
                    break;
                }
            }
        }
        const double root = resonance_detuning(pe);
        const double drive = e * e;
        const double residual =
            ((root + 2.0 * p.omega_m) * root + p.kappa * p.kappa / 4.0) * root +
            p.omega_m * p.kappa * p.kappa / 2.0 + 4.0 * p.g0_quad * drive;
        worst_residual = std::max(worst_residual, std::abs(residual));
        last_root = root;
        resonance.row({num17(e), num17(root), num17(residual)});
    }
    resonance.finish();

    json derived;
    derived["resonance_delta_c_at_max_eta"] = last_root;
    derived["resonance_max_abs_residual"] = worst_residual;

    json grids;
    grids["delta_c"] = grid_echo(deltas);
    grids["eta"] = grid_echo(etas);
    return finalize(cfg, t0, derived, grids, {"fig1.csv", "fig1_resonance.csv"},
                    warnings);
}

RunSummary run_fig2(const ScenarioConfig& cfg, Clock::time_point t0) {
    const SystemParams& p = cfg.params;
    const std::vector<double> occupations =
        cfg.grids.at("n_bar_m").materialize();
    const std::vector<double> coops = cfg.grids.at("c2").materialize();

    CsvFile out(std::filesystem::path(cfg.output_dir) / "fig2.csv");
    out.row({"n_bar_m(dimensionless)", "c2(dimensionless)", "n_ss(photons)"});
    for (const double nm : occupations)
        for (const double c2 : coops)
            out.row({num17(nm), num17(c2),
                     num17(quad_coeffs_from_c2(p.kappa, p.n_bar_o, c2, nm).n_ss)});
    out.finish();

    json derived;
    derived["n_m_crit_quad"] = n_m_crit_quad(p.n_bar_o);
    derived["n_m_star_c2_1"] = n_m_star(p.n_bar_o, 1.0);

    json grids;
    grids["n_bar_m"] = grid_echo(occupations);
    grids["c2"] = grid_echo(coops);
    return finalize(cfg, t0, derived, grids, {"fig2.csv"}, {});
}

RunSummary run_fig3(const ScenarioConfig& cfg, Clock::time_point t0) {
    const SystemParams& p = cfg.params;
    const double c2 = cfg.options.c2;
    const std::vector<double> occupations =
        cfg.grids.at("n_bar_m").materialize();
    const std::vector<double> omegas = grid_or(
        cfg, "omega", linspace(p.delta_c - 0.05, p.delta_c + 0.05, 401));
    std::vector<std::string> warnings;

    CsvFile out(std::filesystem::path(cfg.output_dir) / "fig3.csv");
    out.row({"n_bar_m(dimensionless)", "omega(omega_m_prime)",
             "spectrum(photons_per_omega_m_prime)"});
    json lines = json::array();
    for (const double nm : occupations) {
        const EffectiveCoeffs coeffs =
            quad_coeffs_from_c2(p.kappa, p.n_bar_o, c2, nm);
        const LindbladModel model = build_effective_cavity_model(
            coeffs.d_e, coeffs.d_a, p.delta_c, cfg.dims.n_cav);
        const SpectrumSeries series = spectrum(model, omegas);
        for (std::size_t i = 0; i < series.omega_grid.size(); ++i)
            out.row({num17(nm), num17(series.omega_grid[i]),
                     num17(series.values[i])});

        const LorentzianFit fit = fit_lorentzian(series);
        warn_cavity_truncation(steady_state(model), model.dims, warnings,
                               "n_bar_m = " + num_short(nm));

        json line;
        line["n_bar_m"] = nm;
        line["kappa_eff_closed"] = coeffs.kappa_eff;
        line["n_ss_closed"] = coeffs.n_ss;
        line["fwhm_fit"] = fit.fwhm;
        line["center_fit"] = fit.center;
        line["area_fit"] = fit.area;
        lines.push_back(line);
    }
    out.finish();

    const std::vector<double> inset_grid = with_landmarks(
        linspace(0.0, 5.0, 201),
        {n_m_star(p.n_bar_o, c2), n_m_crit_quad(p.n_bar_o)});
    CsvFile inset(std::filesystem::path(cfg.output_dir) / "fig3_inset.csv");
    inset.row({"n_bar_m(dimensionless)", "n_ss(photons)"});
    for (const double nm : inset_grid)
        inset.row({num17(nm),
                   num17(quad_coeffs_from_c2(p.kappa, p.n_bar_o, c2, nm).n_ss)});
    inset.finish();

    json derived;
    derived["lines"] = lines;
    derived["n_m_star"] = n_m_star(p.n_bar_o, c2);
    derived["n_m_crit_quad"] = n_m_crit_quad(p.n_bar_o);

    json grids;
    grids["n_bar_m"] = grid_echo(occupations);
    grids["omega"] = grid_echo(omegas);
    return finalize(cfg, t0, derived, grids, {"fig3.csv", "fig3_inset.csv"},
                    warnings);
}

RunSummary run_fig4(const ScenarioConfig& cfg, Clock::time_point t0) {
    const SystemParams& p = cfg.params;
    const std::vector<double> occupations =
        cfg.grids.at("n_bar_m").materialize();
    const std::vector<double> coops = cfg.grids.at("c2").materialize();
    const double c1 = cfg.options.c1;

    std::vector<std::string> header{"n_bar_m(dimensionless)"};
    for (const double c2 : coops)
        header.push_back("kappa_eff_quad_c2_" + axis_label(c2) +
                         "(omega_m_prime)");
    header.push_back("kappa_eff_lin_c1_" + axis_label(c1) + "(omega_m_prime)");

    CsvFile out(std::filesystem::path(cfg.output_dir) / "fig4.csv");
    out.row(header);
    for (const double nm : occupations) {
        std::vector<std::string> cells{num17(nm)};
        for (const double c2 : coops)
            cells.push_back(
                num17(quad_coeffs_from_c2(p.kappa, p.n_bar_o, c2, nm).kappa_eff));
        cells.push_back(
            num17(lin_coeffs_from_c1(p.kappa, p.n_bar_o, c1, nm).kappa_eff));
        out.row(cells);
    }
    out.finish();

    json slopes;
    for (const double c2 : coops)
        slopes["c2_" + axis_label(c2)] = 2.0 * p.kappa * c2;
    json derived;
    derived["quad_slopes"] = slopes;
    derived["lin_kappa_eff"] = p.kappa * (1.0 + c1);

    json grids;
    grids["n_bar_m"] = grid_echo(occupations);
    grids["c2"] = grid_echo(coops);
    return finalize(cfg, t0, derived, grids, {"fig4.csv"}, {});
}

RunSummary run_fig5(const ScenarioConfig& cfg, Clock::time_point t0) {
    const SystemParams& p = cfg.params;
    const std::vector<double> occupations =
        cfg.grids.at("n_bar_m").materialize();
    const std::vector<double> coops = cfg.grids.at("c1").materialize();

    CsvFile out(std::filesystem::path(cfg.output_dir) / "fig5.csv");
    out.row({"n_bar_m(dimensionless)", "c1(dimensionless)", "n_ss(photons)"});
    for (const double nm : occupations)
        for (const double c1 : coops)
            out.row({num17(nm), num17(c1),
                     num17(lin_coeffs_from_c1(p.kappa, p.n_bar_o, c1, nm).n_ss)});
    out.finish();

    json derived;
    derived["n_m_crit_lin"] = n_m_crit_lin(p.n_bar_o);

    json grids;
    grids["n_bar_m"] = grid_echo(occupations);
    grids["c1"] = grid_echo(coops);
    return finalize(cfg, t0, derived, grids, {"fig5.csv"}, {});
}

RunSummary run_compare(const ScenarioConfig& cfg, Clock::time_point t0) {
    const SystemParams& p = cfg.params;
    const double c2 = cfg.options.c2;
    const std::vector<double> ratios =
        cfg.grids.at("gamma_over_kappa").materialize();
    std::vector<std::string> warnings;
    warn_mech_truncation(p.n_bar_m, cfg.dims.n_mech, warnings);

    const OperatorMatrix photon_number =
        tensor(number_op(cfg.dims.n_cav), identity_op(cfg.dims.n_mech));

    CsvFile out(std::filesystem::path(cfg.output_dir) / "compare.csv");
    out.row({"gamma_over_kappa(dimensionless)", "n_ss_full(photons)",
             "n_ss_closed(photons)", "rel_error(dimensionless)"});
    json rows = json::array();
    double prev_err = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (const double ratio : ratios) {
        const double gamma = ratio * p.kappa;
        const double g2 = coupling_for_cooperativity(c2, gamma, p.kappa);
        SystemParams pr = p;
        pr.gamma = gamma;
        pr.g0_quad = g2;
        const LindbladModel model = build_full_rwa_model(pr, cfg.dims, 1.0);
        const OperatorMatrix rho_ss = steady_state(model);
        warn_cavity_truncation(rho_ss, cfg.dims, warnings,
                               "gamma/kappa = " + num_short(ratio));

        const double n_full = expectation(photon_number, rho_ss).real();
        const double n_closed =
            quad_coeffs(p.kappa, p.n_bar_o, g2, gamma, p.n_bar_m).n_ss;
        const double rel = std::abs(n_full - n_closed) / n_closed;
        monotone = monotone && (rel < prev_err);
        prev_err = rel;

        out.row({num17(ratio), num17(n_full), num17(n_closed), num17(rel)});
        json r;
        r["gamma_over_kappa"] = ratio;
        r["n_ss_full"] = n_full;
        r["n_ss_closed"] = n_closed;
        r["rel_error"] = rel;
        rows.push_back(r);
    }
    out.finish();

    json derived;
    derived["rows"] = rows;
    derived["rel_error_strictly_decreasing"] = monotone;

    json grids;
    grids["gamma_over_kappa"] = grid_echo(ratios);
    return finalize(cfg, t0, derived, grids, {"compare.csv"}, warnings);
}

RunSummary run_spectrum(const ScenarioConfig& cfg, Clock::time_point t0) {
    const SystemParams& p = cfg.params;
    const ScenarioOptions& opt = cfg.options;
    std::vector<std::string> warnings;

    LindbladModel model;
    EffectiveCoeffs closed;
    double center = 0.0;
    int default_count = 101;
    if (opt.model == "effective") {
        closed = quad_coeffs_from_c2(p.kappa, p.n_bar_o, opt.c2, p.n_bar_m);
        model = build_effective_cavity_model(closed.d_e, closed.d_a, p.delta_c,
                                             cfg.dims.n_cav);
        center = p.delta_c;
        default_count = 401;
    } else if (opt.model == "linear") {
        closed = lin_coeffs_from_c1(p.kappa, p.n_bar_o, opt.c1, p.n_bar_m);
        SystemParams pr = p;
        pr.g1_lin = coupling_for_cooperativity(opt.c1, p.gamma, p.kappa);
        model = build_linear_rwa_model(pr, cfg.dims);
        warn_mech_truncation(p.n_bar_m, cfg.dims.n_mech, warnings);
    } else {
        closed = quad_coeffs_from_c2(p.kappa, p.n_bar_o, opt.c2, p.n_bar_m);
        SystemParams pr = p;
        pr.g0_quad = coupling_for_cooperativity(opt.c2, p.gamma, p.kappa);
        model = build_full_rwa_model(pr, cfg.dims, 1.0);
        warn_mech_truncation(p.n_bar_m, cfg.dims.n_mech, warnings);
        warn_rwa_ratio(pr, 1.0, warnings);
    }

    const std::vector<double> omegas = grid_or(
        cfg, "omega",
        linspace(center - 8.0 * closed.kappa_eff, center + 8.0 * closed.kappa_eff,
                 default_count));
    SpectrumSeries series = spectrum(model, omegas);
    series.meta.model = opt.model;
    series.meta.delta_c = center;
    warn_cavity_truncation(steady_state(model), model.dims, warnings,
                           "model = " + opt.model);

    CsvFile out(std::filesystem::path(cfg.output_dir) / "spectrum.csv");
    out.row({"omega(omega_m_prime)", "spectrum(photons_per_omega_m_prime)"});
    for (std::size_t i = 0; i < series.omega_grid.size(); ++i)
        out.row({num17(series.omega_grid[i]), num17(series.values[i])});
    out.finish();

    const std::size_t peak =
        std::distance(series.values.begin(),
                      std::max_element(series.values.begin(),
                                       series.values.end()));
    json derived;
    derived["model"] = opt.model;
    derived["line_center"] = center;
    derived["kappa_eff_closed"] = closed.kappa_eff;
    derived["n_ss_closed"] = closed.n_ss;
    derived["area_trapezoid"] =
        trapezoid_area(series.omega_grid, series.values);
    derived["peak_omega"] = series.omega_grid[peak];
    derived["peak_value"] = series.values[peak];
    derived["skipped_omegas"] = series.meta.skipped_omegas;

    json grids;
    grids["omega"] = grid_echo(omegas);
    return finalize(cfg, t0, derived, grids, {"spectrum.csv"}, warnings);
}

RunSummary run_thermometry(const ScenarioConfig& cfg, Clock::time_point t0) {
    const SystemParams& p = cfg.params;
    const ScenarioOptions& opt = cfg.options;

    const EffectiveCoeffs truth =
        quad_coeffs_from_c2(p.kappa, p.n_bar_o, opt.c2, p.n_bar_m);
    const std::vector<double> omegas = grid_or(
        cfg, "omega",
        linspace(p.delta_c - 10.0 * truth.kappa_eff,
                 p.delta_c + 10.0 * truth.kappa_eff, 400));
    const SpectrumSeries clean = lorentzian_spectrum(truth, p.delta_c, omegas);

    SpectrumSeries noisy = clean;
    noisy.meta.model = "lorentzian_noisy";
    GaussianSampler draw(cfg.seed);
    for (double& v : noisy.values) v *= 1.0 + opt.noise_level * draw();

    const LorentzianFit fit = fit_lorentzian(noisy);
    double floor_tol = 3.0 * std::sqrt(std::max(0.0, fit.covariance(2, 2)));
    if (!std::isfinite(floor_tol)) floor_tol = 0.0;
    const double n_est =
        infer_phonon_occupation(fit.fwhm, p.kappa, opt.c2, floor_tol);
    const double t_est = infer_temperature(n_est, opt.omega_m_si);
    const double t_true =
        temperature_from_occupation(opt.omega_m_si, p.n_bar_m);

    CsvFile out(std::filesystem::path(cfg.output_dir) / "thermometry.csv");
    out.row({"omega(omega_m_prime)", "spectrum_data(photons_per_omega_m_prime)",
             "spectrum_fit(photons_per_omega_m_prime)"});
    const LorentzianFit* f = &fit;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        const double half = f->fwhm / 2.0;
        const double detune = omegas[i] - f->center;
        const double fitted = f->area / std::numbers::pi * half /
                              (detune * detune + half * half);
        out.row({num17(omegas[i]), num17(noisy.values[i]), num17(fitted)});
    }
    out.finish();

    json derived;
    derived["truth"] = {{"n_bar_m", p.n_bar_m},
                        {"kappa_eff", truth.kappa_eff},
                        {"temperature_kelvin", t_true}};
    derived["estimate"] = {{"fwhm", fit.fwhm},
                           {"fwhm_stderr", std::sqrt(std::max(0.0, fit.covariance(2, 2)))},
                           {"center", fit.center},
                           {"n_bar_m", n_est},
                           {"temperature_kelvin", t_est},
                           {"fit_iterations", fit.iterations}};
    derived["errors"] = {
        {"fwhm_rel", std::abs(fit.fwhm - truth.kappa_eff) / truth.kappa_eff},
        {"n_bar_m_abs", std::abs(n_est - p.n_bar_m)}};

    json grids;
    grids["omega"] = grid_echo(omegas);
    return finalize(cfg, t0, derived, grids, {"thermometry.csv"}, {});
}

}  // namespace

// ---------------------------------------------------------------------------
// names, grids, defaults

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::FIG1: return "fig1";
        case Scenario::FIG2: return "fig2";
        case Scenario::FIG3: return "fig3";
        case Scenario::FIG4: return "fig4";
        case Scenario::FIG5: return "fig5";
        case Scenario::COMPARE: return "compare";
        case Scenario::SPECTRUM: return "spectrum";
        case Scenario::THERMOMETRY: return "thermometry";
    }
    throw ConfigError("unknown scenario enum value");
}

Scenario scenario_from_name(const std::string& name) {
    static const std::map<std::string, Scenario> table{
        {"fig1", Scenario::FIG1},         {"fig2", Scenario::FIG2},
        {"fig3", Scenario::FIG3},         {"fig4", Scenario::FIG4},
        {"fig5", Scenario::FIG5},         {"compare", Scenario::COMPARE},
        {"spectrum", Scenario::SPECTRUM}, {"thermometry", Scenario::THERMOMETRY},
    };
    const auto it = table.find(name);
    if (it == table.end())
        throw ConfigError(
            "unknown scenario '" + name +
            "' (expected fig1..fig5, compare, spectrum, or thermometry)");
    return it->second;
}

std::vector<double> GridSpec::materialize() const {
    if (is_explicit()) return values;
    return linspace(min, max, count);
}

ScenarioConfig default_config(Scenario s) {
    ScenarioConfig cfg;
    cfg.scenario = s;
    cfg.params.omega_m = 1.0;
    cfg.params.delta_c = 0.0;
    cfg.params.kappa = 0.0025;
    cfg.params.gamma = 1.0;
    cfg.params.n_bar_o = 1.0;
    cfg.params.n_bar_m = 0.5;

    switch (s) {
        case Scenario::FIG1:
            cfg.params.g0_quad = 5e-7;
            cfg.grids["delta_c"] = range_grid(-4.5, -0.5, 161);
            cfg.grids["eta"] = range_grid(0.0, 2000.0, 81);
            break;
        case Scenario::FIG2:
            cfg.grids["n_bar_m"] = explicit_grid(with_landmarks(
                linspace(0.0, 5.0, 101),
                {n_m_star(1.0, 1.0), n_m_crit_quad(1.0)}));
            cfg.grids["c2"] = explicit_grid(geomspace(0.1, 10.0, 21));
            break;
        case Scenario::FIG3:
            cfg.params.delta_c = -2.0;
            cfg.dims = HilbertDims{32, 1};
            cfg.grids["n_bar_m"] = explicit_grid(
                {0.0, 0.5, n_m_crit_quad(1.0), 3.6});
            break;
        case Scenario::FIG4:
            cfg.grids["n_bar_m"] = range_grid(0.0, 4.0, 81);
            cfg.grids["c2"] = explicit_grid({0.1, 0.5, 1.0});
            break;
        case Scenario::FIG5:
            cfg.grids["n_bar_m"] = range_grid(0.0, 5.0, 101);
            cfg.grids["c1"] = explicit_grid(geomspace(0.1, 10.0, 21));
            break;
        case Scenario::COMPARE:
            cfg.params.kappa = 1.0;
            cfg.dims = HilbertDims{14, 18};
            cfg.grids["gamma_over_kappa"] = explicit_grid({10.0, 100.0, 400.0});
            break;
        case Scenario::SPECTRUM:
            cfg.params.delta_c = -2.0;
            cfg.dims = HilbertDims{24, 1};
            break;
        case Scenario::THERMOMETRY:
            cfg.params.delta_c = -2.0;
            break;
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// config parsing

namespace {

void expect_keys(const json& obj, const std::set<std::string>& allowed,
                 const std::string& prefix, std::vector<std::string>& errors) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            errors.push_back("unknown key '" + prefix + it.key() + "'");
}

// 0 = any finite, 1 = strictly positive, 2 = non-negative
enum class NumRule { FINITE, POSITIVE, NON_NEGATIVE };

void read_number(const json& obj, const std::string& prefix, const char* key,
                 double& dst, NumRule rule, std::vector<std::string>& errors) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    const std::string where = prefix + key;
    if (!v.is_number()) {
        errors.push_back("'" + where + "' must be a number");
        return;
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        errors.push_back("'" + where + "' must be finite");
        return;
    }
    if (rule == NumRule::POSITIVE && !(x > 0.0)) {
        errors.push_back("'" + where + "' must be > 0");
        return;
    }
    if (rule == NumRule::NON_NEGATIVE && !(x >= 0.0)) {
        errors.push_back("'" + where + "' must be >= 0");
        return;
    }
    dst = x;
}

// minimum-value rule for grid axis entries
NumRule axis_rule(const std::string& axis) {
    if (axis == "n_bar_m" || axis == "c2" || axis == "c1" || axis == "eta")
        return NumRule::NON_NEGATIVE;
    if (axis == "gamma_over_kappa") return NumRule::POSITIVE;
    return NumRule::FINITE;
}

bool check_axis_value(double v, NumRule rule) {
    if (!std::isfinite(v)) return false;
    if (rule == NumRule::POSITIVE) return v > 0.0;
    if (rule == NumRule::NON_NEGATIVE) return v >= 0.0;
    return true;
}

void parse_grid(const json& g, const std::string& axis, GridSpec& dst,
                std::vector<std::string>& errors) {
    const std::string prefix = "grids." + axis;
    if (!g.is_object()) {
        errors.push_back("'" + prefix + "' must be an object");
        return;
    }
    expect_keys(g, {"min", "max", "count", "values"}, prefix + ".", errors);
    const NumRule rule = axis_rule(axis);

    if (g.contains("values")) {
        if (g.contains("min") || g.contains("max") || g.contains("count")) {
            errors.push_back("'" + prefix +
                             "' must use either values or min/max/count, not both");
            return;
        }
        const json& vals = g.at("values");
        if (!vals.is_array() || vals.empty()) {
            errors.push_back("'" + prefix + ".values' must be a non-empty array");
            return;
        }
        GridSpec spec;
        for (const json& v : vals) {
            if (!v.is_number() ||
                !check_axis_value(v.get<double>(), rule)) {
                errors.push_back("'" + prefix +
                                 ".values' entries must be numbers in the axis range");
                return;
            }
            spec.values.push_back(v.get<double>());
        }
        for (std::size_t i = 1; i < spec.values.size(); ++i) {
            if (spec.values[i] <= spec.values[i - 1]) {
                errors.push_back("'" + prefix +
                                 ".values' must be strictly increasing");
                return;
            }
        }
        dst = spec;
        return;
    }

    if (!g.contains("min") || !g.contains("max") || !g.contains("count")) {
        errors.push_back("'" + prefix + "' needs min, max, and count (or values)");
        return;
    }
    GridSpec spec;
    bool ok = true;
    for (const char* key : {"min", "max"}) {
        const json& v = g.at(key);
        if (!v.is_number() || !check_axis_value(v.get<double>(), rule)) {
            errors.push_back("'" + prefix + "." + key +
                             "' must be a number in the axis range");
            ok = false;
        }
    }
    const json& c = g.at("count");
    if (!c.is_number_integer() || c.get<long long>() < 2 ||
        c.get<long long>() > 1000001) {
        errors.push_back("'" + prefix + ".count' must be an integer in [2, 1000001]");
        ok = false;
    }
    if (!ok) return;
    spec.min = g.at("min").get<double>();
    spec.max = g.at("max").get<double>();
    spec.count = static_cast<int>(c.get<long long>());
    if (!(spec.min < spec.max)) {
        errors.push_back("'" + prefix + "' needs min < max");
        return;
    }
    dst = spec;
}

const std::set<std::string>& allowed_axes(Scenario s) {
    static const std::set<std::string> fig1{"delta_c", "eta"};
    static const std::set<std::string> fig2{"n_bar_m", "c2"};
    static const std::set<std::string> fig3{"n_bar_m", "omega"};
    static const std::set<std::string> fig4{"n_bar_m", "c2"};
    static const std::set<std::string> fig5{"n_bar_m", "c1"};
    static const std::set<std::string> compare{"gamma_over_kappa"};
    static const std::set<std::string> omega_only{"omega"};
    switch (s) {
        case Scenario::FIG1: return fig1;
        case Scenario::FIG2: return fig2;
        case Scenario::FIG3: return fig3;
        case Scenario::FIG4: return fig4;
        case Scenario::FIG5: return fig5;
        case Scenario::COMPARE: return compare;
        default: return omega_only;
    }
}

std::string join_errors(const std::vector<std::string>& errors) {
    std::string out = "invalid config (" + std::to_string(errors.size()) +
                      (errors.size() == 1 ? " problem):" : " problems):");
    for (const std::string& e : errors) out += "\n  - " + e;
    return out;
}

}  // namespace

ScenarioConfig parse_config_json(const json& j) {
    std::vector<std::string> errors;
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    expect_keys(j,
                {"schema_version", "scenario", "params", "grids", "dims",
                 "output_dir", "seed", "options"},
                "", errors);

    if (!j.contains("schema_version"))
        errors.push_back("missing required key 'schema_version' (expected 1)");
    else if (!j.at("schema_version").is_number_integer() ||
             j.at("schema_version").get<long long>() != 1)
        errors.push_back("'schema_version' must be the integer 1");

    Scenario sc = Scenario::FIG1;
    bool have_scenario = false;
    if (!j.contains("scenario")) {
        errors.push_back(
            "missing required key 'scenario' (fig1..fig5, compare, spectrum, "
            "or thermometry)");
    } else if (!j.at("scenario").is_string()) {
        errors.push_back("'scenario' must be a string");
    } else {
        try {
            sc = scenario_from_name(j.at("scenario").get<std::string>());
            have_scenario = true;
        } catch (const ConfigError& e) {
            errors.push_back(e.what());
        }
    }
    if (!have_scenario) throw ConfigError(join_errors(errors));

    ScenarioConfig cfg = default_config(sc);

    if (j.contains("params")) {
        const json& p = j.at("params");
        if (!p.is_object()) {
            errors.push_back("'params' must be an object");
        } else {
            expect_keys(p,
                        {"omega_m", "delta_c", "g0_quad", "g1_lin", "kappa",
                         "gamma", "n_bar_o", "n_bar_m", "eta"},
                        "params.", errors);
            read_number(p, "params.", "omega_m", cfg.params.omega_m,
                        NumRule::POSITIVE, errors);
            read_number(p, "params.", "delta_c", cfg.params.delta_c,
                        NumRule::FINITE, errors);
            read_number(p, "params.", "g0_quad", cfg.params.g0_quad,
                        NumRule::NON_NEGATIVE, errors);
            read_number(p, "params.", "g1_lin", cfg.params.g1_lin,
                        NumRule::NON_NEGATIVE, errors);
            read_number(p, "params.", "kappa", cfg.params.kappa,
                        NumRule::POSITIVE, errors);
            read_number(p, "params.", "gamma", cfg.params.gamma,
                        NumRule::POSITIVE, errors);
            read_number(p, "params.", "n_bar_o", cfg.params.n_bar_o,
                        NumRule::NON_NEGATIVE, errors);
            read_number(p, "params.", "n_bar_m", cfg.params.n_bar_m,
                        NumRule::NON_NEGATIVE, errors);
            if (p.contains("eta")) {
                const json& e = p.at("eta");
                if (e.is_number() && std::isfinite(e.get<double>())) {
                    cfg.params.eta = Complex(e.get<double>(), 0.0);
                } else if (e.is_array() && e.size() == 2 &&
                           e.at(0).is_number() && e.at(1).is_number() &&
                           std::isfinite(e.at(0).get<double>()) &&
                           std::isfinite(e.at(1).get<double>())) {
                    cfg.params.eta =
                        Complex(e.at(0).get<double>(), e.at(1).get<double>());
                } else {
                    errors.push_back(
                        "'params.eta' must be a finite number or [re, im]");
                }
            }
        }
    }

    if (j.contains("grids")) {
        const json& g = j.at("grids");
        if (!g.is_object()) {
            errors.push_back("'grids' must be an object");
        } else {
            const std::set<std::string>& axes = allowed_axes(sc);
            for (auto it = g.begin(); it != g.end(); ++it) {
                if (!axes.count(it.key())) {
                    errors.push_back("unknown key 'grids." + it.key() +
                                     "' for scenario " + scenario_name(sc));
                    continue;
                }
                parse_grid(it.value(), it.key(), cfg.grids[it.key()], errors);
            }
        }
    }

    if (j.contains("dims")) {
        const json& d = j.at("dims");
        if (!d.is_object()) {
            errors.push_back("'dims' must be an object");
        } else {
            expect_keys(d, {"n_cav", "n_mech"}, "dims.", errors);
            for (const char* key : {"n_cav", "n_mech"}) {
                if (!d.contains(key)) continue;
                const json& v = d.at(key);
                if (!v.is_number_integer() || v.get<long long>() < 1 ||
                    v.get<long long>() > 100000) {
                    errors.push_back(std::string("'dims.") + key +
                                     "' must be an integer in [1, 100000]");
                    continue;
                }
                (std::string(key) == "n_cav" ? cfg.dims.n_cav
                                             : cfg.dims.n_mech) =
                    static_cast<int>(v.get<long long>());
            }
        }
    }

    if (j.contains("output_dir")) {
        const json& o = j.at("output_dir");
        if (!o.is_string() || o.get<std::string>().empty())
            errors.push_back("'output_dir' must be a non-empty string");
        else
            cfg.output_dir = o.get<std::string>();
    }

    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (s.is_number_unsigned())
            cfg.seed = s.get<std::uint64_t>();
        else if (s.is_number_integer() && s.get<long long>() >= 0)
            cfg.seed = static_cast<std::uint64_t>(s.get<long long>());
        else
            errors.push_back("'seed' must be a non-negative integer");
    }

    if (j.contains("options")) {
        const json& o = j.at("options");
        if (!o.is_object()) {
            errors.push_back("'options' must be an object");
        } else {
            expect_keys(o, {"c2", "c1", "model", "noise_level", "omega_m_si"},
                        "options.", errors);
            read_number(o, "options.", "c2", cfg.options.c2, NumRule::POSITIVE,
                        errors);
            read_number(o, "options.", "c1", cfg.options.c1, NumRule::POSITIVE,
                        errors);
            read_number(o, "options.", "omega_m_si", cfg.options.omega_m_si,
                        NumRule::POSITIVE, errors);
            if (o.contains("noise_level")) {
                double nl = cfg.options.noise_level;
                read_number(o, "options.", "noise_level", nl,
                            NumRule::NON_NEGATIVE, errors);
                if (nl > 0.5)
                    errors.push_back("'options.noise_level' must be <= 0.5");
                else
                    cfg.options.noise_level = nl;
            }
            if (o.contains("model")) {
                const json& m = o.at("model");
                if (!m.is_string() ||
                    (m.get<std::string>() != "effective" &&
                     m.get<std::string>() != "linear" &&
                     m.get<std::string>() != "full"))
                    errors.push_back(
                        "'options.model' must be one of effective, linear, full");
                else
                    cfg.options.model = m.get<std::string>();
            }
        }
    }

    // a joint model needs mechanics; pick truncations to match the model
    // when the config does not pin them
    if (sc == Scenario::SPECTRUM && !j.contains("dims")) {
        if (cfg.options.model == "linear")
            cfg.dims = HilbertDims{12, 16};
        else if (cfg.options.model == "full")
            cfg.dims = HilbertDims{8, 18};
    }

    if (!errors.empty()) throw ConfigError(join_errors(errors));
    return cfg;
}

ScenarioConfig validate_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    return parse_config_json(j);
}

RunSummary run(const ScenarioConfig& cfg) {
    const auto t0 = Clock::now();
    try {
        std::filesystem::create_directories(cfg.output_dir);
    } catch (const std::filesystem::filesystem_error& e) {
        throw ConfigError("cannot create output directory '" + cfg.output_dir +
                          "': " + e.what());
    }
    switch (cfg.scenario) {
        case Scenario::FIG1: return run_fig1(cfg, t0);
        case Scenario::FIG2: return run_fig2(cfg, t0);
        case Scenario::FIG3: return run_fig3(cfg, t0);
        case Scenario::FIG4: return run_fig4(cfg, t0);
        case Scenario::FIG5: return run_fig5(cfg, t0);
        case Scenario::COMPARE: return run_compare(cfg, t0);
        case Scenario::SPECTRUM: return run_spectrum(cfg, t0);
        case Scenario::THERMOMETRY: return run_thermometry(cfg, t0);
    }
    throw ConfigError("unknown scenario enum value");
}

}  // namespace revdis
