#include "revdis/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include "revdis/errors.hpp"
#include "revdis/operators.hpp"

namespace revdis {

namespace {

// Tr(A X) without forming the product
Complex trace_of_product(const OperatorMatrix& a, const OperatorMatrix& x) {
    return a.transpose().cwiseProduct(x).sum();
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw ModelError(std::string("SystemParams: ") + name + " must be > 0");
}

void require_non_negative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw ModelError(std::string("SystemParams: ") + name + " must be >= 0");
}

// mechanical truncation must hold the bath occupation; hard failure only
// when the thermal tail is clearly inadequate (>1e-3), since pinned smaller
// truncations are legitimate for convergence studies (adequacy to 1e-8 is
// reported at the scenario layer)
void check_mech_truncation(double n_bar_m, int n_mech) {
    if (n_bar_m == 0.0) return;
    const double r = n_bar_m / (1.0 + n_bar_m);
    if (std::pow(r, n_mech) > 1e-3) {
        const int need = thermal_truncation_for_tail(n_bar_m, 1e-8);
        throw TruncationError(
            "mechanical truncation " + std::to_string(n_mech) +
                " cannot hold bath occupation " + std::to_string(n_bar_m) +
                " (thermal tail > 1e-3); the 1e-8 tail rule needs " +
                std::to_string(need),
            need);
    }
}

std::vector<CollapseTerm> thermal_dissipators(const SystemParams& p,
                                              const OperatorMatrix& a,
                                              const OperatorMatrix& b) {
    return {
        {p.kappa * (p.n_bar_o + 1.0), a},
        {p.kappa * p.n_bar_o, a.adjoint()},
        {p.gamma * (p.n_bar_m + 1.0), b},
        {p.gamma * p.n_bar_m, b.adjoint()},
    };
}

}  // namespace

void SystemParams::validate() const {
    require_positive(omega_m, "omega_m");
    require_positive(kappa, "kappa");
    require_positive(gamma, "gamma");
    require_non_negative(g0_quad, "g0_quad");
    require_non_negative(g1_lin, "g1_lin");
    require_non_negative(n_bar_o, "n_bar_o");
    require_non_negative(n_bar_m, "n_bar_m");
    if (!std::isfinite(delta_c)) throw ModelError("SystemParams: delta_c must be finite");
    if (!std::isfinite(eta.real()) || !std::isfinite(eta.imag()))
        throw ModelError("SystemParams: eta must be finite");
}

OperatorMatrix LindbladModel::cavity_annihilation() const {
    return tensor(annihilation(dims.n_cav), identity_op(dims.n_mech));
}

OperatorMatrix LindbladModel::mech_annihilation() const {
    if (dims.n_mech < 2)
        throw DimensionError("model has no mechanical mode (n_mech == 1)");
    return tensor(identity_op(dims.n_cav), annihilation(dims.n_mech));
}

LindbladModel make_model(HilbertDims dims, OperatorMatrix hamiltonian,
                         std::vector<CollapseTerm> terms, FrameTag tag) {
    if (tag == FrameTag::CAVITY_ONLY_EFFECTIVE)
        dims.validate_cavity_only();
    else
        dims.validate();
    if (hamiltonian.rows() != dims.joint() || hamiltonian.cols() != dims.joint())
        throw DimensionError("make_model: Hamiltonian dimension does not match dims");
    LindbladModel model;
    model.dims = dims;
    model.generator = vectorize_generator(hamiltonian, terms);
    model.hamiltonian = std::move(hamiltonian);
    model.collapse_terms = std::move(terms);
    model.frame_tag = tag;
    return model;
}

double rwa_shift_ratio(const SystemParams& p, double alpha) {
    const double shift = p.g0_quad * alpha * alpha;
    return shift / (p.omega_m + 2.0 * shift);
}

LindbladModel build_full_rwa_model(const SystemParams& p, HilbertDims dims,
                                   double alpha) {
    p.validate();
    if (!(alpha > 0.0)) throw ModelError("build_full_rwa_model: alpha must be > 0");
    dims.validate();
    check_mech_truncation(p.n_bar_m, dims.n_mech);
    const OperatorMatrix a = tensor(annihilation(dims.n_cav), identity_op(dims.n_mech));
    const OperatorMatrix b = tensor(identity_op(dims.n_cav), annihilation(dims.n_mech));
    const double g2 = p.g0_quad * alpha;
    const OperatorMatrix b2 = b * b;
    OperatorMatrix h = g2 * (a.adjoint() * b2 + b2.adjoint() * a);
    return make_model(dims, std::move(h), thermal_dissipators(p, a, b),
                      FrameTag::RWA_QUADRATIC);
}

LindbladModel build_displaced_model(const SystemParams& p, HilbertDims dims,
                                    double alpha) {
    p.validate();
    if (!(alpha > 0.0)) throw ModelError("build_displaced_model: alpha must be > 0");
    dims.validate();
    check_mech_truncation(p.n_bar_m, dims.n_mech);
    const OperatorMatrix a = tensor(annihilation(dims.n_cav), identity_op(dims.n_mech));
    const OperatorMatrix b = tensor(identity_op(dims.n_cav), annihilation(dims.n_mech));
    const double shift = p.g0_quad * alpha * alpha;
    const double omega_m_prime = p.omega_m + 2.0 * shift;
    const OperatorMatrix x = a + a.adjoint();
    const OperatorMatrix y = b + b.adjoint();
    const OperatorMatrix b2 = b * b;
    OperatorMatrix h = (-p.delta_c) * (a.adjoint() * a) +
                       omega_m_prime * (b.adjoint() * b) -
                       shift * (b2 + b2.adjoint()) +
                       (p.g0_quad * alpha) * (x * y * y);
    return make_model(dims, std::move(h), thermal_dissipators(p, a, b),
                      FrameTag::DISPLACED_FULL);
}

LindbladModel build_linear_rwa_model(const SystemParams& p, HilbertDims dims) {
    p.validate();
    dims.validate();
    check_mech_truncation(p.n_bar_m, dims.n_mech);
    const OperatorMatrix a = tensor(annihilation(dims.n_cav), identity_op(dims.n_mech));
    const OperatorMatrix b = tensor(identity_op(dims.n_cav), annihilation(dims.n_mech));
    OperatorMatrix h = p.g1_lin * (a.adjoint() * b + b.adjoint() * a);
    return make_model(dims, std::move(h), thermal_dissipators(p, a, b),
                      FrameTag::RWA_LINEAR);
}

LindbladModel build_effective_cavity_model(double d_e, double d_a, double delta_c,
                                           int n_cav) {
    if (!(d_a >= 0.0) || !std::isfinite(d_a))
        throw StabilityError("build_effective_cavity_model: D_a must be >= 0");
    if (!(d_e > d_a) || !std::isfinite(d_e))
        throw StabilityError(
            "build_effective_cavity_model: needs D_e > D_a for a steady state, got "
            "D_e = " + std::to_string(d_e) + ", D_a = " + std::to_string(d_a));
    if (n_cav < 2)
        throw DimensionError("build_effective_cavity_model: n_cav must be >= 2");
    const OperatorMatrix a = annihilation(n_cav);
    OperatorMatrix h = (-delta_c) * number_op(n_cav);
    std::vector<CollapseTerm> terms{{d_e, a}, {d_a, a.adjoint()}};
    return make_model(HilbertDims{n_cav, 1}, std::move(h), std::move(terms),
                      FrameTag::CAVITY_ONLY_EFFECTIVE);
}

// ---------------------------------------------------------------------------
// adaptive propagation of vectorized states (Dormand-Prince 5(4))

namespace {

// 5th-order advance weights equal the last stage row, so k7 = f(y_next)
// doubles as the next step's k1 (first-same-as-last)
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187,
                 kA53 = 64448.0 / 6561, kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kA71 = 35.0 / 384, kA73 = 500.0 / 1113, kA74 = 125.0 / 192,
                 kA75 = -2187.0 / 6784, kA76 = 11.0 / 84;
// difference between the 5th- and 4th-order solutions
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

double scaled_error(const ComplexVector& err, const ComplexVector& y0,
                    const ComplexVector& y1, double rtol, double atol) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double scale =
            atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double q = std::abs(err[i]) / scale;
        acc += q * q;
    }
    return std::sqrt(acc / double(err.size()));
}

}  // namespace

ComplexVector propagate_vectorized(const CsrMatrix& l, const ComplexVector& v0,
                                   double t, double rtol) {
    if (l.rows != l.cols || l.rows != v0.size())
        throw DimensionError("propagate_vectorized: dimension mismatch");
    if (!(t >= 0.0) || !std::isfinite(t))
        throw DomainError("propagate_vectorized: time must be finite and >= 0");
    if (!(rtol >= 1e-13 && rtol <= 1e-2))
        throw DomainError("propagate_vectorized: tol must lie in [1e-13, 1e-2]");
    if (t == 0.0) return v0;

    const double l_norm = l.inf_norm();
    if (l_norm == 0.0) return v0;  // zero generator

    const double atol = 1e-14;
    const Eigen::Index n = v0.size();
    ComplexVector y = v0, k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n),
                  stage(n), y_next(n), err(n);
    const auto f = [&l](const ComplexVector& in, ComplexVector& out) {
        csr_matvec(l, in.data(), out.data());
    };

    f(y, k1);
    double time = 0.0;
    double dt = std::min(t, 0.05 / l_norm);
    long steps = 0;
    const long max_steps = 2'000'000;
    while (time < t) {
        dt = std::min(dt, t - time);
        if (dt < t * 1e-14)
            throw StiffnessError(
                "propagate_vectorized: step size underflow (stiff generator); "
                "use steady_state for long-time limits");
        if (++steps > max_steps)
            throw StiffnessError(
                "propagate_vectorized: step budget exhausted (stiff generator); "
                "use steady_state for long-time limits");

        stage = y + dt * (kA21 * k1);
        f(stage, k2);
        stage = y + dt * (kA31 * k1 + kA32 * k2);
        f(stage, k3);
        stage = y + dt * (kA41 * k1 + kA42 * k2 + kA43 * k3);
        f(stage, k4);
        stage = y + dt * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4);
        f(stage, k5);
        stage = y + dt * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5);
        f(stage, k6);
        y_next = y + dt * (kA71 * k1 + kA73 * k3 + kA74 * k4 + kA75 * k5 + kA76 * k6);
        f(y_next, k7);
        err = dt * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);

        const double e = scaled_error(err, y, y_next, rtol, atol);
        if (e <= 1.0) {
            time += dt;
            y.swap(y_next);
            k1.swap(k7);
        }
        const double factor = (e > 0.0) ? 0.9 * std::pow(e, -0.2) : 5.0;
        dt *= std::clamp(factor, 0.2, 5.0);
    }
    return y;
}

ComplexVector propagate_vectorized(const SuperOpMatrix& l, const ComplexVector& v0,
                                   double t, double rtol) {
    return propagate_vectorized(CsrMatrix::from_sparse(l), v0, t, rtol);
}

OperatorMatrix evolve(const LindbladModel& model, const OperatorMatrix& rho0,
                      double t, double tol) {
    const int d = model.dims.joint();
    if (rho0.rows() != d || rho0.cols() != d)
        throw DimensionError("evolve: rho0 dimension does not match the model");
    if (!is_hermitian(rho0, 1e-10))
        throw ModelError("evolve: rho0 is not Hermitian within 1e-10");
    if (std::abs(rho0.trace() - 1.0) > 1e-8)
        throw ModelError("evolve: rho0 trace is not 1 within 1e-8");
    if (t == 0.0) return rho0;
    const CsrMatrix l = CsrMatrix::from_sparse(model.generator);
    const ComplexVector v = propagate_vectorized(l, vec(rho0), t, tol);
    return unvec(v, d);
}

// ---------------------------------------------------------------------------
// steady state by bordered sparse LU

namespace {

using SparseSolver = Eigen::SparseLU<SuperOpMatrix, Eigen::COLAMDOrdering<int>>;

// generator with row 0 replaced by the trace functional
SuperOpMatrix bordered_generator(const SuperOpMatrix& l, int d) {
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(l.nonZeros() + d);
    for (int k = 0; k < l.outerSize(); ++k)
        for (SuperOpMatrix::InnerIterator it(l, k); it; ++it)
            if (it.row() != 0)
                trips.emplace_back(static_cast<int>(it.row()),
                                   static_cast<int>(it.col()), it.value());
    for (int i = 0; i < d; ++i)
        trips.emplace_back(0, i * d + i, Complex(1.0, 0.0));
    SuperOpMatrix out(l.rows(), l.cols());
    out.setFromTriplets(trips.begin(), trips.end());
    out.makeCompressed();
    return out;
}

}  // namespace

OperatorMatrix steady_state(const LindbladModel& model) {
    const int d = model.dims.joint();
    const SuperOpMatrix bordered = bordered_generator(model.generator, d);

    SparseSolver solver;
    solver.analyzePattern(bordered);
    solver.factorize(bordered);
    if (solver.info() != Eigen::Success)
        throw DegenerateSteadyStateError(
            "steady_state: bordered generator is singular (Liouvillian kernel is "
            "not one-dimensional)");
    ComplexVector rhs = ComplexVector::Zero(1LL * d * d);
    rhs[0] = Complex(1.0, 0.0);
    const ComplexVector x = solver.solve(rhs);
    if (solver.info() != Eigen::Success)
        throw SolveError("steady_state: sparse LU back-substitution failed");

    OperatorMatrix rho = unvec(x, d);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const double tr = rho.trace().real();
    if (!(std::abs(tr) > 1e-12))
        throw SolveError("steady_state: solution has vanishing trace");
    rho /= tr;

    // residual contract against the true generator
    const CsrMatrix l = CsrMatrix::from_sparse(model.generator);
    const ComplexVector v = vec(rho);
    ComplexVector resid(v.size());
    csr_matvec(l, v.data(), resid.data());
    const double resid_norm = resid.cwiseAbs().maxCoeff();
    const double l_norm = l.inf_norm();
    if (resid_norm >= 1e-8 * l_norm)
        throw SolveError("steady_state: residual " + std::to_string(resid_norm) +
                         " exceeds 1e-8 * |L| = " + std::to_string(1e-8 * l_norm));

    // positivity: a negative spectrum signals an unstable generator (gain
    // exceeding loss) or a broken truncation
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> eig(rho,
                                                      Eigen::EigenvaluesOnly);
    if (eig.info() == Eigen::Success && eig.eigenvalues().minCoeff() < -1e-8)
        throw StabilityError(
            "steady_state: solution is not positive semidefinite (min eigenvalue " +
            std::to_string(eig.eigenvalues().minCoeff()) +
            "); the generator likely has no physical steady state");
    return rho;
}

std::vector<Complex> two_time_correlation(const LindbladModel& model,
                                          const OperatorMatrix& a_op,
                                          const OperatorMatrix& b_op,
                                          const std::vector<double>& tau_grid) {
    const int d = model.dims.joint();
    if (a_op.rows() != d || a_op.cols() != d || b_op.rows() != d || b_op.cols() != d)
        throw DimensionError("two_time_correlation: operator dims must match model");
    if (tau_grid.empty())
        throw DomainError("two_time_correlation: empty lag grid");
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        if (!(tau_grid[i] >= 0.0) || !std::isfinite(tau_grid[i]))
            throw DomainError("two_time_correlation: lags must be finite and >= 0");
        if (i > 0 && tau_grid[i] <= tau_grid[i - 1])
            throw DomainError("two_time_correlation: lag grid must be strictly increasing");
    }

    const OperatorMatrix rho_ss = steady_state(model);
    const CsrMatrix l = CsrMatrix::from_sparse(model.generator);
    ComplexVector v = vec((b_op * rho_ss).eval());
    std::vector<Complex> out;
    out.reserve(tau_grid.size());
    double reached = 0.0;
    for (const double tau : tau_grid) {
        if (tau > reached) {
            v = propagate_vectorized(l, v, tau - reached, 1e-10);
            reached = tau;
        }
        out.push_back(trace_of_product(a_op, unvec(v, d)));
    }
    return out;
}

SpectrumSeries spectrum(const LindbladModel& model,
                        const std::vector<double>& omega_grid) {
    if (omega_grid.empty()) throw DomainError("spectrum: empty frequency grid");
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        if (!std::isfinite(omega_grid[i]))
            throw DomainError("spectrum: frequencies must be finite");
        if (i > 0 && omega_grid[i] <= omega_grid[i - 1])
            throw DomainError("spectrum: frequency grid must be strictly increasing");
    }

    const int d = model.dims.joint();
    const OperatorMatrix rho_ss = steady_state(model);
    const OperatorMatrix a = model.cavity_annihilation();
    const OperatorMatrix a_dag = a.adjoint();
    const ComplexVector rhs = -vec((a * rho_ss).eval());

    SuperOpMatrix eye(model.generator.rows(), model.generator.cols());
    eye.setIdentity();

    const int n = static_cast<int>(omega_grid.size());
    std::vector<double> values(n, 0.0);
    std::vector<char> solved(n, 0);

    // one symbolic analysis per thread; results land in per-index slots so
    // the output is independent of scheduling
#pragma omp parallel
    {
        SparseSolver solver;
        bool analyzed = false;
#pragma omp for schedule(dynamic)
        for (int i = 0; i < n; ++i) {
            SuperOpMatrix shifted =
                model.generator + Complex(0.0, omega_grid[i]) * eye;
            shifted.makeCompressed();
            if (!analyzed) {
                solver.analyzePattern(shifted);
                analyzed = true;
            }
            solver.factorize(shifted);
            if (solver.info() != Eigen::Success) continue;
            const ComplexVector x = solver.solve(rhs);
            if (solver.info() != Eigen::Success) continue;
            values[i] =
                trace_of_product(a_dag, unvec(x, d)).real() / std::numbers::pi;
            solved[i] = 1;
        }
    }

    SpectrumSeries out;
    out.meta.model = "resolvent";
    out.omega_grid.reserve(n);
    out.values.reserve(n);
    for (int i = 0; i < n; ++i) {
        if (solved[i]) {
            out.omega_grid.push_back(omega_grid[i]);
            out.values.push_back(values[i]);
        } else {
            out.meta.skipped_omegas.push_back(omega_grid[i]);
        }
    }
    if (out.omega_grid.empty())
        throw SolveError("spectrum: resolvent solve failed at every grid point");
    return out;
}

double g2_zero(const OperatorMatrix& rho_ss) {
    if (rho_ss.rows() != rho_ss.cols() || rho_ss.rows() < 2)
        throw DimensionError("g2_zero: state must be square with dim >= 2");
    if (!is_hermitian(rho_ss, 1e-8))
        throw ModelError("g2_zero: state is not Hermitian within 1e-8");
    if (std::abs(rho_ss.trace() - 1.0) > 1e-6)
        throw ModelError("g2_zero: state trace is not 1 within 1e-6");
    double n = 0.0, pairs = 0.0;
    for (Eigen::Index k = 0; k < rho_ss.rows(); ++k) {
        const double pop = rho_ss(k, k).real();
        n += double(k) * pop;
        pairs += double(k) * double(k - 1) * pop;
    }
    if (n <= 1e-12)
        throw DomainError("g2_zero: undefined for (near-)vacuum states");
    return pairs / (n * n);
}

}  // namespace revdis
