#include "revdis/adiabatic.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "revdis/errors.hpp"
#include "revdis/kernels.hpp"
#include "revdis/lindblad.hpp"
#include "revdis/operators.hpp"
#include "revdis/random.hpp"

namespace revdis {

Eigen::Matrix3d m_matrix(double gamma, double n_bar_m) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw DomainError("m_matrix: gamma must be > 0");
    if (!(n_bar_m >= 0.0) || !std::isfinite(n_bar_m))
        throw DomainError("m_matrix: n_bar_m must be >= 0");
    const double g = gamma, n = n_bar_m;
    Eigen::Matrix3d m;
    m << g * (2.0 * n + 1.0), -2.0 * g * (n + 1.0), 0.0,
         g * n,                0.0,                 -g * (n + 1.0),
         0.0,                  2.0 * g * n,         -g * (2.0 * n + 1.0);
    return m;
}

// ---------------------------------------------------------------------------
// scaling-and-squaring Pade-13 exponential (Higham's coefficients)

Eigen::MatrixXd real_expm(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols())
        throw DimensionError("real_expm: matrix must be square");
    if (!a.allFinite())
        throw DomainError("real_expm: matrix has non-finite entries");

    static const double b[14] = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};
    const double theta13 = 5.371920351148152;

    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
    int s = 0;
    if (norm > theta13)
        s = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    const Eigen::MatrixXd x = a / std::pow(2.0, s);

    const Eigen::Index n = a.rows();
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd x2 = x * x;
    const Eigen::MatrixXd x4 = x2 * x2;
    const Eigen::MatrixXd x6 = x4 * x2;
    const Eigen::MatrixXd u =
        x * (x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 +
             b[5] * x4 + b[3] * x2 + b[1] * eye);
    const Eigen::MatrixXd v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) +
                              b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * eye;

    Eigen::MatrixXd r = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < s; ++i) r = r * r;
    return r;
}

Eigen::Matrix3d s_matrix(double gamma, double n_bar_m, double t) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw DomainError("s_matrix: t must be finite and >= 0");
    const Eigen::MatrixXd e = real_expm(m_matrix(gamma, n_bar_m) * t);
    return Eigen::Matrix3d(e);
}

// ---------------------------------------------------------------------------

namespace {

// random density matrix supported on the lowest `support` Fock levels,
// embedded in an n-level space; keeping the support low-lying leaves the
// brute-force propagation far from the truncation edge
OperatorMatrix random_low_state(GaussianSampler& draw, int n, int support) {
    OperatorMatrix r = OperatorMatrix::Zero(n, n);
    for (int i = 0; i < support; ++i)
        for (int j = 0; j < support; ++j) r(i, j) = draw.complex_normal();
    OperatorMatrix rho = OperatorMatrix::Zero(n, n);
    rho.topLeftCorner(support, support) =
        r.topLeftCorner(support, support) *
        r.topLeftCorner(support, support).adjoint();
    rho /= rho.trace().real();
    return rho;
}

}  // namespace

double verify_superop_evolution(HilbertDims dims, double gamma, double n_bar_m,
                                double t) {
    const int n = dims.n_mech;
    if (n < 4)
        throw DimensionError("verify_superop_evolution: needs n_mech >= 4");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw DomainError("verify_superop_evolution: gamma must be > 0");
    if (!(n_bar_m >= 0.0) || !std::isfinite(n_bar_m))
        throw DomainError("verify_superop_evolution: n_bar_m must be >= 0");
    if (!(t >= 0.0) || !std::isfinite(t))
        throw DomainError("verify_superop_evolution: t must be finite and >= 0");
    if (n_bar_m > 0.0) {
        const double r = n_bar_m / (1.0 + n_bar_m);
        if (std::pow(r, n) > 1e-3)
            throw TruncationError(
                "verify_superop_evolution: mechanical truncation too small for "
                "n_bar_m = " + std::to_string(n_bar_m),
                thermal_truncation_for_tail(n_bar_m, 1e-8));
    }

    const OperatorMatrix b = annihilation(n);
    const OperatorMatrix bd = b.adjoint();
    const OperatorMatrix b2 = b * b;
    const OperatorMatrix bd2 = bd * bd;
    std::vector<CollapseTerm> terms{{gamma * (n_bar_m + 1.0), b},
                                    {gamma * n_bar_m, bd}};
    const CsrMatrix l = CsrMatrix::from_sparse(
        vectorize_generator(OperatorMatrix::Zero(n, n), terms));
    const Eigen::Matrix3d s = s_matrix(gamma, n_bar_m, t);

    const auto propagate = [&](const OperatorMatrix& op) {
        return unvec(propagate_vectorized(l, vec(op), t, 1e-11), n);
    };

    GaussianSampler draw(0x5eed0137u);
    const int support = std::max(2, n / 3);
    double worst = 0.0;
    for (int sample = 0; sample < 6; ++sample) {
        const OperatorMatrix rho = random_low_state(draw, n, support);
        const OperatorMatrix evolved = propagate(rho);

        const OperatorMatrix lhs_raise = bd2 * evolved;
        const OperatorMatrix rhs_raise = propagate(
            (s(0, 0) * bd2 * rho + s(0, 1) * bd * rho * bd + s(0, 2) * rho * bd2)
                .eval());
        worst = std::max(worst,
                         (lhs_raise - rhs_raise).cwiseAbs().maxCoeff());

        const OperatorMatrix lhs_lower = b2 * evolved;
        const OperatorMatrix rhs_lower = propagate(
            (s(2, 0) * rho * b2 + s(2, 1) * b * rho * b + s(2, 2) * b2 * rho)
                .eval());
        worst = std::max(worst,
                         (lhs_lower - rhs_lower).cwiseAbs().maxCoeff());
    }
    return worst;
}

std::pair<double, double> markov_coefficient_check(double g2, double gamma,
                                                   double n_bar_m) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw DomainError("markov_coefficient_check: gamma must be > 0");
    if (!(n_bar_m >= 0.0) || !std::isfinite(n_bar_m))
        throw DomainError("markov_coefficient_check: n_bar_m must be >= 0");
    if (!std::isfinite(g2) || g2 < 0.0)
        throw DomainError("markov_coefficient_check: g2 must be >= 0");
    // 2 g2^2 * (2 x^2) * integral_0^inf e^{-gamma s} ds = 4 g2^2 x^2 / gamma
    const double base = 4.0 * g2 * g2 / gamma;
    return {base * (n_bar_m + 1.0) * (n_bar_m + 1.0),
            base * n_bar_m * n_bar_m};
}

}  // namespace revdis
