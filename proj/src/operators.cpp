#include "revdis/operators.hpp"

#include <cmath>
#include <string>

#include "revdis/errors.hpp"
#include "revdis/kernels.hpp"

namespace revdis {

OperatorMatrix annihilation(int n) {
    if (n < 2) throw DimensionError("annihilation: truncation must be >= 2, got " +
                                    std::to_string(n));
    OperatorMatrix a = OperatorMatrix::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = std::sqrt(double(i + 1));
    return a;
}

OperatorMatrix creation(int n) { return annihilation(n).adjoint(); }

OperatorMatrix identity_op(int n) {
    if (n < 1) throw DimensionError("identity_op: dimension must be >= 1");
    return OperatorMatrix::Identity(n, n);
}

OperatorMatrix number_op(int n) {
    if (n < 2) throw DimensionError("number_op: truncation must be >= 2");
    OperatorMatrix m = OperatorMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = double(i);
    return m;
}

OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols())
        throw DimensionError("tensor: factors must be square");
    const long long joint_dim = 1LL * a.rows() * b.rows();
    if (joint_dim > HilbertDims::joint_dim_limit())
        throw DimensionError("tensor: joint dimension " + std::to_string(joint_dim) +
                             " exceeds the limit " +
                             std::to_string(HilbertDims::joint_dim_limit()) +
                             " (set REVDIS_MAX_DIM to raise it)");
    return kron(a, b);
}

int thermal_truncation_for_tail(double n_bar, double tail) {
    if (n_bar < 0.0) throw DomainError("thermal occupation must be >= 0");
    if (tail <= 0.0 || tail >= 1.0) throw DomainError("tail target must lie in (0, 1)");
    if (n_bar == 0.0) return 2;
    const double r = n_bar / (1.0 + n_bar);
    // smallest n with r^n < tail
    const int n = static_cast<int>(std::floor(std::log(tail) / std::log(r))) + 1;
    return std::max(n, 2);
}

OperatorMatrix thermal_density(double n_bar, int n) {
    if (n < 2) throw DimensionError("thermal_density: truncation must be >= 2");
    if (n_bar < 0.0) throw DomainError("thermal_density: occupation must be >= 0");
    if (n_bar > 0.0) {
        const double r = n_bar / (1.0 + n_bar);
        const double tail = std::pow(r, n);
        if (tail >= 1e-8) {
            const int need = thermal_truncation_for_tail(n_bar, 1e-8);
            throw TruncationError(
                "thermal_density: truncation " + std::to_string(n) +
                    " leaves tail weight " + std::to_string(tail) +
                    " >= 1e-8 for occupation " + std::to_string(n_bar) +
                    "; need at least " + std::to_string(need),
                need);
        }
    }
    OperatorMatrix rho = OperatorMatrix::Zero(n, n);
    if (n_bar == 0.0) {
        rho(0, 0) = 1.0;
        return rho;
    }
    const double r = n_bar / (1.0 + n_bar);
    double w = 1.0 / (1.0 + n_bar);
    double norm = 0.0;
    for (int k = 0; k < n; ++k) {
        rho(k, k) = w;
        norm += w;
        w *= r;
    }
    rho /= norm;
    return rho;
}

Complex expectation(const OperatorMatrix& a, const OperatorMatrix& rho) {
    if (a.rows() != a.cols() || rho.rows() != rho.cols() || a.rows() != rho.rows())
        throw DimensionError("expectation: operator and state dims must match");
    const Complex tr = rho.trace();
    if (std::abs(tr - 1.0) > 1e-6)
        throw DomainError("expectation: state trace " + std::to_string(tr.real()) +
                          " is not 1 within 1e-6");
    return (a * rho).trace();
}

bool is_hermitian(const OperatorMatrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

ComplexVector vec(const OperatorMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("vec: matrix must be square");
    return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

OperatorMatrix unvec(const ComplexVector& v, int dim) {
    if (1LL * dim * dim != v.size())
        throw DimensionError("unvec: vector length is not dim^2");
    return Eigen::Map<const OperatorMatrix>(v.data(), dim, dim);
}

namespace {

using Triplet = Eigen::Triplet<Complex>;

// scale * (A kron B) accumulated as triplets; zero entries skipped
void add_kron_triplets(std::vector<Triplet>& out, const OperatorMatrix& a,
                       const OperatorMatrix& b, Complex scale) {
    const int m = static_cast<int>(b.rows());
    for (int aj = 0; aj < a.cols(); ++aj)
        for (int ai = 0; ai < a.rows(); ++ai) {
            const Complex av = a(ai, aj);
            if (av == Complex(0.0, 0.0)) continue;
            const Complex s = scale * av;
            for (int bj = 0; bj < b.cols(); ++bj)
                for (int bi = 0; bi < b.rows(); ++bi) {
                    const Complex bv = b(bi, bj);
                    if (bv == Complex(0.0, 0.0)) continue;
                    out.emplace_back(ai * m + bi, aj * m + bj, s * bv);
                }
        }
}

}  // namespace

SuperOpMatrix vectorize_generator(const OperatorMatrix& h,
                                  const std::vector<CollapseTerm>& terms) {
    if (h.rows() != h.cols())
        throw DimensionError("vectorize_generator: H must be square");
    if (!is_hermitian(h, 1e-10))
        throw ModelError("vectorize_generator: H is not Hermitian within 1e-10");
    const int d = static_cast<int>(h.rows());
    for (const CollapseTerm& t : terms) {
        if (t.op.rows() != d || t.op.cols() != d)
            throw DimensionError("vectorize_generator: collapse operator dim mismatch");
        if (!(t.rate >= 0.0))
            throw ModelError("vectorize_generator: collapse rate must be >= 0");
    }

    const OperatorMatrix eye = OperatorMatrix::Identity(d, d);
    std::vector<Triplet> trips;
    add_kron_triplets(trips, eye, h, Complex(0.0, -1.0));
    add_kron_triplets(trips, h.transpose(), eye, Complex(0.0, 1.0));
    for (const CollapseTerm& t : terms) {
        if (t.rate == 0.0) continue;
        const OperatorMatrix cdc = t.op.adjoint() * t.op;
        add_kron_triplets(trips, t.op.conjugate(), t.op, Complex(t.rate, 0.0));
        add_kron_triplets(trips, eye, cdc, Complex(-0.5 * t.rate, 0.0));
        add_kron_triplets(trips, cdc.transpose(), eye, Complex(-0.5 * t.rate, 0.0));
    }

    SuperOpMatrix l(1LL * d * d, 1LL * d * d);
    l.setFromTriplets(trips.begin(), trips.end());
    l.prune([](const auto&, const auto&, const Complex& v) {
        return v != Complex(0.0, 0.0);
    });
    l.makeCompressed();
    return l;
}

}  // namespace revdis
