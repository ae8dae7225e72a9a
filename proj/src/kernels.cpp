#include "revdis/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "revdis/errors.hpp"

namespace revdis {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

CsrMatrix CsrMatrix::from_sparse(const SuperOpMatrix& m) {
    CsrMatrix out;
    out.rows = static_cast<int>(m.rows());
    out.cols = static_cast<int>(m.cols());
    out.row_start.assign(out.rows + 1, 0);
    for (int k = 0; k < m.outerSize(); ++k)
        for (SuperOpMatrix::InnerIterator it(m, k); it; ++it)
            ++out.row_start[it.row() + 1];
    for (int r = 0; r < out.rows; ++r) out.row_start[r + 1] += out.row_start[r];
    out.col_index.resize(out.row_start[out.rows]);
    out.value.resize(out.row_start[out.rows]);
    // column-major traversal fills each row in ascending column order
    std::vector<std::int64_t> cursor(out.row_start.begin(), out.row_start.end() - 1);
    for (int k = 0; k < m.outerSize(); ++k)
        for (SuperOpMatrix::InnerIterator it(m, k); it; ++it) {
            std::int64_t& pos = cursor[it.row()];
            out.col_index[pos] = static_cast<int>(it.col());
            out.value[pos] = it.value();
            ++pos;
        }
    return out;
}

double CsrMatrix::inf_norm() const {
    double best = 0.0;
    for (int r = 0; r < rows; ++r) {
        double s = 0.0;
        for (std::int64_t k = row_start[r]; k < row_start[r + 1]; ++k)
            s += std::abs(value[k]);
        if (s > best) best = s;
    }
    return best;
}

namespace {

inline Complex csr_row_dot(const CsrMatrix& a, int r, const Complex* x) {
    Complex s(0.0, 0.0);
    for (std::int64_t k = a.row_start[r]; k < a.row_start[r + 1]; ++k)
        s += a.value[k] * x[a.col_index[k]];
    return s;
}

}  // namespace

void csr_matvec_serial(const CsrMatrix& a, const Complex* x, Complex* y) {
    for (int r = 0; r < a.rows; ++r) y[r] = csr_row_dot(a, r, x);
}

void csr_matvec_omp(const CsrMatrix& a, const Complex* x, Complex* y) {
#pragma omp parallel for schedule(static)
    for (int r = 0; r < a.rows; ++r) y[r] = csr_row_dot(a, r, x);
}

void csr_matvec(const CsrMatrix& a, const Complex* x, Complex* y) {
#ifdef _OPENMP
    csr_matvec_omp(a, x, y);
#else
    csr_matvec_serial(a, x, y);
#endif
}

namespace {

inline void kron_row_block(const OperatorMatrix& a, const OperatorMatrix& b,
                           OperatorMatrix& out, int i) {
    const auto p = b.rows();
    const auto q = b.cols();
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        out.block(i * p, j * q, p, q) = a(i, j) * b;
}

}  // namespace

OperatorMatrix kron_serial(const OperatorMatrix& a, const OperatorMatrix& b) {
    OperatorMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i) kron_row_block(a, b, out, i);
    return out;
}

OperatorMatrix kron_omp(const OperatorMatrix& a, const OperatorMatrix& b) {
    OperatorMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    const int n = static_cast<int>(a.rows());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) kron_row_block(a, b, out, i);
    return out;
}

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
#ifdef _OPENMP
    return kron_omp(a, b);
#else
    return kron_serial(a, b);
#endif
}

namespace {

struct RhsTerms {
    const OperatorMatrix& h;
    const OperatorMatrix& rho;
    std::vector<OperatorMatrix> c_dag;
    std::vector<OperatorMatrix> cdc;
};

RhsTerms prepare_rhs(const OperatorMatrix& h, const std::vector<CollapseTerm>& terms,
                     const OperatorMatrix& rho) {
    if (h.rows() != h.cols() || rho.rows() != rho.cols() || h.rows() != rho.rows())
        throw DimensionError("lindblad_rhs: H and rho must be square with equal dims");
    RhsTerms pre{h, rho, {}, {}};
    pre.c_dag.reserve(terms.size());
    pre.cdc.reserve(terms.size());
    for (const CollapseTerm& t : terms) {
        if (t.op.rows() != h.rows() || t.op.cols() != h.cols())
            throw DimensionError("lindblad_rhs: collapse operator dimension mismatch");
        pre.c_dag.push_back(t.op.adjoint());
        pre.cdc.push_back(pre.c_dag.back() * t.op);
    }
    return pre;
}

// one output column; the serial and parallel drivers share this exactly
inline void rhs_column(const RhsTerms& pre, const std::vector<CollapseTerm>& terms,
                       Eigen::Index j, OperatorMatrix& out) {
    const Complex mi(0.0, -1.0);
    ComplexVector col = mi * (pre.h * pre.rho.col(j) - pre.rho * pre.h.col(j));
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const ComplexVector sandwich = terms[k].op * (pre.rho * pre.c_dag[k].col(j));
        const ComplexVector anti =
            0.5 * (pre.cdc[k] * pre.rho.col(j) + pre.rho * pre.cdc[k].col(j));
        col += terms[k].rate * (sandwich - anti);
    }
    out.col(j) = col;
}

}  // namespace

OperatorMatrix lindblad_rhs_serial(const OperatorMatrix& h,
                                   const std::vector<CollapseTerm>& terms,
                                   const OperatorMatrix& rho) {
    const RhsTerms pre = prepare_rhs(h, terms, rho);
    OperatorMatrix out(rho.rows(), rho.cols());
    for (Eigen::Index j = 0; j < rho.cols(); ++j) rhs_column(pre, terms, j, out);
    return out;
}

OperatorMatrix lindblad_rhs_omp(const OperatorMatrix& h,
                                const std::vector<CollapseTerm>& terms,
                                const OperatorMatrix& rho) {
    const RhsTerms pre = prepare_rhs(h, terms, rho);
    OperatorMatrix out(rho.rows(), rho.cols());
    const int n = static_cast<int>(rho.cols());
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) rhs_column(pre, terms, j, out);
    return out;
}

}  // namespace revdis
