#pragma once

// Low-level numeric kernels. Every OpenMP kernel has a serial twin with
// identical per-element arithmetic: parallel loops only split disjoint
// output ranges and keep each row's reduction order fixed, so results are
// bit-identical to the serial kernels at any thread count.

#include <cstdint>
#include <vector>

#include "revdis/types.hpp"

namespace revdis {

// number of OpenMP threads a parallel region would use (1 without OpenMP)
int max_threads();

// Compressed-sparse-row mirror of a column-major sparse matrix, used on the
// repeated-matvec paths (time stepping, residual checks). Factorizations
// keep using the column-major original.
struct CsrMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::int64_t> row_start;  // rows+1 offsets
    std::vector<int> col_index;
    std::vector<Complex> value;

    std::int64_t nnz() const { return static_cast<std::int64_t>(value.size()); }
    static CsrMatrix from_sparse(const SuperOpMatrix& m);

    // max absolute row sum
    double inf_norm() const;
};

// y = A x (x and y must not alias)
void csr_matvec_serial(const CsrMatrix& a, const Complex* x, Complex* y);
void csr_matvec_omp(const CsrMatrix& a, const Complex* x, Complex* y);
void csr_matvec(const CsrMatrix& a, const Complex* x, Complex* y);

// Kronecker product, parallelized over rows of the left factor
OperatorMatrix kron_serial(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix kron_omp(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b);

// Dense column-at-a-time evaluation of
//   drho = -i[H, rho] + sum_k rate_k (C rho C^+ - {C^+ C, rho}/2),
// the reference oracle for the vectorized generator and a benchmark load.
OperatorMatrix lindblad_rhs_serial(const OperatorMatrix& h,
                                   const std::vector<CollapseTerm>& terms,
                                   const OperatorMatrix& rho);
OperatorMatrix lindblad_rhs_omp(const OperatorMatrix& h,
                                const std::vector<CollapseTerm>& terms,
                                const OperatorMatrix& rho);

}  // namespace revdis
