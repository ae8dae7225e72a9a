#pragma once

// Operator algebra on truncated Fock spaces and vectorization of Lindblad
// generators onto column-stacked density matrices.

#include <vector>

#include "revdis/types.hpp"

namespace revdis {

// ladder operator: entry (i, i+1) = sqrt(i+1)
OperatorMatrix annihilation(int n);
OperatorMatrix creation(int n);
OperatorMatrix identity_op(int n);
OperatorMatrix number_op(int n);

// Kronecker product; A acts on the first (cavity) factor, B on the second,
// basis order |i>|k| -> index i*dim(B)+k
OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b);

// Thermal state with mean occupation n_bar, renormalized after truncation.
// Requires the discarded tail (n_bar/(1+n_bar))^n below 1e-8; the error
// carries the smallest adequate truncation.
OperatorMatrix thermal_density(double n_bar, int n);

// smallest truncation with thermal tail (n_bar/(1+n_bar))^n < tail (0 for n_bar=0)
int thermal_truncation_for_tail(double n_bar, double tail);

// Tr(A rho); requires matching dims and Tr(rho) within 1e-6 of one
Complex expectation(const OperatorMatrix& a, const OperatorMatrix& rho);

bool is_hermitian(const OperatorMatrix& a, double tol = 1e-10);

// column stacking: vec(X rho Y) = (Y^T kron X) vec(rho)
ComplexVector vec(const OperatorMatrix& m);
OperatorMatrix unvec(const ComplexVector& v, int dim);

// Sparse matrix L with unvec(L vec(rho)) = -i[H, rho]
//   + sum_k rate_k (C rho C^+ - {C^+ C, rho}/2),
// i.e. -i(I kron H - H^T kron I) plus, per collapse term, rate * (conj(C)
// kron C - (I kron C^+C)/2 - ((C^+C)^T kron I)/2).
SuperOpMatrix vectorize_generator(const OperatorMatrix& h,
                                  const std::vector<CollapseTerm>& terms);

}  // namespace revdis
