#pragma once

// Shared value types for the reversed-dissipation toolkit.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace revdis {

using Complex = std::complex<double>;
using OperatorMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Vectorized generators act on column-stacked density matrices. They are
// stored sparse: at the default joint-dimension limit a dense Liouvillian
// would need tens of gigabytes, while the entry count stays modest. Tests
// densify small instances where entrywise inspection helps.
using SuperOpMatrix = Eigen::SparseMatrix<Complex>;

struct CollapseTerm {
    double rate = 0.0;
    OperatorMatrix op;
};

// Fock truncations: cavity states |0..n_cav-1>, mechanics |0..n_mech-1>.
// Cavity-only models use n_mech = 1 to mean "mechanics absent".
struct HilbertDims {
    int n_cav = 0;
    int n_mech = 0;

    int joint() const { return n_cav * n_mech; }

    // Cap on the joint dimension; the REVDIS_MAX_DIM environment variable
    // overrides the built-in 4096. Liouvillian storage scales as the square
    // of this value.
    static int joint_dim_limit();

    // joint-model contract: both factors >= 2 and joint dim within the limit
    void validate() const;

    // cavity-only contract: n_cav >= 2, n_mech == 1, limit still applies
    void validate_cavity_only() const;
};

struct SpectrumMeta {
    std::string model;                   // generator that produced the data
    double delta_c = 0.0;                // nominal line center
    std::vector<double> skipped_omegas;  // grid points the solver dropped
};

struct SpectrumSeries {
    std::vector<double> omega_grid;  // strictly increasing
    std::vector<double> values;      // >= -1e-10 (numerically non-negative)
    SpectrumMeta meta;
};

}  // namespace revdis
