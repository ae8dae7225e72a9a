// timing harness for the parallel kernels against their serial references.
// each pair must agree bit for bit; the table reports the best wall time of
// several repetitions plus the resulting speedup.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <vector>

#include "revdis/kernels.hpp"
#include "revdis/lindblad.hpp"
#include "revdis/operators.hpp"

namespace {

using revdis::Complex;
using revdis::ComplexVector;
using revdis::OperatorMatrix;

double best_ms(int reps, const std::function<void()>& body) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best,
                        std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

OperatorMatrix random_matrix(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    OperatorMatrix m(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m(i, j) = Complex(gauss(rng), gauss(rng));
    return m;
}

bool same_bits(const Complex* a, const Complex* b, std::size_t n) {
    return std::memcmp(a, b, n * sizeof(Complex)) == 0;
}

void report(const char* name, double serial_ms, double omp_ms, bool identical) {
    std::printf("%-22s serial %9.3f ms   omp %9.3f ms   speedup %5.2fx   %s\n",
                name, serial_ms, omp_ms, serial_ms / omp_ms,
                identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", revdis::max_threads());
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);

    // sparse Liouvillian matvec on a full quadratic model
    {
        revdis::SystemParams p;
        p.kappa = 1.0;
        p.gamma = 100.0;
        p.g0_quad = 5.0;
        p.n_bar_o = 1.0;
        p.n_bar_m = 0.5;
        const revdis::LindbladModel model =
            revdis::build_full_rwa_model(p, revdis::HilbertDims{10, 12}, 1.0);
        const revdis::CsrMatrix gen =
            revdis::CsrMatrix::from_sparse(model.generator);
        const std::size_t dim = static_cast<std::size_t>(gen.rows);
        ComplexVector x(dim);
        std::normal_distribution<double> gauss;
        for (std::size_t i = 0; i < dim; ++i)
            x[static_cast<Eigen::Index>(i)] = Complex(gauss(rng), gauss(rng));
        ComplexVector ys(dim), yp(dim);
        const double ts = best_ms(
            200, [&] { revdis::csr_matvec_serial(gen, x.data(), ys.data()); });
        const double tp = best_ms(
            200, [&] { revdis::csr_matvec_omp(gen, x.data(), yp.data()); });
        report("csr_matvec (n=14400)", ts, tp, same_bits(ys.data(), yp.data(), dim));
    }

    // Kronecker product of two dense factors
    {
        const OperatorMatrix a = random_matrix(36, rng);
        const OperatorMatrix b = random_matrix(36, rng);
        OperatorMatrix cs, cp;
        const double ts = best_ms(20, [&] { cs = revdis::kron_serial(a, b); });
        const double tp = best_ms(20, [&] { cp = revdis::kron_omp(a, b); });
        report("kron (36x36 ^ 2)", ts, tp,
               same_bits(cs.data(), cp.data(), static_cast<std::size_t>(cs.size())));
    }

    // dense Lindblad right-hand side
    {
        const int n = 144;
        const OperatorMatrix h = random_matrix(n, rng);
        const OperatorMatrix rho = random_matrix(n, rng);
        std::vector<revdis::CollapseTerm> terms;
        for (int k = 0; k < 4; ++k)
            terms.push_back({0.5 + k, random_matrix(n, rng)});
        OperatorMatrix ds, dp;
        const double ts =
            best_ms(20, [&] { ds = revdis::lindblad_rhs_serial(h, terms, rho); });
        const double tp =
            best_ms(20, [&] { dp = revdis::lindblad_rhs_omp(h, terms, rho); });
        report("lindblad_rhs (n=144)", ts, tp,
               same_bits(ds.data(), dp.data(), static_cast<std::size_t>(ds.size())));
    }

    return 0;
}
