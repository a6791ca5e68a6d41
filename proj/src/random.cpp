#include "infospec/random.hpp"

#include <algorithm>
#include <cmath>

namespace infospec {

FiniteMeasure random_probability(Rng& rng, size_t m, double floor) {
    if (m == 0) throw InputError("empty alphabet");
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> w(m);
    double s = 0.0;
    for (double& x : w) {
        x = ex(rng) + floor;
        s += x;
    }
    for (double& x : w) x /= s;
    return FiniteMeasure::probability(std::move(w));
}

std::pair<FiniteMeasure, FiniteMeasure> random_binary_pair(Rng& rng, double lo) {
    std::uniform_real_distribution<double> u(lo, 1.0 - lo);
    double p = u(rng), q = u(rng);
    return {FiniteMeasure::probability({p, 1.0 - p}), FiniteMeasure::probability({q, 1.0 - q})};
}

namespace {

Matrix gaussian_matrix(Rng& rng, int rows, int cols) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            double re = g(rng);
            double im = g(rng);
            m(i, j) = cplx(re, im);
        }
    return m;
}

}  // namespace

HermitianOperator random_hermitian(Rng& rng, int dim) {
    Matrix g = gaussian_matrix(rng, dim, dim);
    return HermitianOperator::symmetrized(0.5 * (g + g.adjoint()));
}

DensityOperator random_density(Rng& rng, int dim, int rank) {
    if (rank <= 0) rank = dim;
    Matrix g = gaussian_matrix(rng, dim, rank);
    Matrix r = g * g.adjoint();
    r /= r.trace().real();
    return DensityOperator(HermitianOperator::symmetrized(r));
}

QuantumTest random_quantum_test(Rng& rng, int dim) {
    SpectralDecomposition sd = spectral_decompose(random_hermitian(rng, dim));
    const double lo = sd.eigenvalues.minCoeff(), hi = sd.eigenvalues.maxCoeff();
    RealVector e(dim);
    for (int i = 0; i < dim; ++i) e(i) = hi > lo ? (sd.eigenvalues(i) - lo) / (hi - lo) : 0.5;
    Matrix t = sd.eigenvectors * e.cast<cplx>().asDiagonal() * sd.eigenvectors.adjoint();
    // rounding can leave eigenvalues a few ulps outside [0, 1]
    return QuantumTest(HermitianOperator::symmetrized(t));
}

ClassicalTest random_classical_test(Rng& rng, size_t m, bool randomized) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> t(m);
    for (double& x : t) x = randomized ? u(rng) : (u(rng) < 0.5 ? 0.0 : 1.0);
    return ClassicalTest(std::move(t));
}

StepRates random_step_rates(Rng& rng, const std::vector<double>& grid, int max_letters) {
    if (grid.size() < 2) throw InputError("step rates need a grid of two or more points");
    std::uniform_int_distribution<int> letters(1, std::max(1, max_letters));
    std::uniform_real_distribution<double> loc(grid.front(), grid.back());
    std::uniform_real_distribution<double> expo(0.0, 1.5);
    StepRates s;
    const int J = letters(rng);
    for (int j = 0; j < J; ++j) {
        s.z.push_back(loc(rng));
        s.u.push_back(j == 0 ? 0.0 : expo(rng));
    }
    const size_t N = grid.size();
    std::vector<double> eta(N, kInf), zeta(N, kInf), zeta_c(N, kInf);
    for (size_t i = 0; i < N; ++i)
        for (int j = 0; j < J; ++j) {
            if (s.z[j] <= grid[i]) {
                eta[i] = std::min(eta[i], s.u[j]);
                zeta_c[i] = std::min(zeta_c[i], s.u[j] + s.z[j]);
            } else {
                zeta[i] = std::min(zeta[i], s.u[j] + s.z[j]);
            }
        }
    s.eta = RateFunction(grid, std::move(eta), RateKind::EtaLower);
    s.zeta = RateFunction(grid, std::move(zeta), RateKind::ZetaLower);
    s.zeta_c = RateFunction(grid, std::move(zeta_c), RateKind::ZetaCUpper);
    return s;
}

}  // namespace infospec
