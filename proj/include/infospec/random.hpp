#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "infospec/classical.hpp"
#include "infospec/exponents.hpp"
#include "infospec/operator.hpp"
#include "infospec/quantum.hpp"

namespace infospec {

// All generators draw from a caller-owned mt19937_64 so that a run is fixed
// by its seed.
using Rng = std::mt19937_64;

// Uniform on the simplex (normalized exponential draws); every entry >= floor
// before renormalization.
FiniteMeasure random_probability(Rng& rng, size_t m, double floor = 0.0);

// Pair of binary distributions with p(0), q(0) uniform in [lo, 1 - lo].
std::pair<FiniteMeasure, FiniteMeasure> random_binary_pair(Rng& rng, double lo = 0.05);

// (G + G^dag) / 2 with i.i.d. standard complex Gaussian entries.
HermitianOperator random_hermitian(Rng& rng, int dim);

// G G^dag / Tr with G a dim x rank complex Ginibre matrix.
DensityOperator random_density(Rng& rng, int dim, int rank = -1);

// Gaussian Hermitian with its spectrum mapped affinely onto [0, 1].
QuantumTest random_quantum_test(Rng& rng, int dim);

// Acceptance probabilities uniform in [0, 1]; deterministic tests draw 0/1.
ClassicalTest random_classical_test(Rng& rng, size_t m, bool randomized = true);

// Rates of a random "step spectrum": letters j with rho_n(j) = e^{-n u_j} and
// sigma_n(j) = e^{-n (u_j + z_j)}, min u_j = 0. Then, with strict tests,
//   eta(a) = min{u_j : z_j <= a}, zeta(a) = min{u_j + z_j : z_j > a},
//   zeta_c(a) = min{u_j + z_j : z_j <= a}
// are monotone step functions of a genuine pair of sequences, sampled on
// `grid`. Jump locations are drawn strictly inside the grid range.
struct StepRates {
    std::vector<double> z, u;
    RateFunction eta, zeta, zeta_c;
};
StepRates random_step_rates(Rng& rng, const std::vector<double>& grid, int max_letters = 6);

}  // namespace infospec
