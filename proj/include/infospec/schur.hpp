#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "infospec/classical.hpp"
#include "infospec/operator.hpp"

namespace infospec {

// Multiplicities are exact doubles up to this n, log-domain above it.
inline constexpr int kExactMultiplicityMaxN = 56;

struct SchurBlock {
    int k = 0;
    int dim = 1;
    double multiplicity = 1.0;      // +inf once it no longer fits a double
    double log_multiplicity = 0.0;
    double log_scale_rho = 0.0;     // -inf when the rho part vanishes
    double log_scale_sigma = 0.0;
    Matrix block_rho;               // max-entry normalized; empty when vanishing
    Matrix block_sigma;
    bool exact_multiplicity = true;

    bool rho_vanishes() const { return log_scale_rho == -kInf; }
    bool sigma_vanishes() const { return log_scale_sigma == -kInf; }
};

struct SchurBlockDecomposition {
    int n = 1;
    std::vector<SchurBlock> blocks;  // k = 0..floor(n/2)
};

struct SchurOptions {
    bool strict_multiplicity = false;  // SizeError instead of log-domain beyond n = 56
    bool corrupt = false;              // wrong sign on det for odd k; self-test use only
};

// Sym^m(A) in the orthonormal symmetric basis.
Matrix sym_power_matrix(const Matrix& a, int m);

// m_{n,k} = C(n,k) - C(n,k-1) as an exact integer; requires n <= 125.
unsigned __int128 exact_multiplicity(int n, int k);
double log_multiplicity(int n, int k);
// sum_k m_{n,k} (n-2k+1) == 2^n in integer arithmetic
bool dimension_identity(int n);

SchurBlockDecomposition build_decomposition(const HermitianOperator& rho, const HermitianOperator& sigma, int n,
                                            const SchurOptions& opts = {});

struct IidEvaluation {
    double g = 0.0;
    TestEvaluation eval;
};

// Ties follow likelihood_band, floored at kRoundingBand times the block's spectral radius.
// `rescale` = false forms Delta_k without factoring out e^s (only safe for
// small n; kept to check that the rescale leaves the projection unchanged).
IidEvaluation fast_iid_evaluation(const SchurBlockDecomposition& dec, double a, Mode mode = Mode::Strict,
                                  bool rescale = true);

// sum_k m_{n,k} e^{s_X} Tr(B_X); equals (Tr X)^n.
double schur_trace(const SchurBlockDecomposition& dec, bool rho);

struct GCurveRow {
    int n = 0;
    double a = 0.0;
    double g = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
};

std::vector<GCurveRow> g_curve(const HermitianOperator& rho, const HermitianOperator& sigma,
                               const std::vector<int>& n_list, const std::vector<double>& a_grid,
                               Mode mode = Mode::Strict);

// Sym-power cache files: 16-byte header ("ISSYM001", uint64 dim) followed by
// dim*dim complex entries as little-endian float64 (re, im) pairs, row-major.
std::string sym_cache_key(const Matrix& a, int n, int k);
void save_sym_cache(const std::string& path, const Matrix& m);
Matrix load_sym_cache(const std::string& path);

}  // namespace infospec
