#pragma once

#include <string>
#include <vector>

#include "infospec/classical.hpp"
#include "infospec/cramer.hpp"
#include "infospec/exponents.hpp"

namespace infospec {

// Deterministic fixed-length code over the block alphabet: the accepted
// sequences are encoded one-to-one, everything else is a decoding error.
struct CodingSystem {
    std::vector<size_t> codebook;  // ascending block-alphabet indices
    size_t size = 0;
};

CodingSystem code_from_test(const ClassicalTest& t);
ClassicalTest test_from_code(const CodingSystem& code, size_t alphabet_size);

struct CodeTestReduction {
    CodingSystem code;
    double error = 0.0;        // gamma: P_n-mass outside the codebook
    double size = 0.0;         // |codebook| as a double
    TestEvaluation test_eval;  // evaluation of T against the counting measure
};
// Evaluates the code induced by T under the block distribution p_n.
CodeTestReduction code_test_reduction(const FiniteMeasure& p_n, const ClassicalTest& t, int n);

// Spectrum of z = -(1/n) log P(x^n): rho-masses are probabilities, sigma-masses
// type-class cardinalities.
LLRSpectrum self_information_spectrum(const FiniteMeasure& p, int n, long long cap = kDefaultTypeCap);

struct FiniteRateResult {
    double rate = 0.0;        // inf{a : P{z > a} <= eps}
    double error = 0.0;       // P{z > rate}
    double log_size = 0.0;    // log of the smallest codebook with error <= eps
    double size_rate = 0.0;   // log_size / n
    bool greedy_checked = false;  // sequence-level cross-check was run
};

// Sequence-level greedy check runs when m^n <= greedy_cap; throws
// PropertyFailure if it disagrees with the spectrum.
FiniteRateResult finite_n_rate(const FiniteMeasure& p, double epsilon, int n, long long cap = kDefaultTypeCap,
                               long long greedy_cap = 1LL << 16);

// Finite-n tails of the self-information: -(1/n) log P{z > a} and
// -(1/n) log P{z <= a} in strict mode, P{z >= a} and P{z < a} in nonstrict mode.
struct SelfInformationTails {
    double upper = kInf;
    double lower = kInf;
};
SelfInformationTails self_information_tails(const LLRSpectrum& spec, double a, Mode mode = Mode::Strict);

struct SigmaRates {
    ExponentResult sigma_lower;       // upper tail of z
    ExponentResult sigma_star_upper;  // lower tail of z
};
SigmaRates sigma_rates(const FiniteMeasure& p, double a);

// Grid over [min -log P, max -log P] (a single point when P is uniform on its support).
std::vector<double> self_information_grid(const FiniteMeasure& p, int points);
RateFunction sigma_rate_table(const FiniteMeasure& p, const std::vector<double>& grid, RateKind kind);

// sup{a - sigma(a) : sigma(a) < r} over the table. r > 0.
ExponentResult R_e(const RateFunction& sigma_lower, double r);
ExponentResult R_e(const FiniteMeasure& p, double r, int points = 2001);

// max{b0 - r, 0} with b0 = sup{a : sigma*(a) > r} over the table. r >= 0.
ExponentResult R_e_star(const RateFunction& sigma_star_upper, double r);
ExponentResult R_e_star(const FiniteMeasure& p, double r, int points = 2001);

struct SourceRateRow {
    double epsilon = 0.0;
    int n = 0;
    double rate = 0.0;
};

struct SourceRateReport {
    double H_upper = 0.0;
    double H_lower = 0.0;
    std::vector<SourceRateRow> R_eps_table;
    ExponentResult R_e, R_e_star;
    RateFunction sigma_lower, sigma_star_upper;
};

SourceRateReport source_report(const FiniteMeasure& p, const std::vector<double>& eps_list,
                               const std::vector<int>& n_list, double r, int points = 2001,
                               long long cap = kDefaultTypeCap);

}  // namespace infospec
