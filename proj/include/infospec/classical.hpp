#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "infospec/common.hpp"

namespace infospec {

inline constexpr double kZMergeTol = 1e-12;
inline constexpr long long kDefaultTypeCap = 2000000;

class FiniteMeasure {
public:
    FiniteMeasure() = default;
    FiniteMeasure(std::vector<double> weights, bool normalized);

    static FiniteMeasure probability(std::vector<double> weights) { return {std::move(weights), true}; }
    static FiniteMeasure counting(size_t m) { return {std::vector<double>(m, 1.0), false}; }

    size_t size() const { return w_.size(); }
    const std::vector<double>& weights() const { return w_; }
    double operator[](size_t i) const { return w_[i]; }
    bool normalized() const { return normalized_; }
    double total() const;

private:
    std::vector<double> w_;
    bool normalized_ = false;
};

class ClassicalTest {
public:
    ClassicalTest() = default;
    explicit ClassicalTest(std::vector<double> accept);
    static ClassicalTest constant(size_t m, double v) { return ClassicalTest(std::vector<double>(m, v)); }

    size_t size() const { return accept_.size(); }
    const std::vector<double>& accept() const { return accept_; }
    double operator[](size_t i) const { return accept_[i]; }
    bool deterministic() const;
    size_t accepted_count() const;

private:
    std::vector<double> accept_;
};

struct TieRule {
    enum class Kind { Strict, Nonstrict, Randomized };
    Kind kind = Kind::Strict;
    double p = 0.0;  // acceptance probability on ties when randomized

    static TieRule strict() { return {Kind::Strict, 0.0}; }
    static TieRule nonstrict() { return {Kind::Nonstrict, 1.0}; }
    static TieRule randomized(double p);
    static TieRule from_mode(Mode m) { return m == Mode::Strict ? strict() : nonstrict(); }
};

struct TestEvaluation {
    double alpha = 0.0;
    double beta = 0.0;
    double beta_c = 0.0;
    double eta = kInf;
    double zeta = kInf;
    double zeta_c = kInf;
};

// Fills the exponent fields from probabilities (0 -> +inf).
TestEvaluation make_evaluation(double alpha, double beta, double beta_c, int n);
// Same from log-probabilities; keeps exponents finite when the probability
// itself underflows.
TestEvaluation make_evaluation_log(double log_alpha, double log_beta, double log_beta_c, int n);

// Per-letter normalized log likelihood ratio with the +-inf conventions.
// Returns NaN when both weights vanish.
double llr(double rho_x, double sigma_x, int n);

ClassicalTest classical_np_test(const FiniteMeasure& rho, const FiniteMeasure& sigma, double a, int n,
                                TieRule tie = TieRule::strict());

TestEvaluation evaluate_test(const FiniteMeasure& rho, const FiniteMeasure& sigma, const ClassicalTest& t,
                             int n);

struct SpectrumPoint {
    double z = 0.0;
    double rho_mass = 0.0;
    double sigma_mass = 0.0;
    double log_rho_mass = -kInf;
    double log_sigma_mass = -kInf;
};

struct LLRSpectrum {
    int n = 1;
    std::vector<SpectrumPoint> points;  // z strictly increasing
    bool rho_normalized = true;
    bool sigma_normalized = true;

    double rho_total() const;
    double sigma_total() const;
};

// Number of compositions of n into m parts, C(n+m-1, m-1), as a double.
double type_count(int n, size_t m);

LLRSpectrum iid_spectrum(const FiniteMeasure& rho, const FiniteMeasure& sigma, int n,
                         long long cap = kDefaultTypeCap);

// Builds a spectrum from arbitrary (z, rho_mass, sigma_mass) triples: sorts
// and merges equal z within 1e-12.
LLRSpectrum merge_spectrum(int n, std::vector<SpectrumPoint> pts, bool rho_normalized, bool sigma_normalized);

// Spectrum of the generic measures rho_n, sigma_n given over the full alphabet.
LLRSpectrum spectrum_of(const FiniteMeasure& rho_n, const FiniteMeasure& sigma_n, int n);

TestEvaluation spectrum_alpha_beta(const LLRSpectrum& spec, double a, Mode mode = Mode::Strict);

double kl_divergence(const FiniteMeasure& rho, const FiniteMeasure& sigma);
double classical_psi(const FiniteMeasure& rho, const FiniteMeasure& sigma, double theta);
double binary_divergence(double p, double q);
double shannon_entropy(const FiniteMeasure& p);

ClassicalTest truncate_acceptance_region(const ClassicalTest& s, const FiniteMeasure& rho, size_t target_size);

// n-fold product measure over the slot-major alphabet of size m^n.
FiniteMeasure iid_product(const FiniteMeasure& p, int n, long long cap = 1LL << 24);

// {"weights": [...], "normalized": bool}
FiniteMeasure measure_from_json_text(const std::string& text);
std::string measure_to_json_text(const FiniteMeasure& m);

}  // namespace infospec
