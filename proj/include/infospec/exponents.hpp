#pragma once

#include <string>
#include <variant>
#include <vector>

#include "infospec/classical.hpp"
#include "infospec/cramer.hpp"
#include "infospec/operator.hpp"
#include "infospec/quantum.hpp"

namespace infospec {

enum class RateKind { EtaLower, ZetaLower, ZetaCUpper, SigmaLower, SigmaStarUpper };

const char* rate_kind_name(RateKind k);
RateKind parse_rate_kind(const std::string& s);
// EtaLower, ZetaCUpper and SigmaStarUpper are nonincreasing; the others nondecreasing.
bool rate_kind_nonincreasing(RateKind k);

class RateFunction {
public:
    RateFunction() = default;
    // Validates: grid finite and strictly ascending, no NaN values, monotone
    // in the direction of `kind` (within 1e-9 relative), and zeta_lower >= a.
    RateFunction(std::vector<double> grid, std::vector<double> values, RateKind kind);
    // Skips the monotonicity and zeta >= a checks (finite-n samples carry
    // rounding noise); use monotone_violation() to inspect them.
    static RateFunction unchecked(std::vector<double> grid, std::vector<double> values, RateKind kind);

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    RateKind kind() const { return kind_; }
    size_t size() const { return grid_.size(); }
    double spacing() const;  // largest grid step
    double monotone_violation() const;

private:
    std::vector<double> grid_, values_;
    RateKind kind_ = RateKind::EtaLower;
};

struct ExponentQuery {
    double r = 0.0;
    double epsilon = 0.5;
    int theta_grid = 64;

    void validate() const;
};

// Grid tolerance: one grid step plus 1e-9.
double grid_tolerance(double spacing);

struct ClassicalPair {
    FiniteMeasure rho, sigma;
};
struct QuantumPair {
    HermitianOperator rho, sigma;
};
using IidPair = std::variant<ClassicalPair, QuantumPair>;

struct FiniteRateSamples {
    int n = 1;
    RateFunction eta, zeta, zeta_c;
    std::vector<double> alpha, beta, beta_c;
};

struct SampleCaps {
    long long type_cap = kDefaultTypeCap;
    long long brute_cap = kDefaultBruteCap;
};

std::vector<FiniteRateSamples> finite_n_rate_samples(const IidPair& pair, const std::vector<int>& n_list,
                                                     const std::vector<double>& a_grid, Mode mode = Mode::Strict,
                                                     const SampleCaps& caps = {});

struct SteinRow {
    int n = 0;
    double threshold = 0.0;  // sup{a : alpha_n(a) <= eps}
    double error = 0.0;      // |threshold - analytic target|, NaN without a target
};

struct SteinReport {
    double D_lower_estimate = 0.0;   // threshold at the largest n
    double D_upper_estimate = 0.0;   // largest threshold over the second half of n_list
    std::vector<SteinRow> per_n_thresholds;
    double strong_converse_gap = 0.0;
    double analytic_target = std::nan("");
    bool degenerate = false;
    std::vector<std::string> flags;
};

// Quantum thresholds are located by bisection inside [a_grid.front(), a_grid.back()].
SteinReport stein_report(const IidPair& pair, double epsilon, const std::vector<int>& n_list,
                         const std::vector<double>& a_grid, const SampleCaps& caps = {});

// Exact threshold sup{a : alpha(a) <= eps} of a classical spectrum (strict ties).
double classical_stein_threshold(const LLRSpectrum& spec, double epsilon);

// Cramer rates of the likelihood ratio L = log rho - log sigma.
// eta: lower tail under rho; zeta: upper tail under sigma; zeta_c: lower tail under sigma.
ExponentResult classical_eta_rate(const FiniteMeasure& rho, const FiniteMeasure& sigma, double a);
ExponentResult classical_zeta_rate(const FiniteMeasure& rho, const FiniteMeasure& sigma, double a);
ExponentResult classical_zeta_c_rate(const FiniteMeasure& rho, const FiniteMeasure& sigma, double a);
RateFunction classical_rate_table(const FiniteMeasure& rho, const FiniteMeasure& sigma,
                                  const std::vector<double>& grid, RateKind kind);

// Startup check of the zeta_c closed form against type-class tails of a
// binary pair at n = 200, 500, 1000. Runs once; throws PropertyFailure.
void zeta_c_self_test();

struct ErrorExponentForms {
    double sup_form = 0.0;
    double inf_form = 0.0;
    double zeta_left = 0.0;        // zeta(a0 - 0)
    double a0_plus_eta_right = 0.0;  // a0 + eta(a0 + 0)
    double a0 = 0.0;
};
ErrorExponentForms B_e_forms(const RateFunction& eta, const RateFunction& zeta, double r);
ExponentResult B_e_from_rates(const RateFunction& eta, const RateFunction& zeta, double r);

ExponentResult hoeffding_exponent(const FiniteMeasure& rho, const FiniteMeasure& sigma, double r,
                                  const ExponentQuery& q = {});
ExponentResult han_kobayashi_exponent(const FiniteMeasure& rho, const FiniteMeasure& sigma, double r,
                                      const ExponentQuery& q = {});

struct CorrectExponentForms {
    double sup_form = 0.0;
    double inf_form = 0.0;
    double r_plus_a0 = 0.0;
    double a0 = 0.0;
};
// a0 is the crossing located by the grid and refined by linear interpolation
// within its cell; the sup and inf forms are the plain grid extrema.
CorrectExponentForms B_e_star_forms(const RateFunction& zeta_c, double r);
ExponentResult B_e_star_from_rates(const RateFunction& zeta_c, double r);
ExponentResult B_e_star_star(const RateFunction& zeta_c, double r);

ExponentResult quantum_hoeffding_lower_bound(const HermitianOperator& rho, const HermitianOperator& sigma, double r,
                                             const ExponentQuery& q = {});

struct TiltedClassicalTest {
    ClassicalTest test;
    TestEvaluation eval;
    bool tilted = false;
    double factor = 0.0;  // 1 - e^{-n(r - eta_n(a))}
};
struct TiltedQuantumTest {
    QuantumTest test;
    TestEvaluation eval;
    bool tilted = false;
    double factor = 0.0;
};

// The tilted evaluation is assembled from the split over S and its
// complement, which keeps alpha = e^{-nr} exact even when 1 - factor is
// below double resolution.
TiltedClassicalTest construct_tilted_test(const FiniteMeasure& rho_n, const FiniteMeasure& sigma_n, double a,
                                          double r, int n, TieRule tie = TieRule::strict());
TiltedQuantumTest construct_tilted_test(const HermitianOperator& rho_n, const HermitianOperator& sigma_n, double a,
                                        double r, int n, Mode mode = Mode::Strict);

struct HanReport {
    double han_value = 0.0;
    double theorem4_value = 0.0;
    bool condition_holds = false;
    bool equal = false;
    std::string to_json() const;
};
HanReport han_formula_check(const RateFunction& eta, const RateFunction& zeta_c, double r);

}  // namespace infospec
