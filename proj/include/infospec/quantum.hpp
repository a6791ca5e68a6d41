#pragma once

#include <array>
#include <utility>

#include "infospec/classical.hpp"
#include "infospec/operator.hpp"

namespace infospec {

class QuantumTest {
public:
    // Eigenvalues must lie in [-1e-10, 1 + 1e-10].
    explicit QuantumTest(const HermitianOperator& t);
    explicit QuantumTest(const Projection& p);

    const HermitianOperator& op() const { return op_; }
    operator const HermitianOperator&() const { return op_; }
    int dim() const { return op_.dim(); }

private:
    HermitianOperator op_;
};

struct PureStatePair {
    double delta = 0.0;  // |<psi|phi>|^2
    int n = 1;
};

// psi = (1, 0), phi = (sqrt(delta), sqrt(1 - delta)).
std::pair<DensityOperator, DensityOperator> pure_state_operators(double delta);

Projection quantum_np_projection(const HermitianOperator& rho, const HermitianOperator& sigma, double a, int n,
                                 Mode mode = Mode::Strict);

TestEvaluation evaluate_quantum_test(const HermitianOperator& rho, const HermitianOperator& sigma,
                                     const QuantumTest& t, int n);

// Likelihood test S_n(a) evaluated directly from the eigenvectors of
// rho - e^{na} sigma, without forming the projection. g = Tr(rho S).
struct NPEvaluation {
    double g = 0.0;
    TestEvaluation eval;
    int rank = 0;
};
NPEvaluation quantum_np_evaluation(const HermitianOperator& rho, const HermitianOperator& sigma, double a, int n,
                                   Mode mode = Mode::Strict);
// Strict and nonstrict results from one eigendecomposition.
std::array<NPEvaluation, 2> quantum_np_evaluation_both(const HermitianOperator& rho, const HermitianOperator& sigma,
                                                       double a, int n);

// log w_rho of the likelihood operator w_rho rho - w_sigma sigma with
// w_sigma / w_rho = e^{na}: 0, or -na once e^{na} leaves double range.
double np_log_rho_weight(double a, int n);

// Likelihood operators w_rho R - w_sigma S treat an eigenvalue as zero relative
// to its eigenvector's own weights x = w_rho <v|R|v>, y = w_sigma <v|S|v>:
// |lambda| <= 1e-11 max(|x|, |y|), never below `floor`. The rule is invariant
// under positive rescaling and unitary change of frame, so the dense and the
// block-decomposed evaluations classify the same vectors. `floor` is
// kRoundingBand times the operator's spectral radius.
inline constexpr double kRoundingBand = 1e-15;
double likelihood_band(double x, double y, double floor);

double quantum_relative_entropy(const HermitianOperator& rho, const HermitianOperator& sigma);

// log Tr(rho^{1+theta} sigma^{-theta}), powers taken on supports.
double quantum_psi(const HermitianOperator& rho, const HermitianOperator& sigma, double theta);
// lim_{theta -> 0-} psi(theta) = log Tr(rho Pi_sigma).
double quantum_psi_left_limit(const HermitianOperator& rho, const HermitianOperator& sigma);

double ogawa_nagaoka_bound(const HermitianOperator& rho, const HermitianOperator& sigma, int n, double a,
                           double theta);

double measured_binary_divergence(const HermitianOperator& rho, const HermitianOperator& sigma,
                                  const QuantumTest& t);

double pure_state_g(const PureStatePair& pair, double a);

// A unitarily equivalent real pair for qubits (g, alpha, beta are invariant);
// other dimensions are returned unchanged.
std::pair<HermitianOperator, HermitianOperator> real_qubit_frame(const HermitianOperator& rho,
                                                                 const HermitianOperator& sigma);

// Dense tensor-power oracle; strict and nonstrict from one eigendecomposition.
std::array<NPEvaluation, 2> brute_force_iid_evaluation_both(const HermitianOperator& rho,
                                                            const HermitianOperator& sigma, int n, double a,
                                                            long long cap = kDefaultBruteCap);
NPEvaluation brute_force_iid_evaluation(const HermitianOperator& rho, const HermitianOperator& sigma, int n,
                                        double a, Mode mode = Mode::Strict, long long cap = kDefaultBruteCap);
double brute_force_iid_g(const HermitianOperator& rho, const HermitianOperator& sigma, int n, double a,
                         Mode mode = Mode::Strict, long long cap = kDefaultBruteCap);

}  // namespace infospec
