// Acceptance suite: one PASS/FAIL line per criterion. Expected values come
// from oracles written here (closed forms, bisection over tilted families,
// exhaustive enumeration), not from the library under test.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "infospec/exponents.hpp"
#include "infospec/quantum.hpp"
#include "infospec/random.hpp"
#include "infospec/schur.hpp"
#include "infospec/source_coding.hpp"

using namespace infospec;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const char* title, const Outcome& o) {
    std::printf("%s  criterion %2d  %s  [%s]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

std::string fmt(const char* f, double x) {
    char b[64];
    std::snprintf(b, sizeof b, f, x);
    return b;
}

HermitianOperator example_rho() {
    Matrix m(2, 2);
    m << 0.75, 0.35, 0.35, 0.25;
    return HermitianOperator(m);
}
HermitianOperator example_sigma() { return HermitianOperator::diagonal({0.9, 0.1}); }

std::vector<double> linspace(double lo, double hi, int points) {
    std::vector<double> g(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
    return g;
}

// Real symmetric 2x2 [[a, b], [b, d]] raised to p via its analytic eigenpairs.
Eigen::Matrix2d sym2_power(double a, double b, double d, double p) {
    const double t = a + d, disc = std::sqrt((a - d) * (a - d) + 4 * b * b);
    Eigen::Matrix2d out = Eigen::Matrix2d::Zero();
    for (double s : {1.0, -1.0}) {
        const double lam = 0.5 * (t + s * disc);
        Eigen::Vector2d v(b, lam - a);
        v.normalize();
        out += std::pow(lam, p) * v * v.transpose();
    }
    return out;
}

double binary_kl(double p, double q) {
    auto term = [](double x, double y) { return x > 0 ? x * std::log(x / y) : 0.0; };
    return term(p, q) + term(1 - p, 1 - q);
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
    const HermitianOperator rho = example_rho(), sigma = example_sigma();
    // oracle: analytic eigenvalues of rho; sigma is diagonal
    const double t = 1.0, det = 0.75 * 0.25 - 0.35 * 0.35;
    const double lp = 0.5 * (t + std::sqrt(t * t - 4 * det)), lm = 0.5 * (t - std::sqrt(t * t - 4 * det));
    const double oracle = lp * std::log(lp) + lm * std::log(lm) - 0.75 * std::log(0.9) - 0.25 * std::log(0.1);
    double d = quantum_relative_entropy(rho, sigma);
    std::vector<double> times;
    for (int i = 0; i < 51; ++i) {
        auto t0 = Clock::now();
        d = quantum_relative_entropy(rho, sigma);
        times.push_back(seconds_since(t0));
    }
    std::nth_element(times.begin(), times.begin() + 25, times.end());
    const double median = times[25];
    Outcome o;
    o.pass = std::abs(d - 0.4013) <= 5e-4 && std::abs(d - oracle) <= 1e-12 && median < 1e-3;
    o.detail = "D=" + fmt("%.10f", d) + " oracle=" + fmt("%.10f", oracle) + " median_time=" + fmt("%.2e", median) + "s";
    return o;
}

Outcome criterion2() {
    auto t0 = Clock::now();
    Rng rng(2024);
    std::vector<std::pair<HermitianOperator, HermitianOperator>> pairs{{example_rho(), example_sigma()}};
    for (int i = 0; i < 20; ++i) {
        DensityOperator r = random_density(rng, 2), s = random_density(rng, 2);
        pairs.emplace_back(r.op(), s.op());
    }
    const std::vector<double> grid = linspace(-0.5, 1.0, 21);
    double worst = 0.0;
    for (const auto& [rho, sigma] : pairs)
        for (int n = 1; n <= 10; ++n) {
            const SchurBlockDecomposition dec = build_decomposition(rho, sigma, n);
            for (double a : grid) {
                const auto brute = brute_force_iid_evaluation_both(rho, sigma, n, a);
                for (int m = 0; m < 2; ++m) {
                    const double fast = fast_iid_evaluation(dec, a, m == 0 ? Mode::Strict : Mode::Nonstrict).g;
                    worst = std::max(worst, std::abs(fast - brute[m].g));
                }
            }
        }
    const double el = seconds_since(t0);
    Outcome o;
    o.pass = worst <= 1e-9 && el < 60.0;
    o.detail = "max|g_fast-g_brute|=" + fmt("%.3e", worst) + " time=" + fmt("%.2f", el) + "s";
    return o;
}

Outcome criterion3() {
    const HermitianOperator rho = example_rho(), sigma = example_sigma();
    const std::vector<double> grid = linspace(0.0, 0.8, 161);
    double crossing[3];
    double t50 = 0.0;
    const int ns[3] = {5, 15, 50};
    bool bracket_ok = true;
    for (int i = 0; i < 3; ++i) {
        const int n = ns[i];
        auto t0 = Clock::now();
        const SchurBlockDecomposition dec = build_decomposition(rho, sigma, n);
        std::vector<double> g;
        for (double a : grid) g.push_back(fast_iid_evaluation(dec, a).g);
        if (n == 50) t50 = seconds_since(t0);
        if (!(g.front() > 0.5 && g.back() < 0.5)) bracket_ok = false;
        double lo = 0.0, hi = 0.8;
        for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
            const double mid = 0.5 * (lo + hi);
            (fast_iid_evaluation(dec, mid).g > 0.5 ? lo : hi) = mid;
        }
        crossing[i] = 0.5 * (lo + hi);
    }
    const double e5 = std::abs(crossing[0] - 0.4013), e15 = std::abs(crossing[1] - 0.4013),
                 e50 = std::abs(crossing[2] - 0.4013);
    Outcome o;
    o.pass = bracket_ok && e50 < e15 && e15 < e5 && t50 < 10.0;
    o.detail = "a*(5)=" + fmt("%.6f", crossing[0]) + " a*(15)=" + fmt("%.6f", crossing[1]) +
               " a*(50)=" + fmt("%.6f", crossing[2]) + " n=50 curve " + fmt("%.3f", t50) + "s";
    return o;
}

double np_min_margin(const TestEvaluation& s, const TestEvaluation& t, double a, int n) {
    const double e = std::exp(n * a);
    const double m1 = 1.0 - (s.alpha + e * s.beta);
    const double m2 = (t.alpha + e * t.beta) - (s.alpha + e * s.beta);
    const double m3 = e * s.beta_c - s.alpha;
    const double m4 = (t.alpha - e * t.beta_c) - (s.alpha - e * s.beta_c);
    return std::min({m1, m2, m3, m4});
}

Outcome criterion4() {
    Rng rng(4);
    const std::vector<double> as{-0.5, 0.0, 0.4, 1.0};
    double worst = kInf;
    // quantum: the worked example at n = 1, 2, 3 and a random qutrit pair
    struct QCase {
        HermitianOperator rho, sigma;
        int n;
    };
    std::vector<QCase> qc;
    for (int n = 1; n <= 3; ++n) qc.push_back({tensor_power(example_rho(), n), tensor_power(example_sigma(), n), n});
    {
        DensityOperator r = random_density(rng, 3), s = random_density(rng, 3);
        qc.push_back({r.op(), s.op(), 1});
    }
    for (const auto& c : qc) {
        std::vector<TestEvaluation> ts;
        for (int t = 0; t < 1000; ++t)
            ts.push_back(evaluate_quantum_test(c.rho, c.sigma, random_quantum_test(rng, c.rho.dim()), c.n));
        for (double a : as)
            for (Mode mode : {Mode::Strict, Mode::Nonstrict}) {
                QuantumTest s(quantum_np_projection(c.rho, c.sigma, a, c.n, mode));
                const TestEvaluation se = evaluate_quantum_test(c.rho, c.sigma, s, c.n);
                for (const auto& te : ts) worst = std::min(worst, np_min_margin(se, te, a, c.n));
            }
    }
    const double qworst = worst;
    // classical: a random 4-letter pair at n = 1 and its 3-fold product
    const FiniteMeasure p = random_probability(rng, 4, 0.02), q = random_probability(rng, 4, 0.02);
    for (int n : {1, 3}) {
        const FiniteMeasure pn = iid_product(p, n), qn = iid_product(q, n);
        std::vector<TestEvaluation> ts;
        for (int t = 0; t < 1000; ++t) ts.push_back(evaluate_test(pn, qn, random_classical_test(rng, pn.size()), n));
        for (double a : as)
            for (TieRule tie : {TieRule::strict(), TieRule::nonstrict(), TieRule::randomized(0.3)}) {
                const TestEvaluation se = evaluate_test(pn, qn, classical_np_test(pn, qn, a, n, tie), n);
                for (const auto& te : ts) worst = std::min(worst, np_min_margin(se, te, a, n));
            }
    }
    Outcome o;
    o.pass = worst >= -1e-9;
    o.detail = "min residual quantum=" + fmt("%.3e", qworst) + " overall=" + fmt("%.3e", worst);
    return o;
}

Outcome criterion5() {
    // beta <= e^{-na}, checked as zeta >= a in the log domain (no underflow)
    // and as beta e^{na} <= 1 where the product is representable.
    Rng rng(5);
    double worst_log = kInf;
    long points = 0;
    const std::vector<double> grid = linspace(-1.0, 2.0, 61);
    for (int i = 0; i < 10; ++i) {
        auto [rho, sigma] = random_binary_pair(rng);
        for (int n : {1, 10, 100, 1000}) {
            const LLRSpectrum spec = iid_spectrum(rho, sigma, n);
            for (double a : grid)
                for (Mode mode : {Mode::Strict, Mode::Nonstrict}) {
                    const TestEvaluation e = spectrum_alpha_beta(spec, a, mode);
                    worst_log = std::min(worst_log, e.zeta - a);
                    if (n * a < 600) worst_log = std::min(worst_log, -(e.beta * std::exp(n * a) - 1.0));
                    ++points;
                }
        }
    }
    for (int n : {1, 5, 15, 50, 200}) {
        const SchurBlockDecomposition dec = build_decomposition(example_rho(), example_sigma(), n);
        for (double a : grid)
            for (Mode mode : {Mode::Strict, Mode::Nonstrict}) {
                const TestEvaluation e = fast_iid_evaluation(dec, a, mode).eval;
                worst_log = std::min(worst_log, e.zeta - a);
                if (n * a < 600) worst_log = std::min(worst_log, -(e.beta * std::exp(n * a) - 1.0));
                ++points;
            }
    }
    for (int n = 1; n <= 6; ++n)
        for (double a : grid)
            for (Mode mode : {Mode::Strict, Mode::Nonstrict}) {
                const TestEvaluation e = brute_force_iid_evaluation(example_rho(), example_sigma(), n, a, mode).eval;
                worst_log = std::min(worst_log, e.zeta - a);
                ++points;
            }
    Outcome o;
    // only floating-point rounding is allowed
    o.pass = worst_log >= -1e-12;
    o.detail = std::to_string(points) + " grid points, min margin=" + fmt("%.3e", worst_log);
    return o;
}

Outcome criterion6() {
    double worst = kInf;
    for (int n = 1; n <= 8; ++n)
        for (double a : {0.2, 0.4, 0.6}) {
            const double g = brute_force_iid_g(example_rho(), example_sigma(), n, a, Mode::Nonstrict);
            for (int k = 0; k <= 10; ++k) {
                const double theta = 0.1 * k;
                // oracle psi(theta) = log Tr rho^{1+theta} sigma^{-theta}, sigma diagonal
                const Eigen::Matrix2d rp = sym2_power(0.75, 0.35, 0.25, 1.0 + theta);
                const double psi = std::log(rp(0, 0) * std::pow(0.9, -theta) + rp(1, 1) * std::pow(0.1, -theta));
                const double bound = std::exp(-n * (a * theta - psi));
                worst = std::min(worst, bound + 1e-12 - g);
            }
        }
    Outcome o;
    o.pass = worst >= 0.0;
    o.detail = "min(bound + 1e-12 - g)=" + fmt("%.3e", worst);
    return o;
}

Outcome criterion7() {
    double worst = 0.0;
    const std::vector<double> grid = linspace(-1.0, 1.0, 21);
    for (int k = 0; k <= 9; ++k) {
        const double delta = 0.1 * k;
        auto [psi, phi] = pure_state_operators(delta);
        for (int n : {1, 5, 20})
            for (double a : grid) {
                Projection s = quantum_np_projection(psi, phi, a, n);
                const double numeric = 1.0 - evaluate_quantum_test(psi, phi, QuantumTest(s), n).alpha;
                worst = std::max(worst, std::abs(numeric - pure_state_g({delta, n}, a)));
            }
    }
    Outcome o;
    o.pass = worst <= 1e-12;
    o.detail = "max|closed - numeric|=" + fmt("%.3e", worst);
    return o;
}

// Member of the tilted family tau_l ~ rho^{1-l} sigma^l for binary rho, sigma.
double tilt(double p, double q, double l) {
    const double lp = std::log(p / (1 - p)), lq = std::log(q / (1 - q));
    const double lo = (1 - l) * lp + l * lq;
    return 1.0 / (1.0 + std::exp(-lo));
}

// min{D(tau||sigma) : D(tau||rho) <= r}
double hoeffding_oracle(double p, double q, double r) {
    if (r >= binary_kl(q, p)) return 0.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (binary_kl(tilt(p, q, mid), p) < r ? lo : hi) = mid;
    }
    return binary_kl(tilt(p, q, 0.5 * (lo + hi)), q);
}

// min_tau {D(tau||sigma) + [r - D(tau||rho)]_+}: 0 up to D(sigma||rho), else
// the point of the tilted family beyond sigma with D(tau||rho) = r.
double han_kobayashi_oracle(double p, double q, double r) {
    if (r <= binary_kl(q, p)) return 0.0;
    double lo = 1.0, hi = 2.0;
    while (binary_kl(tilt(p, q, hi), p) < r && hi < 1e6) hi *= 2.0;
    if (binary_kl(tilt(p, q, hi), p) < r) {
        // the family never reaches r: the value is r + min log(rho/sigma)
        return r + std::min(std::log(p / q), std::log((1 - p) / (1 - q)));
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (binary_kl(tilt(p, q, mid), p) < r ? lo : hi) = mid;
    }
    const double t = tilt(p, q, 0.5 * (lo + hi));
    return binary_kl(t, q) + std::max(r - binary_kl(t, p), 0.0);
}

Outcome criterion8() {
    Rng rng(8);
    double wh = 0.0, whk = 0.0;
    bool zero_ok = true;
    int zero_cases = 0;
    for (int i = 0; i < 50; ++i) {
        auto [rho, sigma] = random_binary_pair(rng);
        const double p = rho[0], q = sigma[0];
        const double dsr = binary_kl(q, p);
        for (int k = 1; k <= 50; ++k) {
            const double r = 0.01 * k;
            wh = std::max(wh, std::abs(hoeffding_exponent(rho, sigma, r).value - hoeffding_oracle(p, q, r)));
            const double hk = han_kobayashi_exponent(rho, sigma, r).value;
            whk = std::max(whk, std::abs(hk - han_kobayashi_oracle(p, q, r)));
            if (r <= dsr) {
                ++zero_cases;
                if (hk != 0.0) zero_ok = false;
            }
        }
    }
    Outcome o;
    o.pass = wh <= 1e-6 && whk <= 1e-6 && zero_ok;
    o.detail = "hoeffding max err=" + fmt("%.3e", wh) + " HK max err=" + fmt("%.3e", whk) + " B_e*=0 exact on " +
               std::to_string(zero_cases) + " cases" + (zero_ok ? "" : " (VIOLATED)");
    return o;
}

bool close_within(double x, double y, double tol) {
    if (x == y) return true;
    return std::isfinite(x) && std::isfinite(y) && std::abs(x - y) <= tol;
}

struct DualTally {
    long checks = 0;
    long bad = 0;
    double worst = 0.0;
    std::string first_bad;
    void add(const char* what, double r, double x, double y, double tol) {
        ++checks;
        if (!close_within(x, y, tol) && bad++ == 0)
            first_bad = std::string(what) + " r=" + fmt("%g", r) + " " + fmt("%.6g", x) + " vs " + fmt("%.6g", y);
        if (std::isfinite(x) && std::isfinite(y)) worst = std::max(worst, std::abs(x - y));
    }
};

// Error, correct and dual exponent forms on one set of tables.
void dual_checks(const RateFunction& eta, const RateFunction& zeta, const RateFunction& zc,
                 const std::vector<double>& rs, DualTally& t) {
    const double h = eta.spacing(), tol = h + 1e-9;
    for (double r : rs) {
        const ErrorExponentForms f = B_e_forms(eta, zeta, r);
        if (std::isfinite(f.sup_form) && f.inf_form != kInf) {
            t.add("error sup/inf", r, f.sup_form, f.inf_form, tol);
            t.add("error sup/zeta-left", r, f.sup_form, f.zeta_left, tol);
            t.add("error sup/a0+eta", r, f.sup_form, f.a0_plus_eta_right, tol);
        }
        const CorrectExponentForms c = B_e_star_forms(zc, r);
        t.add("correct sup/r+a0", r, c.sup_form, c.r_plus_a0, tol);
        t.add("correct inf/r+a0", r, c.inf_form, c.r_plus_a0, tol);
        // a0* as the infimum {a : zeta_c(a) - a <= r} lands one step above the supremum
        const auto& a = zc.grid();
        const auto& z = zc.values();
        double inf_a = kInf;
        for (size_t i = 0; i < a.size(); ++i)
            if (z[i] - a[i] <= r) {
                inf_a = a[i];
                break;
            }
        if (std::isfinite(inf_a)) t.add("correct inf-a0", r, r + inf_a, c.r_plus_a0, tol);
    }
    // Dual exponent: B_e**(r) = sup{r' : B_e*(r') <= r}, where both are resolved
    for (double r : rs) {
        const ExponentResult bss = B_e_star_star(zc, r);
        if (bss.has_flag("a0-at-grid-start") || bss.has_flag("a0-above-grid")) continue;
        double sup_r = -kInf;
        bool interior = false;
        for (double rp = r - 3.0; rp <= r + 3.0; rp += h) {
            const ExponentResult b = B_e_star_from_rates(zc, rp);
            if (b.has_flag("a0-below-grid") || b.has_flag("a0-above-grid")) continue;
            if (b.value <= r) sup_r = std::max(sup_r, rp);
            else interior = true;
        }
        if (interior && std::isfinite(sup_r)) t.add("dual exponent", r, bss.value, sup_r, 2 * h + 1e-9);
    }
}

Outcome criterion9() {
    Rng rng(9);
    DualTally cl, st;
    const std::vector<double> rs{0.0, 0.01, 0.05, 0.1, 0.2, 0.4};
    for (int i = 0; i < 50; ++i) {
        auto [rho, sigma] = random_binary_pair(rng, 0.1);
        const double l0 = std::log(rho[0] / sigma[0]), l1 = std::log(rho[1] / sigma[1]);
        const std::vector<double> grid = linspace(std::min(l0, l1) - 1.0, std::max(l0, l1) + 1.0, 801);
        const RateFunction eta = classical_rate_table(rho, sigma, grid, RateKind::EtaLower);
        const RateFunction zeta = classical_rate_table(rho, sigma, grid, RateKind::ZetaLower);
        const RateFunction zc = classical_rate_table(rho, sigma, grid, RateKind::ZetaCUpper);
        dual_checks(eta, zeta, zc, rs, cl);
    }
    const std::vector<double> grid = linspace(-2.0, 2.0, 401);
    for (int i = 0; i < 200; ++i) {
        const StepRates s = random_step_rates(rng, grid);
        dual_checks(s.eta, s.zeta, s.zeta_c, rs, st);
    }
    Outcome o;
    o.pass = cl.bad == 0 && st.bad == 0;
    o.detail = "cramer: " + std::to_string(cl.checks) + " checks, " + std::to_string(cl.bad) + " off, worst " +
               fmt("%.2e", cl.worst) + "; steps: " + std::to_string(st.checks) + " checks, " +
               std::to_string(st.bad) + " off, worst " + fmt("%.2e", st.worst) +
               (cl.bad + st.bad > 0 ? "; first: " + cl.first_bad + st.first_bad : "");
    return o;
}

Outcome criterion10() {
    bool ok = true;
    double worst = 0.0;
    int cases = 0;
    for (double c : {0.3, 1.0, 2.5}) {
        // limits of the two-point family: eta = inf for a <= 0, 0 above;
        // zeta_c = c for a <= 0, 0 above. The grid contains a = 0.
        const double h = 0.005;
        const int half = static_cast<int>(std::lround((c + 2.0) / h));
        std::vector<double> grid;
        for (int i = -half; i <= half; ++i) grid.push_back(i * h);
        std::vector<double> eta, zc;
        for (double a : grid) {
            eta.push_back(a <= 0 ? kInf : 0.0);
            zc.push_back(a <= 0 ? c : 0.0);
        }
        const RateFunction E(grid, eta, RateKind::EtaLower), Z(grid, zc, RateKind::ZetaCUpper);
        const double tol = h + 1e-9;
        for (double r = -0.5; r <= c + 1.0 + 1e-12; r += 0.05) {
            if (std::abs(r - c) < 3 * h) continue;  // the kink itself is only grid-resolved
            const double expect = r >= c ? c : (r >= 0 ? r : 0.0);
            const double got = B_e_star_from_rates(Z, r).value;
            worst = std::max(worst, std::abs(got - expect));
            if (std::abs(got - expect) > tol) ok = false;
            const HanReport han = han_formula_check(E, Z, r);
            const double han_expect = r >= 0 ? r : 0.0;
            if (std::abs(han.han_value - han_expect) > tol) ok = false;
            // Han's expression differs exactly when r > c, and the condition says so
            if (han.equal != (r <= c) || han.condition_holds != (r <= c)) ok = false;
            ++cases;
        }
    }
    Outcome o;
    o.pass = ok;
    o.detail = std::to_string(cases) + " (c, r) cases, max|B_e* - piecewise|=" + fmt("%.2e", worst);
    return o;
}

Outcome criterion11() {
    const FiniteMeasure rho = FiniteMeasure::probability({0.5, 0.5}), sigma = FiniteMeasure::probability({0.9, 0.1});
    const double D = 0.5 * std::log(0.5 / 0.9) + 0.5 * std::log(0.5 / 0.1);
    const SteinReport rep = stein_report(ClassicalPair{rho, sigma}, 0.5, {100, 500, 2000}, linspace(0.0, 1.0, 11));
    std::vector<double> err;
    for (const auto& row : rep.per_n_thresholds) err.push_back(std::abs(row.threshold - D));
    Outcome o;
    o.pass = err.size() == 3 && err[1] <= err[0] && err[2] <= err[1] && err[2] < 0.02;
    o.detail = "|threshold-D| at n=100,500,2000: " + fmt("%.3e", err.at(0)) + ", " + fmt("%.3e", err.at(1)) + ", " +
               fmt("%.3e", err.at(2));
    return o;
}

bool round_trip_ok(const FiniteMeasure& pn, const ClassicalTest& t, int n) {
    const CodeTestReduction red = code_test_reduction(pn, t, n);
    // oracle: count and mass outside the acceptance set, summed here
    double outside = 0.0, count = 0.0;
    for (size_t x = 0; x < pn.size(); ++x) {
        outside += pn[x] * (1.0 - t[x]);
        count += t[x];
    }
    return test_from_code(red.code, pn.size()).accept() == t.accept() && red.error == outside &&
           red.size == count && red.error == red.test_eval.alpha && red.size == red.test_eval.beta;
}

// inf{h >= 0 : min_a max(sigma*(a), a - h) <= r} by bisection over h
double han_source_oracle(const RateFunction& s, double r) {
    const auto& a = s.grid();
    const auto& v = s.values();
    auto G = [&](double h) {
        double m = kInf;
        for (size_t i = 0; i < a.size(); ++i) m = std::min(m, std::max(v[i], a[i] - h));
        return m;
    };
    if (G(0.0) <= r) return 0.0;
    double lo = 0.0, hi = a.back() + 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (G(mid) <= r ? hi : lo) = mid;
    }
    return hi;
}

Outcome criterion12() {
    Rng rng(12);
    long tests = 0;
    bool rt = true;
    const FiniteMeasure p = FiniteMeasure::probability({0.7, 0.3});
    for (int n = 1; n <= 8; ++n) {
        const FiniteMeasure pn = iid_product(p, n);
        const size_t M = pn.size();
        if (n <= 4) {
            // every deterministic test on 2^n sequences
            for (unsigned long mask = 0; mask < (1UL << M); ++mask) {
                std::vector<double> acc(M);
                for (size_t x = 0; x < M; ++x) acc[x] = (mask >> x) & 1UL ? 1.0 : 0.0;
                rt = rt && round_trip_ok(pn, ClassicalTest(acc), n);
                ++tests;
            }
        } else {
            for (int k = 0; k < 4000; ++k) {
                rt = rt && round_trip_ok(pn, random_classical_test(rng, M, false), n);
                ++tests;
            }
            rt = rt && round_trip_ok(pn, ClassicalTest::constant(M, 1.0), n) &&
                 round_trip_ok(pn, ClassicalTest::constant(M, 0.0), n);
            tests += 2;
        }
    }
    const std::vector<double> grid = self_information_grid(p, 2001);
    const RateFunction up = sigma_rate_table(p, grid, RateKind::SigmaStarUpper);
    const RateFunction lo = sigma_rate_table(p, grid, RateKind::SigmaLower);
    const double tol = up.spacing() + 1e-9;
    double worst = 0.0;
    for (double r : linspace(0.0, 0.5, 100))
        worst = std::max(worst, std::abs(R_e_star(up, r).value - han_source_oracle(up, r)));
    const double H = -(0.7 * std::log(0.7) + 0.3 * std::log(0.3));
    const double re0 = R_e(lo, 1e-9).value;
    Outcome o;
    o.pass = rt && worst <= tol && std::abs(re0 - H) <= tol;
    o.detail = std::to_string(tests) + " round trips " + (rt ? "exact" : "BROKEN") + ", max|R_e* - Han|=" +
               fmt("%.2e", worst) + " (step " + fmt("%.2e", up.spacing()) + "), R_e(0+)-H=" + fmt("%.2e", re0 - H);
    return o;
}

}  // namespace

// With arguments, only the listed criterion numbers run.
int main(int argc, char** argv) {
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    const std::pair<const char*, std::function<Outcome()>> all[] = {
        {"quantum relative entropy of the worked example", criterion1},
        {"Schur-Weyl fast path equals brute force", criterion2},
        {"g-curve crossings concentrate at D", criterion3},
        {"Neyman-Pearson inequalities under random tests", criterion4},
        {"beta_n(a) <= e^{-na}", criterion5},
        {"Ogawa-Nagaoka bound", criterion6},
        {"pure-state closed form", criterion7},
        {"Hoeffding and Han-Kobayashi duality", criterion8},
        {"dual forms on rate grids", criterion9},
        {"two-point example and Han's expression", criterion10},
        {"classical Stein trend", criterion11},
        {"source coding reduction and exponents", criterion12},
    };
    int id = 0;
    for (const auto& [title, fn] : all) {
        ++id;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        report(id, title, o);
    }
    const int ran = only.empty() ? 12 : static_cast<int>(only.size());
    std::printf("%d of %d criteria passed\n", ran - failures, ran);
    return failures == 0 ? 0 : 1;
}
