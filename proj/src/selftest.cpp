#include "infospec/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "infospec/exponents.hpp"
#include "infospec/io.hpp"
#include "infospec/quantum.hpp"
#include "infospec/random.hpp"
#include "infospec/schur.hpp"
#include "infospec/source_coding.hpp"

namespace infospec {

double NPMargins::min() const { return std::min(std::min(m[0], m[1]), std::min(m[2], m[3])); }

NPMargins np_margins(const TestEvaluation& s, const TestEvaluation& t, double a, int n) {
    const double e = std::exp(n * a);
    NPMargins r;
    r.m[0] = 1.0 - (s.alpha + e * s.beta);
    r.m[1] = (t.alpha + e * t.beta) - (s.alpha + e * s.beta);
    r.m[2] = e * s.beta_c - s.alpha;
    r.m[3] = (t.alpha - e * t.beta_c) - (s.alpha - e * s.beta_c);
    return r;
}

nlohmann::json SelftestConfig::to_json() const {
    return {{"seed", seed}, {"corrupt", corrupt}, {"brute_cap", brute_cap}, {"type_cap", type_cap},
            {"trials", trials}};
}

bool SelftestReport::passed() const {
    return std::none_of(properties.begin(), properties.end(),
                        [](const PropertyResult& p) { return p.status == PropertyResult::Status::Fail; });
}

nlohmann::json SelftestReport::to_json() const {
    nlohmann::json j;
    j["version"] = kVersion;
    j["config"] = config.to_json();
    j["config_hash"] = config_hash(config.to_json());
    j["passed"] = passed();
    nlohmann::json props = nlohmann::json::array();
    for (const auto& p : properties) {
        const char* st = p.status == PropertyResult::Status::Pass   ? "pass"
                         : p.status == PropertyResult::Status::Fail ? "fail"
                                                                    : "skipped";
        props.push_back({{"name", p.name},
                         {"status", st},
                         {"measure", p.measure},
                         {"worst_residual", json_number(p.worst)},
                         {"tolerance", p.tolerance},
                         {"detail", p.detail}});
    }
    j["properties"] = props;
    return j;
}

namespace {

using Status = PropertyResult::Status;

HermitianOperator example_rho() {
    Matrix m(2, 2);
    m << 0.75, 0.35, 0.35, 0.25;
    return HermitianOperator(m);
}

HermitianOperator example_sigma() { return HermitianOperator::diagonal({0.9, 0.1}); }

PropertyResult margin_result(std::string name, double worst, double tol) {
    PropertyResult p;
    p.name = std::move(name);
    p.measure = "margin";
    p.worst = worst;
    p.tolerance = tol;
    p.status = worst >= -tol ? Status::Pass : Status::Fail;
    return p;
}

PropertyResult error_result(std::string name, double worst, double tol) {
    PropertyResult p;
    p.name = std::move(name);
    p.measure = "error";
    p.worst = worst;
    p.tolerance = tol;
    p.status = worst <= tol ? Status::Pass : Status::Fail;
    return p;
}

PropertyResult skipped(std::string name, std::string why) {
    PropertyResult p;
    p.name = std::move(name);
    p.status = Status::Skipped;
    p.detail = std::move(why);
    return p;
}

// Largest n with 2^n within the brute-force cap.
int brute_n_max(long long cap) {
    int n = 0;
    while (n < 30 && (1LL << (n + 1)) <= cap) ++n;
    return n;
}

double abs_diff(double x, double y) {
    if (x == y) return 0.0;
    return std::abs(x - y);
}

PropertyResult np_classical(const SelftestConfig& cfg, Rng& rng) {
    double worst = kInf;
    FiniteMeasure rho = random_probability(rng, 4, 0.05), sigma = random_probability(rng, 4, 0.05);
    for (double a : {-0.5, -0.1, 0.0, 0.2, 0.6})
        for (TieRule tie : {TieRule::strict(), TieRule::nonstrict()}) {
            TestEvaluation s = evaluate_test(rho, sigma, classical_np_test(rho, sigma, a, 1, tie), 1);
            for (int t = 0; t < cfg.trials; ++t) {
                TestEvaluation e = evaluate_test(rho, sigma, random_classical_test(rng, 4), 1);
                worst = std::min(worst, np_margins(s, e, a, 1).min());
            }
        }
    return margin_result("np_inequalities_classical", worst, 1e-9);
}

PropertyResult np_quantum(const SelftestConfig& cfg, Rng& rng) {
    if (cfg.brute_cap < 4) return skipped("np_inequalities_quantum", "brute-force cap below dimension 4");
    double worst = kInf;
    const HermitianOperator r2 = tensor_power(example_rho(), 2, cfg.brute_cap);
    const HermitianOperator s2 = tensor_power(example_sigma(), 2, cfg.brute_cap);
    const DensityOperator r3 = random_density(rng, 3), s3 = random_density(rng, 3);
    struct Case {
        const HermitianOperator* rho;
        const HermitianOperator* sigma;
        int n;
    };
    const Case cases[] = {{&r2, &s2, 2}, {&r3.op(), &s3.op(), 1}};
    for (const Case& c : cases)
        for (double a : {-0.3, 0.0, 0.3})
            for (Mode mode : {Mode::Strict, Mode::Nonstrict}) {
                QuantumTest s(quantum_np_projection(*c.rho, *c.sigma, a, c.n, mode));
                TestEvaluation se = evaluate_quantum_test(*c.rho, *c.sigma, s, c.n);
                for (int t = 0; t < cfg.trials; ++t) {
                    QuantumTest qt = random_quantum_test(rng, c.rho->dim());
                    TestEvaluation e = evaluate_quantum_test(*c.rho, *c.sigma, qt, c.n);
                    worst = std::min(worst, np_margins(se, e, a, c.n).min());
                }
            }
    return margin_result("np_inequalities_quantum", worst, 1e-9);
}

PropertyResult schur_oracle(const SelftestConfig& cfg, Rng& rng) {
    const int n_max = std::min(8, brute_n_max(cfg.brute_cap));
    if (n_max < 1) return skipped("schur_vs_brute_force", "brute-force cap below dimension 2");
    std::vector<std::pair<HermitianOperator, HermitianOperator>> pairs{{example_rho(), example_sigma()}};
    for (int i = 0; i < 3; ++i) pairs.emplace_back(random_density(rng, 2).op(), random_density(rng, 2).op());
    SchurOptions opts;
    opts.corrupt = cfg.corrupt;
    double worst = 0.0;
    for (const auto& [rho, sigma] : pairs)
        for (int n = 1; n <= n_max; ++n) {
            SchurBlockDecomposition dec = build_decomposition(rho, sigma, n, opts);
            for (int i = 0; i <= 10; ++i) {
                const double a = -0.5 + 0.15 * i;
                auto brute = quantum_np_evaluation_both(tensor_power(rho, n, cfg.brute_cap),
                                                        tensor_power(sigma, n, cfg.brute_cap), a, n);
                for (int m = 0; m < 2; ++m) {
                    const Mode mode = m == 0 ? Mode::Strict : Mode::Nonstrict;
                    worst = std::max(worst, abs_diff(fast_iid_evaluation(dec, a, mode).g, brute[m].g));
                }
            }
        }
    PropertyResult p = error_result("schur_vs_brute_force", worst, 1e-9);
    p.detail = "n <= " + std::to_string(n_max);
    return p;
}

PropertyResult beta_bound(const SelftestConfig& cfg, Rng& rng) {
    double worst = kInf;
    for (int i = 0; i < 5; ++i) {
        auto [rho, sigma] = random_binary_pair(rng);
        for (int n : {10, 50}) {
            LLRSpectrum spec = iid_spectrum(rho, sigma, n, cfg.type_cap);
            for (int k = 0; k <= 20; ++k) {
                const double a = -1.0 + 0.1 * k;
                for (Mode mode : {Mode::Strict, Mode::Nonstrict})
                    worst = std::min(worst, 1.0 - spectrum_alpha_beta(spec, a, mode).beta * std::exp(n * a));
            }
        }
    }
    for (int n : {5, 20}) {
        SchurBlockDecomposition dec = build_decomposition(example_rho(), example_sigma(), n);
        for (int k = 0; k <= 20; ++k) {
            const double a = -0.5 + 0.075 * k;
            for (Mode mode : {Mode::Strict, Mode::Nonstrict})
                worst = std::min(worst, 1.0 - fast_iid_evaluation(dec, a, mode).eval.beta * std::exp(n * a));
        }
    }
    return margin_result("beta_below_exp_minus_na", worst, 1e-12);
}

PropertyResult ogawa_nagaoka(const SelftestConfig& cfg) {
    const int n_max = std::min(6, brute_n_max(cfg.brute_cap));
    if (n_max < 1) return skipped("ogawa_nagaoka_bound", "brute-force cap below dimension 2");
    double worst = kInf;
    for (int n = 1; n <= n_max; ++n)
        for (double a : {0.2, 0.4, 0.6}) {
            const double g = brute_force_iid_g(example_rho(), example_sigma(), n, a, Mode::Nonstrict, cfg.brute_cap);
            for (int t = 0; t <= 10; ++t)
                worst = std::min(worst, ogawa_nagaoka_bound(example_rho(), example_sigma(), n, a, 0.1 * t) - g);
        }
    return margin_result("ogawa_nagaoka_bound", worst, 1e-12);
}

PropertyResult pure_state(const SelftestConfig&) {
    double worst = 0.0;
    for (double delta : {0.1, 0.5, 0.9}) {
        auto [psi, phi] = pure_state_operators(delta);
        // one pair of pure states with overlap delta; n only scales the threshold
        for (int n : {1, 5, 20})
            for (int k = 0; k <= 10; ++k) {
                const double a = -0.5 + 0.15 * k;
                worst = std::max(worst, abs_diff(pure_state_g({delta, n}, a), quantum_np_evaluation(psi, phi, a, n).g));
            }
    }
    return error_result("pure_state_closed_form", worst, 1e-12);
}

std::vector<double> linspace(double lo, double hi, int points) {
    std::vector<double> g(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
    return g;
}

PropertyResult exponent_duality(const SelftestConfig&, Rng& rng) {
    double worst = 0.0;
    const double h = 1e-3;
    const double tol = grid_tolerance(h);
    for (int i = 0; i < 5; ++i) {
        auto [rho, sigma] = random_binary_pair(rng, 0.1);
        const double lo = std::min(std::log(rho[0] / sigma[0]), std::log(rho[1] / sigma[1])) - 0.5;
        const double hi = std::max(std::log(rho[0] / sigma[0]), std::log(rho[1] / sigma[1])) + 0.5;
        const int points = static_cast<int>(std::ceil((hi - lo) / h)) + 1;
        const std::vector<double> grid = linspace(lo, lo + h * (points - 1), points);
        RateFunction eta = classical_rate_table(rho, sigma, grid, RateKind::EtaLower);
        RateFunction zeta = classical_rate_table(rho, sigma, grid, RateKind::ZetaLower);
        RateFunction zc = classical_rate_table(rho, sigma, grid, RateKind::ZetaCUpper);
        for (double r : {0.02, 0.1, 0.3}) {
            const double h = hoeffding_exponent(rho, sigma, r).value;
            const double hr = B_e_from_rates(eta, zeta, r).value;
            worst = std::max(worst, abs_diff(h, hr));
            const double hk = han_kobayashi_exponent(rho, sigma, r).value;
            const double hkr = B_e_star_from_rates(zc, r).value;
            worst = std::max(worst, abs_diff(hk, hkr));
        }
    }
    return error_result("exponent_single_letter_vs_rates", worst, tol);
}

PropertyResult step_dual_forms(const SelftestConfig& cfg, Rng& rng) {
    const std::vector<double> grid = linspace(-2.0, 2.0, 401);
    const double tol = grid_tolerance(grid[1] - grid[0]);
    double worst = 0.0;
    auto gap = [](double x, double y) { return x == y ? 0.0 : std::abs(x - y); };
    const int count = std::max(1, cfg.trials / 4);
    for (int t = 0; t < count; ++t) {
        StepRates s = random_step_rates(rng, grid);
        for (double r : {0.0, 0.1, 0.4, 1.0}) {
            ErrorExponentForms f = B_e_forms(s.eta, s.zeta, r);
            if (std::isfinite(f.sup_form)) {
                worst = std::max({worst, gap(f.sup_form, f.inf_form), gap(f.sup_form, f.zeta_left),
                                  gap(f.sup_form, f.a0_plus_eta_right)});
            }
            CorrectExponentForms c = B_e_star_forms(s.zeta_c, r);
            worst = std::max({worst, gap(c.sup_form, c.r_plus_a0), gap(c.inf_form, c.r_plus_a0)});
        }
    }
    return error_result("dual_forms_step_rates", worst, tol);
}

PropertyResult zeta_c_gate(const SelftestConfig& cfg) {
    if (cfg.type_cap < 1001) return skipped("zeta_c_type_class_gate", "type-class cap below 1001");
    try {
        zeta_c_self_test();
    } catch (const PropertyFailure& e) {
        PropertyResult p = error_result("zeta_c_type_class_gate", kInf, 0.0);
        p.detail = e.what();
        return p;
    }
    return error_result("zeta_c_type_class_gate", 0.0, 0.0);
}

PropertyResult source_round_trip(const SelftestConfig&) {
    const FiniteMeasure p = FiniteMeasure::probability({0.7, 0.3});
    double worst = 0.0;
    for (int n = 1; n <= 3; ++n) {
        const FiniteMeasure pn = iid_product(p, n);
        const size_t M = pn.size();
        for (unsigned long mask = 0; mask < (1UL << M); ++mask) {
            std::vector<double> acc(M);
            for (size_t x = 0; x < M; ++x) acc[x] = (mask >> x) & 1UL ? 1.0 : 0.0;
            ClassicalTest t(acc);
            CodeTestReduction red = code_test_reduction(pn, t, n);
            ClassicalTest back = test_from_code(red.code, M);
            bool ok = back.accept() == t.accept() && red.error == red.test_eval.alpha && red.size == red.test_eval.beta;
            if (!ok) worst = 1.0;
        }
    }
    return error_result("source_code_test_round_trip", worst, 0.0);
}

PropertyResult tilted_test(const SelftestConfig&) {
    const FiniteMeasure p = FiniteMeasure::probability({0.3, 0.7}), q = FiniteMeasure::probability({0.6, 0.4});
    const int n = 20;
    const FiniteMeasure pn = iid_product(p, n), qn = iid_product(q, n);
    double worst = 0.0;
    try {
        for (double r : {0.5, 1.0, 2.0}) {
            TiltedClassicalTest t = construct_tilted_test(pn, qn, 0.1, r, n);
            if (t.tilted) {
                const double target = std::exp(-n * r);
                worst = std::max(worst, std::abs(t.eval.alpha - target) / target);
            }
        }
    } catch (const PropertyFailure& e) {
        PropertyResult res = error_result("tilted_test_alpha", kInf, 1e-12);
        res.detail = e.what();
        return res;
    }
    return error_result("tilted_test_alpha", worst, 1e-12);
}

}  // namespace

SelftestReport run_selftest(const SelftestConfig& cfg) {
    if (cfg.trials < 1) throw InputError("trials must be >= 1");
    SelftestReport rep;
    rep.config = cfg;
    Rng rng(cfg.seed);
    // Each property runs in isolation: an unexpected error becomes a failure
    // of that property, a cap becomes a skip.
    auto run = [&](const std::string& name, const std::function<PropertyResult()>& f) {
        try {
            rep.properties.push_back(f());
        } catch (const SizeError& e) {
            rep.properties.push_back(skipped(name, e.what()));
        } catch (const std::exception& e) {
            PropertyResult p = error_result(name, kInf, 0.0);
            p.detail = e.what();
            rep.properties.push_back(p);
        }
    };
    run("np_inequalities_classical", [&] { return np_classical(cfg, rng); });
    run("np_inequalities_quantum", [&] { return np_quantum(cfg, rng); });
    run("schur_vs_brute_force", [&] { return schur_oracle(cfg, rng); });
    run("beta_below_exp_minus_na", [&] { return beta_bound(cfg, rng); });
    run("ogawa_nagaoka_bound", [&] { return ogawa_nagaoka(cfg); });
    run("pure_state_closed_form", [&] { return pure_state(cfg); });
    run("exponent_single_letter_vs_rates", [&] { return exponent_duality(cfg, rng); });
    run("dual_forms_step_rates", [&] { return step_dual_forms(cfg, rng); });
    run("zeta_c_type_class_gate", [&] { return zeta_c_gate(cfg); });
    run("source_code_test_round_trip", [&] { return source_round_trip(cfg); });
    run("tilted_test_alpha", [&] { return tilted_test(cfg); });
    return rep;
}

}  // namespace infospec
