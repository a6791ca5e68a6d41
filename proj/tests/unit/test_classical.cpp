#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "infospec/classical.hpp"
#include "infospec/random.hpp"

using namespace infospec;

namespace {

// (z, rho mass, sigma mass) by enumerating all m^n sequences, merged on z
std::vector<SpectrumPoint> enumerate_spectrum(const FiniteMeasure& p, const FiniteMeasure& q, int n) {
    const size_t m = p.size();
    size_t total = 1;
    for (int i = 0; i < n; ++i) total *= m;
    std::vector<SpectrumPoint> pts;
    for (size_t x = 0; x < total; ++x) {
        double lp = 0.0, lq = 0.0;
        size_t y = x;
        for (int i = 0; i < n; ++i, y /= m) {
            lp += std::log(p[y % m]);
            lq += std::log(q[y % m]);
        }
        pts.push_back({(lp - lq) / n, std::exp(lp), std::exp(lq), lp, lq});
    }
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.z < b.z; });
    std::vector<SpectrumPoint> merged;
    for (const auto& s : pts) {
        if (!merged.empty() && s.z - merged.back().z <= 1e-12) {
            merged.back().rho_mass += s.rho_mass;
            merged.back().sigma_mass += s.sigma_mass;
        } else {
            merged.push_back(s);
        }
    }
    return merged;
}

}  // namespace

TEST_CASE("measures validate their weights") {
    CHECK_THROWS_AS(FiniteMeasure({0.5, -0.1, 0.6}, true), InputError);
    CHECK_THROWS_AS(FiniteMeasure::probability({0.5, 0.4}), InputError);
    CHECK(FiniteMeasure::counting(4).total() == 4.0);
    CHECK_THROWS_AS(ClassicalTest({0.5, 1.2}), InputError);
}

TEST_CASE("iid_spectrum equals brute-force enumeration for n <= 8, m <= 3") {
    Rng rng(21);
    for (size_t m : {2, 3}) {
        const FiniteMeasure p = random_probability(rng, m, 0.1), q = random_probability(rng, m, 0.1);
        for (int n = 1; n <= 8; ++n) {
            const LLRSpectrum spec = iid_spectrum(p, q, n);
            const auto brute = enumerate_spectrum(p, q, n);
            REQUIRE(spec.points.size() == brute.size());
            for (size_t i = 0; i < brute.size(); ++i) {
                CHECK(spec.points[i].z == doctest::Approx(brute[i].z).epsilon(1e-12));
                CHECK(spec.points[i].rho_mass == doctest::Approx(brute[i].rho_mass).epsilon(1e-14));
                CHECK(spec.points[i].sigma_mass == doctest::Approx(brute[i].sigma_mass).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("type counts are compositions") {
    CHECK(type_count(3, 2) == 4.0);
    CHECK(type_count(10, 3) == 66.0);
    CHECK_THROWS_AS(iid_spectrum(FiniteMeasure::probability({0.2, 0.3, 0.5}),
                                 FiniteMeasure::probability({0.3, 0.3, 0.4}), 3000, 1000),
                    SizeError);
}

TEST_CASE("beta of a deterministic test against counting measure is its cardinality") {
    Rng rng(22);
    const FiniteMeasure p = iid_product(FiniteMeasure::probability({0.7, 0.3}), 4);
    const FiniteMeasure c = FiniteMeasure::counting(p.size());
    for (int t = 0; t < 50; ++t) {
        ClassicalTest d = random_classical_test(rng, p.size(), false);
        CHECK(evaluate_test(p, c, d, 4).beta == static_cast<double>(d.accepted_count()));
    }
}

TEST_CASE("likelihood tests resolve ties by the rule") {
    const FiniteMeasure p = FiniteMeasure::probability({0.5, 0.25, 0.25});
    const FiniteMeasure q = FiniteMeasure::probability({0.25, 0.25, 0.5});
    // log-likelihood ratios: log 2, 0, -log 2
    CHECK(classical_np_test(p, q, 0.0, 1, TieRule::strict()).accept() == std::vector<double>{1, 0, 0});
    CHECK(classical_np_test(p, q, 0.0, 1, TieRule::nonstrict()).accept() == std::vector<double>{1, 1, 0});
    CHECK(classical_np_test(p, q, 0.0, 1, TieRule::randomized(0.3)).accept() == std::vector<double>{1, 0.3, 0});
    CHECK_THROWS_AS(TieRule::randomized(1.5), InputError);
}

TEST_CASE("infinite likelihood ratios on disjoint supports") {
    CHECK(llr(0.5, 0.0, 1) == kInf);
    CHECK(llr(0.0, 0.5, 1) == -kInf);
    CHECK(std::isnan(llr(0.0, 0.0, 1)));
    const FiniteMeasure p = FiniteMeasure::probability({0.5, 0.5, 0.0});
    const FiniteMeasure q = FiniteMeasure::probability({0.0, 0.5, 0.5});
    const TestEvaluation e = evaluate_test(p, q, classical_np_test(p, q, 10.0, 1), 1);
    CHECK(e.alpha == 0.5);
    CHECK(e.beta == 0.0);
    CHECK(e.zeta == kInf);
}

TEST_CASE("spectrum tails equal direct test evaluation") {
    Rng rng(23);
    const FiniteMeasure p1 = random_probability(rng, 3), q1 = random_probability(rng, 3);
    const int n = 5;
    const FiniteMeasure p = iid_product(p1, n), q = iid_product(q1, n);
    const LLRSpectrum spec = iid_spectrum(p1, q1, n);
    for (double a : {-1.0, -0.2, 0.0, 0.1, 0.5, 2.0})
        for (Mode mode : {Mode::Strict, Mode::Nonstrict}) {
            const TestEvaluation s = spectrum_alpha_beta(spec, a, mode);
            const TestEvaluation d = evaluate_test(p, q, classical_np_test(p, q, a, n, TieRule::from_mode(mode)), n);
            CHECK(s.alpha == doctest::Approx(d.alpha).epsilon(1e-12));
            CHECK(s.beta == doctest::Approx(d.beta).epsilon(1e-12));
            CHECK(s.beta + s.beta_c == doctest::Approx(1.0).epsilon(1e-10));
        }
}

TEST_CASE("alpha and beta sandwich between thresholds") {
    Rng rng(24);
    for (int t = 0; t < 20; ++t) {
        auto [p, q] = random_binary_pair(rng);
        const int n = 30;
        const LLRSpectrum spec = iid_spectrum(p, q, n);
        for (double a = -1.0; a < 1.0; a += 0.1) {
            const double b = a + 0.07;
            const TestEvaluation ea = spectrum_alpha_beta(spec, a), eb = spectrum_alpha_beta(spec, b);
            const double db = ea.beta - eb.beta, da = eb.alpha - ea.alpha;
            const double tol = 1e-10 * std::max({1.0, std::exp(n * b) * db, da});
            CHECK(std::exp(n * a) * db <= da + tol);
            CHECK(da <= std::exp(n * b) * db + tol);
        }
    }
}

TEST_CASE("Neyman-Pearson optimality against random tests") {
    Rng rng(25);
    const FiniteMeasure p = random_probability(rng, 6), q = random_probability(rng, 6);
    double worst = kInf;
    for (double a : {-0.5, 0.0, 0.3}) {
        const TestEvaluation s = evaluate_test(p, q, classical_np_test(p, q, a, 1), 1);
        for (int t = 0; t < 1000; ++t) {
            const TestEvaluation e = evaluate_test(p, q, random_classical_test(rng, 6), 1);
            const double c = std::exp(a);
            worst = std::min(worst, (e.alpha + c * e.beta) - (s.alpha + c * s.beta));
        }
    }
    CHECK(worst >= -1e-12);
}

TEST_CASE("divergences, psi and entropy against closed forms") {
    const FiniteMeasure p = FiniteMeasure::probability({0.5, 0.5}), q = FiniteMeasure::probability({0.9, 0.1});
    CHECK(kl_divergence(p, q) == doctest::Approx(std::log(5.0 / 3.0)).epsilon(1e-14));
    CHECK(kl_divergence(FiniteMeasure::probability({0.5, 0.5}), FiniteMeasure::probability({1.0, 0.0})) == kInf);
    CHECK(classical_psi(p, q, 0.0) == doctest::Approx(0.0));
    CHECK(classical_psi(p, q, 1.0) == doctest::Approx(std::log(0.25 / 0.9 + 0.25 / 0.1)));
    CHECK(binary_divergence(0.5, 0.9) == doctest::Approx(std::log(5.0 / 3.0)));
    CHECK(shannon_entropy(p) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("truncation keeps the most likely accepted letters") {
    const FiniteMeasure p = FiniteMeasure::probability({0.1, 0.4, 0.2, 0.3});
    const ClassicalTest s({1, 1, 0, 1});
    CHECK(truncate_acceptance_region(s, p, 2).accept() == std::vector<double>{0, 1, 0, 1});
    CHECK_THROWS_AS(truncate_acceptance_region(s, p, 4), InputError);
    CHECK_THROWS_AS(truncate_acceptance_region(ClassicalTest({0.5, 1, 0, 1}), p, 1), InputError);
}

TEST_CASE("measure JSON round-trips") {
    const FiniteMeasure p = FiniteMeasure::probability({0.7, 0.3});
    const FiniteMeasure r = measure_from_json_text(measure_to_json_text(p));
    CHECK(r.weights() == p.weights());
    CHECK(r.normalized());
}
