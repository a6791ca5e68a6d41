#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "infospec/quantum.hpp"
#include "infospec/random.hpp"
#include "infospec/schur.hpp"

using namespace infospec;

namespace {

HermitianOperator example_rho() {
    Matrix m(2, 2);
    m << 0.75, 0.35, 0.35, 0.25;
    return HermitianOperator(m);
}
HermitianOperator example_sigma() { return HermitianOperator::diagonal({0.9, 0.1}); }

}  // namespace

TEST_CASE("multiplicities and the dimension identity") {
    // m_{n,k} = C(n,k) - C(n,k-1)
    CHECK(static_cast<long long>(exact_multiplicity(4, 0)) == 1);
    CHECK(static_cast<long long>(exact_multiplicity(4, 1)) == 3);
    CHECK(static_cast<long long>(exact_multiplicity(4, 2)) == 2);
    CHECK(static_cast<long long>(exact_multiplicity(10, 5)) == 252 - 210);
    for (int n = 1; n <= 120; ++n) CHECK(dimension_identity(n));
    CHECK(log_multiplicity(100, 50) == doctest::Approx(std::log(1.0 * exact_multiplicity(100, 50))).epsilon(1e-12));
}

TEST_CASE("symmetric powers of diagonal and identity matrices") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 0.9;
    d(1, 1) = 0.1;
    const Matrix s = sym_power_matrix(d, 3);
    REQUIRE(s.rows() == 4);
    // diagonal entries are the monomials 0.9^j 0.1^(3-j), in some order
    std::vector<double> diag, expect{0.001, 0.009, 0.081, 0.729};
    for (int i = 0; i < 4; ++i) diag.push_back(s(i, i).real());
    std::sort(diag.begin(), diag.end());
    for (int i = 0; i < 4; ++i) CHECK(diag[i] == doctest::Approx(expect[i]).epsilon(1e-14));
    CHECK((sym_power_matrix(Matrix::Identity(2, 2), 5) - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("block traces reproduce (Tr X)^n") {
    for (int n : {1, 7, 30, 80}) {
        const SchurBlockDecomposition dec = build_decomposition(example_rho(), example_sigma(), n);
        CHECK(schur_trace(dec, true) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(schur_trace(dec, false) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("fast path matches brute force for small n") {
    Rng rng(41);
    std::vector<std::pair<HermitianOperator, HermitianOperator>> pairs{{example_rho(), example_sigma()}};
    for (int i = 0; i < 3; ++i) {
        DensityOperator r = random_density(rng, 2), s = random_density(rng, 2);
        pairs.emplace_back(r.op(), s.op());
    }
    double worst = 0.0;
    for (const auto& [r, s] : pairs)
        for (int n = 1; n <= 7; ++n) {
            const SchurBlockDecomposition dec = build_decomposition(r, s, n);
            for (double a = -0.5; a <= 1.0; a += 0.125) {
                const auto brute = brute_force_iid_evaluation_both(r, s, n, a);
                for (int m = 0; m < 2; ++m) {
                    const IidEvaluation f = fast_iid_evaluation(dec, a, m == 0 ? Mode::Strict : Mode::Nonstrict);
                    worst = std::max(worst, std::abs(f.g - brute[m].g));
                    CHECK(f.eval.alpha == doctest::Approx(brute[m].eval.alpha).epsilon(1e-9));
                }
            }
        }
    CHECK(worst <= 1e-9);
}

TEST_CASE("the positive rescale leaves the projection unchanged") {
    for (int n = 1; n <= 8; ++n) {
        const SchurBlockDecomposition dec = build_decomposition(example_rho(), example_sigma(), n);
        for (double a : {0.0, 0.2, 0.4, 0.8})
            CHECK(std::abs(fast_iid_evaluation(dec, a, Mode::Strict, true).g -
                           fast_iid_evaluation(dec, a, Mode::Strict, false).g) <= 1e-12);
    }
}

TEST_CASE("pure rho drops the vanishing blocks") {
    const HermitianOperator pure = HermitianOperator::diagonal({1.0, 0.0});
    Matrix m(2, 2);
    m << 0.5, 0.5, 0.5, 0.5;
    const HermitianOperator plus(m);
    for (int n : {3, 6}) {
        const SchurBlockDecomposition dec = build_decomposition(plus, example_sigma(), n);
        for (double a : {-0.5, 0.3})
            CHECK(fast_iid_evaluation(dec, a).g == doctest::Approx(brute_force_iid_g(plus, example_sigma(), n, a)).epsilon(1e-10));
    }
    const SchurBlockDecomposition d2 = build_decomposition(pure, example_sigma(), 4);
    CHECK(fast_iid_evaluation(d2, 0.0).g == doctest::Approx(1.0));
}

TEST_CASE("large n uses log-domain multiplicities") {
    const SchurBlockDecomposition dec = build_decomposition(example_rho(), example_sigma(), 200);
    bool any_log = false;
    for (const auto& b : dec.blocks) any_log = any_log || !b.exact_multiplicity;
    CHECK(any_log);
    double prev = 1.0;
    for (double a = 0.0; a <= 0.8; a += 0.05) {
        const double g = fast_iid_evaluation(dec, a).g;
        CHECK(g >= 0.0);
        CHECK(g <= prev + 1e-12);
        prev = g;
    }
    SchurOptions strict;
    strict.strict_multiplicity = true;
    CHECK_THROWS_AS(build_decomposition(example_rho(), example_sigma(), 60, strict), SizeError);
}

TEST_CASE("the corrupt option breaks agreement with brute force") {
    SchurOptions bad;
    bad.corrupt = true;
    const SchurBlockDecomposition dec = build_decomposition(example_rho(), example_sigma(), 5, bad);
    double worst = 0.0;
    for (double a = -0.5; a <= 1.0; a += 0.1)
        worst = std::max(worst, std::abs(fast_iid_evaluation(dec, a).g - brute_force_iid_g(example_rho(), example_sigma(), 5, a)));
    CHECK(worst > 1e-6);
}

TEST_CASE("the symmetric-power cache round-trips bit-exactly") {
    const Matrix s = sym_power_matrix(example_rho().matrix(), 4);
    const auto path = std::filesystem::temp_directory_path() / sym_cache_key(example_rho().matrix(), 8, 2);
    save_sym_cache(path.string(), s);
    const Matrix back = load_sym_cache(path.string());
    CHECK((back - s).cwiseAbs().maxCoeff() == 0.0);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_sym_cache(path.string()), InputError);
}
