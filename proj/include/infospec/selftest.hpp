#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "infospec/classical.hpp"

namespace infospec {

// Margins of the four Neyman-Pearson inequalities for the likelihood test S
// against an arbitrary test T (all must be >= 0):
//   1 - (alpha + e^{na} beta),
//   (alpha_T + e^{na} beta_T) - (alpha + e^{na} beta),
//   e^{na} beta_c - alpha,
//   (alpha_T - e^{na} beta_c_T) - (alpha - e^{na} beta_c).
struct NPMargins {
    double m[4] = {0, 0, 0, 0};
    double min() const;
};
NPMargins np_margins(const TestEvaluation& s, const TestEvaluation& t, double a, int n);

struct SelftestConfig {
    std::uint64_t seed = 1;
    bool corrupt = false;  // flip the det sign of odd Schur sectors
    long long brute_cap = 1 << 10;
    long long type_cap = kDefaultTypeCap;
    int trials = 200;

    nlohmann::json to_json() const;
};

struct PropertyResult {
    enum class Status { Pass, Fail, Skipped };
    std::string name;
    Status status = Status::Pass;
    // "margin": smallest margin, passes when >= -tolerance;
    // "error": largest deviation, passes when <= tolerance.
    std::string measure = "error";
    double worst = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct SelftestReport {
    SelftestConfig config;
    std::vector<PropertyResult> properties;

    bool passed() const;
    nlohmann::json to_json() const;
};

SelftestReport run_selftest(const SelftestConfig& cfg);

}  // namespace infospec
