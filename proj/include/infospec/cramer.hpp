#pragma once

#include <functional>
#include <string>
#include <vector>

#include "infospec/common.hpp"

namespace infospec {

struct ExponentResult {
    double value = 0.0;
    double optimizer = 0.0;  // theta*, or a0 / a0* / a0** / b0
    std::string method;
    std::vector<std::string> flags;

    bool has_flag(const std::string& f) const;
};

// Sample mean of i.i.d. draws from a finite distribution with values in
// [-inf, +inf]: large-deviation rates -lim (1/n) log P{mean <= a} (lower)
// and -lim (1/n) log P{mean > a} (upper), by Legendre transform of the
// cumulant function. At a support edge the closed tail is used, so the
// upper rate at the largest value is -log of its weight. Weights need not be
// normalized.
class TailRate {
public:
    TailRate(const std::vector<double>& values, const std::vector<double>& log_weights);

    ExponentResult lower(double a) const;
    ExponentResult upper(double a) const;

    // log sum over finite points of w e^{theta v}, with first and second
    // derivatives (tilted mean and variance).
    double cumulant(double theta) const;
    double cumulant_d1(double theta) const;
    double cumulant_d2(double theta) const;

    double finite_mean() const;
    double min_value() const;  // over finite points
    double max_value() const;
    bool has_finite() const { return !v_.empty(); }

private:
    ExponentResult lower_impl(double a, double sign) const;

    std::vector<double> v_, w_;    // finite points
    double log_pinf_ = -kInf;      // log weight at +inf
    double log_minf_ = -kInf;      // log weight at -inf
};

// Golden-section maximization of f on [lo, hi] down to `width`.
struct Maximum {
    double x = 0.0;
    double f = 0.0;
};
Maximum golden_maximize(const std::function<double(double)>& f, double lo, double hi, double width = 1e-10);

// Coarse scan on `points` equispaced nodes, then golden section inside the
// best cell.
Maximum scan_then_golden(const std::function<double(double)>& f, double lo, double hi, int points,
                         double width = 1e-10);

}  // namespace infospec
