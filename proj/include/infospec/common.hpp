#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace infospec {

inline constexpr const char* kVersion = "0.3.1";

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error hierarchy. The CLI maps these onto exit codes 2/3/4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InputError : Error {
    using Error::Error;
};
struct DomainError : InputError {
    using InputError::InputError;
};
struct SizeError : Error {
    using Error::Error;
};
struct EigenError : Error {
    using Error::Error;
};
struct PropertyFailure : Error {
    using Error::Error;
};

// Which side of the zero band a test keeps: {A > 0} or {A >= 0}.
enum class Mode { Strict, Nonstrict };

const char* mode_name(Mode m);
Mode parse_mode(const std::string& s);

// log(e^x + e^y) with -inf as the additive identity.
inline double log_add(double x, double y) {
    if (x == -kInf) return y;
    if (y == -kInf) return x;
    if (x == kInf || y == kInf) return kInf;
    double hi = x > y ? x : y;
    double lo = x > y ? y : x;
    return hi + std::log1p(std::exp(lo - hi));
}

double log_sum_exp(const std::vector<double>& terms);

// -(1/n) log p with the 0 -> +inf convention.
inline double neg_log_rate(double p, int n) {
    if (!(p > 0.0)) return kInf;
    return -std::log(p) / static_cast<double>(n);
}

// -(1/n) * logp for values already held in the log domain.
inline double rate_from_log(double logp, int n) {
    if (logp == -kInf) return kInf;
    return -logp / static_cast<double>(n);
}

// Binomial coefficient as a double; exact while the value stays below 2^53.
double binomial(int n, int k);
double log_binomial(int n, int k);

}  // namespace infospec
