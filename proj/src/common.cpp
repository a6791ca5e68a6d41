#include "infospec/common.hpp"

#include <algorithm>

namespace infospec {

const char* mode_name(Mode m) { return m == Mode::Strict ? "strict" : "nonstrict"; }

Mode parse_mode(const std::string& s) {
    if (s == "strict") return Mode::Strict;
    if (s == "nonstrict") return Mode::Nonstrict;
    throw InputError("unknown mode '" + s + "' (expected strict or nonstrict)");
}

double log_sum_exp(const std::vector<double>& terms) {
    double hi = -kInf;
    for (double t : terms) hi = std::max(hi, t);
    if (hi == -kInf || hi == kInf) return hi;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - hi);
    return hi + std::log(s);
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    if (n > 66) return std::exp(log_binomial(n, k));
    // Each partial product is C(n-k+i, i); 128-bit keeps the pre-division value exact.
    unsigned __int128 c = 1;
    for (int i = 1; i <= k; ++i) c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    return static_cast<double>(c);
}

double log_binomial(int n, int k) {
    if (k < 0 || k > n) return -kInf;
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace infospec
