#include "infospec/source_coding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace infospec {

CodingSystem code_from_test(const ClassicalTest& t) {
    if (!t.deterministic()) throw InputError("code construction needs a deterministic test");
    CodingSystem c;
    for (size_t x = 0; x < t.size(); ++x)
        if (t[x] == 1.0) c.codebook.push_back(x);
    c.size = c.codebook.size();
    return c;
}

ClassicalTest test_from_code(const CodingSystem& code, size_t alphabet_size) {
    if (code.size != code.codebook.size()) throw InputError("codebook size mismatch");
    std::vector<double> acc(alphabet_size, 0.0);
    for (size_t x : code.codebook) {
        if (x >= alphabet_size) throw InputError("codeword index outside the alphabet");
        if (acc[x] != 0.0) throw InputError("duplicate codeword");
        acc[x] = 1.0;
    }
    return ClassicalTest(std::move(acc));
}

CodeTestReduction code_test_reduction(const FiniteMeasure& p_n, const ClassicalTest& t, int n) {
    if (p_n.size() != t.size()) throw InputError("measure and test must share one alphabet");
    CodeTestReduction out;
    out.code = code_from_test(t);
    // same summation order as evaluate_test, so the identities hold bit for bit
    double err = 0.0;
    for (size_t x = 0; x < p_n.size(); ++x) err += p_n[x] * (1.0 - t[x]);
    out.error = err;
    out.size = static_cast<double>(out.code.size);
    out.test_eval = evaluate_test(p_n, FiniteMeasure::counting(p_n.size()), t, n);
    return out;
}

LLRSpectrum self_information_spectrum(const FiniteMeasure& p, int n, long long cap) {
    LLRSpectrum s = iid_spectrum(p, FiniteMeasure::counting(p.size()), n, cap);
    for (auto& pt : s.points) pt.z = -pt.z;
    std::reverse(s.points.begin(), s.points.end());
    return s;
}

namespace {

// Index of the first point j with P{z > z_j} <= eps, and the tails.
struct Threshold {
    size_t j = 0;
    double tail_after = 0.0;   // P{z > z_j}
    double tail_before = 0.0;  // P{z >= z_j}
};

Threshold find_threshold(const std::vector<SpectrumPoint>& pts, double eps) {
    std::vector<size_t> live;
    for (size_t i = 0; i < pts.size(); ++i)
        if (pts[i].rho_mass > 0.0) live.push_back(i);
    if (live.empty()) throw InputError("distribution has no mass");
    std::vector<double> tail(live.size(), 0.0);  // mass strictly above live[k]
    for (size_t k = live.size() - 1; k > 0; --k) tail[k - 1] = tail[k] + pts[live[k]].rho_mass;
    for (size_t k = 0; k < live.size(); ++k)
        if (tail[k] <= eps) return {live[k], tail[k], tail[k] + pts[live[k]].rho_mass};
    return {live.back(), 0.0, pts[live.back()].rho_mass};
}

}  // namespace

FiniteRateResult finite_n_rate(const FiniteMeasure& p, double epsilon, int n, long long cap, long long greedy_cap) {
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in [0, 1)");
    if (!p.normalized()) throw InputError("source distribution must be normalized");
    const LLRSpectrum s = self_information_spectrum(p, n, cap);
    const Threshold th = find_threshold(s.points, epsilon);
    const SpectrumPoint& pt = s.points[th.j];
    FiniteRateResult out;
    out.rate = pt.z;
    out.error = th.tail_after;

    // Smallest codebook: every sequence strictly more likely than the
    // threshold class, plus just enough of the class itself.
    double log_size = -kInf;
    for (size_t i = 0; i < th.j; ++i) log_size = log_add(log_size, s.points[i].log_sigma_mass);
    const double need = th.tail_before - epsilon;  // > 0 by choice of j
    const double log_k_real = std::log(need) + n * pt.z;
    double log_k;
    if (log_k_real < 40.0) {
        double k = std::ceil(std::exp(log_k_real) - 1e-9);
        k = std::max(k, 1.0);
        log_k = std::min(std::log(k), pt.log_sigma_mass);
    } else {
        log_k = std::min(log_k_real, pt.log_sigma_mass);
    }
    out.log_size = log_add(log_size, log_k);
    out.size_rate = out.log_size / n;

    const long double seqs = std::pow(static_cast<long double>(p.size()), n);
    if (seqs <= static_cast<long double>(greedy_cap)) {
        const FiniteMeasure pn = iid_product(p, n, greedy_cap);
        std::vector<double> w = pn.weights();
        std::sort(w.begin(), w.end(), std::greater<double>());
        std::vector<double> rest(w.size() + 1, 0.0);  // rest[k]: mass outside the top k
        for (size_t k = w.size(); k > 0; --k) rest[k - 1] = rest[k] + w[k - 1];
        size_t k = 0;
        while (k < w.size() && rest[k] > epsilon) ++k;
        out.greedy_checked = true;
        const double z_last = k == 0 ? -kInf : -std::log(w[k - 1]) / n;
        // Skip the comparison when eps sits on a tail value up to rounding.
        const bool ambiguous = std::abs(th.tail_after - epsilon) <= 1e-12 ||
                               std::abs(th.tail_before - epsilon) <= 1e-12;
        if (!ambiguous && k > 0) {
            const bool rate_ok = std::abs(z_last - out.rate) <= 1e-9 * std::max(1.0, std::abs(out.rate));
            const bool size_ok = std::abs(std::log(static_cast<double>(k)) - out.log_size) <= 1e-9;
            if (!rate_ok || !size_ok) {
                std::ostringstream os;
                os << "greedy codebook disagrees with the spectrum: rate " << z_last << " vs " << out.rate
                   << ", size " << k << " vs " << std::exp(out.log_size);
                throw PropertyFailure(os.str());
            }
        }
    }
    return out;
}

SelfInformationTails self_information_tails(const LLRSpectrum& spec, double a, Mode mode) {
    const double tol = kZMergeTol * std::max(1.0, std::abs(a));
    double up = -kInf, lo = -kInf;
    for (const auto& p : spec.points) {
        if (p.log_rho_mass == -kInf) continue;
        const bool tie = std::abs(p.z - a) <= tol;
        const bool above = p.z > a && !tie;
        if (above || (tie && mode == Mode::Nonstrict))
            up = log_add(up, p.log_rho_mass);
        else
            lo = log_add(lo, p.log_rho_mass);
    }
    return {-up / spec.n, -lo / spec.n};
}

namespace {

TailRate self_information_tail_rate(const FiniteMeasure& p) {
    std::vector<double> v, w;
    for (double x : p.weights())
        if (x > 0.0) {
            v.push_back(-std::log(x));
            w.push_back(std::log(x));
        }
    return TailRate(v, w);
}

}  // namespace

SigmaRates sigma_rates(const FiniteMeasure& p, double a) {
    if (!p.normalized()) throw InputError("source distribution must be normalized");
    if (std::isnan(a)) throw InputError("a is NaN");
    const TailRate tr = self_information_tail_rate(p);
    const double lo = tr.min_value(), hi = tr.max_value();
    std::string flag;
    if (a < lo) {
        a = lo;
        flag = "clamped-low";
    } else if (a > hi) {
        a = hi;
        flag = "clamped-high";
    }
    SigmaRates out{tr.upper(a), tr.lower(a)};
    if (!flag.empty()) {
        out.sigma_lower.flags.push_back(flag);
        out.sigma_star_upper.flags.push_back(flag);
    }
    return out;
}

std::vector<double> self_information_grid(const FiniteMeasure& p, int points) {
    if (points < 1) throw InputError("grid needs at least one point");
    const TailRate tr = self_information_tail_rate(p);
    const double lo = tr.min_value(), hi = tr.max_value();
    if (hi - lo <= 1e-12 * std::max(1.0, hi) || points == 1) return {lo};
    std::vector<double> g(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
    g.back() = hi;
    return g;
}

RateFunction sigma_rate_table(const FiniteMeasure& p, const std::vector<double>& grid, RateKind kind) {
    if (kind != RateKind::SigmaLower && kind != RateKind::SigmaStarUpper)
        throw InputError("sigma table kind must be sigma_lower or sigma_star_upper");
    if (!p.normalized()) throw InputError("source distribution must be normalized");
    const TailRate tr = self_information_tail_rate(p);
    const double lo = tr.min_value(), hi = tr.max_value();
    std::vector<double> v(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        const double a = std::clamp(grid[i], lo, hi);
        v[i] = kind == RateKind::SigmaLower ? tr.upper(a).value : tr.lower(a).value;
    }
    return RateFunction(grid, std::move(v), kind);
}

ExponentResult R_e(const RateFunction& sigma_lower, double r) {
    if (sigma_lower.kind() != RateKind::SigmaLower) throw InputError("R_e needs a sigma_lower table");
    if (!(r > 0.0)) throw InputError("R_e needs r > 0");
    ExponentResult out;
    out.method = "sup-grid";
    out.value = -kInf;
    out.optimizer = std::nan("");
    const auto& g = sigma_lower.grid();
    const auto& v = sigma_lower.values();
    for (size_t i = 0; i < g.size(); ++i) {
        if (!(v[i] < r)) continue;
        const double c = g[i] - v[i];
        if (c > out.value) {
            out.value = c;
            out.optimizer = g[i];
        }
    }
    if (out.value == -kInf) out.flags.push_back("empty-constraint");
    out.flags.push_back("grid-resolved");
    return out;
}

ExponentResult R_e(const FiniteMeasure& p, double r, int points) {
    return R_e(sigma_rate_table(p, self_information_grid(p, points), RateKind::SigmaLower), r);
}

ExponentResult R_e_star(const RateFunction& sigma_star_upper, double r) {
    if (sigma_star_upper.kind() != RateKind::SigmaStarUpper)
        throw InputError("R_e_star needs a sigma_star_upper table");
    if (!(r >= 0.0)) throw InputError("R_e_star needs r >= 0");
    ExponentResult out;
    out.method = "bisection-grid";
    const auto& g = sigma_star_upper.grid();
    const auto& v = sigma_star_upper.values();
    // values are nonincreasing, so {sigma* > r} is a prefix
    const size_t cnt = static_cast<size_t>(
        std::partition_point(v.begin(), v.end(), [r](double x) { return x > r; }) - v.begin());
    double b0;
    if (cnt == 0) {
        b0 = g.front();
        out.flags.push_back("b0-at-grid-start");
    } else {
        b0 = g[cnt - 1];
    }
    out.optimizer = b0;
    out.value = std::max(b0 - r, 0.0);
    if (b0 <= r) out.flags.push_back("clamped-zero");
    out.flags.push_back("grid-resolved");
    return out;
}

ExponentResult R_e_star(const FiniteMeasure& p, double r, int points) {
    return R_e_star(sigma_rate_table(p, self_information_grid(p, points), RateKind::SigmaStarUpper), r);
}

SourceRateReport source_report(const FiniteMeasure& p, const std::vector<double>& eps_list,
                               const std::vector<int>& n_list, double r, int points, long long cap) {
    SourceRateReport rep;
    rep.H_upper = rep.H_lower = shannon_entropy(p);
    for (int n : n_list)
        for (double e : eps_list) rep.R_eps_table.push_back({e, n, finite_n_rate(p, e, n, cap, 0).rate});
    const std::vector<double> grid = self_information_grid(p, points);
    rep.sigma_lower = sigma_rate_table(p, grid, RateKind::SigmaLower);
    rep.sigma_star_upper = sigma_rate_table(p, grid, RateKind::SigmaStarUpper);
    if (r > 0.0) {
        rep.R_e = R_e(rep.sigma_lower, r);
    } else {
        rep.R_e.value = std::nan("");
        rep.R_e.method = "sup-grid";
        rep.R_e.flags.push_back("not-evaluated");
    }
    rep.R_e_star = R_e_star(rep.sigma_star_upper, r);
    return rep;
}

}  // namespace infospec
