#include "infospec/classical.hpp"

#include <algorithm>
#include <functional>
#include <json.hpp>
#include <numeric>
#include <sstream>

namespace infospec {

FiniteMeasure::FiniteMeasure(std::vector<double> weights, bool normalized)
    : w_(std::move(weights)), normalized_(normalized) {
    if (w_.empty()) throw InputError("measure must have at least one letter");
    for (double x : w_)
        if (!(x >= 0.0) || !std::isfinite(x)) throw InputError("measure weights must be finite and >= 0");
    if (normalized_) {
        double s = total();
        if (!(std::abs(s - 1.0) <= 1e-12)) {
            std::ostringstream os;
            os.precision(17);
            os << "normalized measure sums to " << s;
            throw InputError(os.str());
        }
    }
}

namespace {

// Neumaier-compensated sum; plain accumulation over 2^20 product weights
// drifts past the 1e-12 normalization check.
double compensated_sum(const std::vector<double>& w) {
    double s = 0.0, c = 0.0;
    for (double x : w) {
        const double t = s + x;
        c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    return s + c;
}

}  // namespace

double FiniteMeasure::total() const { return compensated_sum(w_); }

ClassicalTest::ClassicalTest(std::vector<double> accept) : accept_(std::move(accept)) {
    for (double x : accept_)
        if (!(x >= 0.0 && x <= 1.0)) throw InputError("test values must lie in [0,1]");
}

bool ClassicalTest::deterministic() const {
    return std::all_of(accept_.begin(), accept_.end(), [](double x) { return x == 0.0 || x == 1.0; });
}

size_t ClassicalTest::accepted_count() const {
    return static_cast<size_t>(std::count(accept_.begin(), accept_.end(), 1.0));
}

TieRule TieRule::randomized(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("randomized tie probability must be in [0,1]");
    return {Kind::Randomized, p};
}

TestEvaluation make_evaluation(double alpha, double beta, double beta_c, int n) {
    TestEvaluation e;
    e.alpha = alpha;
    e.beta = beta;
    e.beta_c = beta_c;
    e.eta = neg_log_rate(alpha, n);
    e.zeta = neg_log_rate(beta, n);
    e.zeta_c = neg_log_rate(beta_c, n);
    return e;
}

TestEvaluation make_evaluation_log(double log_alpha, double log_beta, double log_beta_c, int n) {
    TestEvaluation e;
    e.alpha = std::exp(log_alpha);
    e.beta = std::exp(log_beta);
    e.beta_c = std::exp(log_beta_c);
    e.eta = rate_from_log(log_alpha, n);
    e.zeta = rate_from_log(log_beta, n);
    e.zeta_c = rate_from_log(log_beta_c, n);
    return e;
}

double llr(double rho_x, double sigma_x, int n) {
    if (rho_x == 0.0 && sigma_x == 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (rho_x == 0.0) return -kInf;
    if (sigma_x == 0.0) return kInf;
    return (std::log(rho_x) - std::log(sigma_x)) / static_cast<double>(n);
}

static bool is_tie(double z, double a) {
    if (std::isnan(z)) return true;  // 0 - e^{na} 0 = 0 exactly
    if (!std::isfinite(z)) return false;
    return std::abs(z - a) <= kZMergeTol * std::max(1.0, std::abs(a));
}

ClassicalTest classical_np_test(const FiniteMeasure& rho, const FiniteMeasure& sigma, double a, int n,
                                TieRule tie) {
    if (rho.size() != sigma.size()) throw InputError("measures must share one alphabet");
    if (n < 1) throw InputError("n must be >= 1");
    std::vector<double> acc(rho.size(), 0.0);
    for (size_t x = 0; x < rho.size(); ++x) {
        double z = llr(rho[x], sigma[x], n);
        if (is_tie(z, a)) {
            acc[x] = tie.kind == TieRule::Kind::Strict ? 0.0 : tie.kind == TieRule::Kind::Nonstrict ? 1.0 : tie.p;
        } else {
            acc[x] = z > a ? 1.0 : 0.0;
        }
    }
    return ClassicalTest(std::move(acc));
}

TestEvaluation evaluate_test(const FiniteMeasure& rho, const FiniteMeasure& sigma, const ClassicalTest& t,
                             int n) {
    if (rho.size() != sigma.size() || rho.size() != t.size())
        throw InputError("measures and test must share one alphabet");
    double alpha = 0.0, beta = 0.0, beta_c = 0.0;
    for (size_t x = 0; x < rho.size(); ++x) {
        alpha += rho[x] * (1.0 - t[x]);
        beta += sigma[x] * t[x];
        beta_c += sigma[x] * (1.0 - t[x]);
    }
    return make_evaluation(alpha, beta, beta_c, n);
}

double LLRSpectrum::rho_total() const {
    double s = 0.0;
    for (const auto& p : points) s += p.rho_mass;
    return s;
}

double LLRSpectrum::sigma_total() const {
    double s = 0.0;
    for (const auto& p : points) s += p.sigma_mass;
    return s;
}

double type_count(int n, size_t m) {
    if (m <= 1) return 1.0;
    return binomial(n + static_cast<int>(m) - 1, static_cast<int>(m) - 1);
}

LLRSpectrum merge_spectrum(int n, std::vector<SpectrumPoint> pts, bool rho_normalized, bool sigma_normalized) {
    pts.erase(std::remove_if(pts.begin(), pts.end(),
                             [](const SpectrumPoint& p) {
                                 return std::isnan(p.z) || (p.rho_mass == 0.0 && p.sigma_mass == 0.0 &&
                                                            p.log_rho_mass == -kInf && p.log_sigma_mass == -kInf);
                             }),
              pts.end());
    std::stable_sort(pts.begin(), pts.end(), [](const SpectrumPoint& x, const SpectrumPoint& y) { return x.z < y.z; });
    LLRSpectrum out;
    out.n = n;
    out.rho_normalized = rho_normalized;
    out.sigma_normalized = sigma_normalized;
    for (const auto& p : pts) {
        if (!out.points.empty()) {
            SpectrumPoint& q = out.points.back();
            bool same = (p.z == q.z) ||
                        (std::isfinite(p.z) && std::isfinite(q.z) &&
                         std::abs(p.z - q.z) <= kZMergeTol * std::max(1.0, std::abs(q.z)));
            if (same) {
                q.rho_mass += p.rho_mass;
                q.sigma_mass += p.sigma_mass;
                q.log_rho_mass = log_add(q.log_rho_mass, p.log_rho_mass);
                q.log_sigma_mass = log_add(q.log_sigma_mass, p.log_sigma_mass);
                continue;
            }
        }
        out.points.push_back(p);
    }
    return out;
}

namespace {

struct LetterMass {
    double w;
    double logw;
};

// Multinomial weight times prod w_i^{n_i}, linear and log.
void type_mass(const std::vector<int>& counts, const std::vector<LetterMass>& letters, double coef,
               bool coef_exact, double log_coef, double& mass, double& log_mass) {
    double logm = log_coef;
    for (size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        if (letters[i].w == 0.0) {
            mass = 0.0;
            log_mass = -kInf;
            return;
        }
        logm += counts[i] * letters[i].logw;
    }
    if (coef_exact) {
        double m = coef;
        for (size_t i = 0; i < counts.size(); ++i)
            if (counts[i] > 0) m *= std::pow(letters[i].w, counts[i]);
        if (std::isnormal(m) && m > 1e-290) {
            mass = m;
            log_mass = std::log(m);
            return;
        }
    }
    mass = std::exp(logm);
    log_mass = logm;
}

}  // namespace

LLRSpectrum iid_spectrum(const FiniteMeasure& rho, const FiniteMeasure& sigma, int n, long long cap) {
    if (rho.size() != sigma.size()) throw InputError("measures must share one alphabet");
    if (n < 1) throw InputError("n must be >= 1");
    const size_t m = rho.size();
    double count = type_count(n, m);
    if (count > static_cast<double>(cap)) {
        std::ostringstream os;
        os << "type-class count " << count << " exceeds cap " << cap;
        throw SizeError(os.str());
    }
    std::vector<LetterMass> lr(m), ls(m);
    std::vector<double> zl(m);
    for (size_t i = 0; i < m; ++i) {
        lr[i] = {rho[i], rho[i] > 0 ? std::log(rho[i]) : -kInf};
        ls[i] = {sigma[i], sigma[i] > 0 ? std::log(sigma[i]) : -kInf};
    }
    std::vector<SpectrumPoint> pts;
    pts.reserve(static_cast<size_t>(count));
    std::vector<int> c(m, 0);
    const double lgn = std::lgamma(n + 1.0);

    auto emit = [&]() {
        // multinomial as a product of binomials; exact while below 2^53
        double coef = 1.0;
        bool exact = true;
        int partial = 0;
        double log_coef = lgn;
        for (size_t i = 0; i < m; ++i) {
            partial += c[i];
            double b = binomial(partial, c[i]);
            coef *= b;
            log_coef -= std::lgamma(c[i] + 1.0);
        }
        if (!(coef <= 9007199254740992.0)) exact = false;
        if (exact) log_coef = std::log(coef);
        SpectrumPoint p;
        type_mass(c, lr, coef, exact, log_coef, p.rho_mass, p.log_rho_mass);
        type_mass(c, ls, coef, exact, log_coef, p.sigma_mass, p.log_sigma_mass);
        if (p.log_rho_mass == -kInf && p.log_sigma_mass == -kInf) return;
        bool pos = false, neg = false;
        double z = 0.0;
        for (size_t i = 0; i < m; ++i) {
            if (c[i] == 0) continue;
            if (rho[i] == 0.0) neg = true;
            else if (sigma[i] == 0.0) pos = true;
            else z += c[i] * (lr[i].logw - ls[i].logw);
        }
        if (pos && neg) return;
        p.z = neg ? -kInf : pos ? kInf : z / n;
        pts.push_back(p);
    };

    // Enumerate compositions of n into m parts in lexicographic order.
    std::function<void(size_t, int)> rec = [&](size_t i, int left) {
        if (i + 1 == m) {
            c[i] = left;
            emit();
            return;
        }
        for (int k = left; k >= 0; --k) {
            c[i] = k;
            rec(i + 1, left - k);
        }
        c[i] = 0;
    };
    rec(0, n);
    return merge_spectrum(n, std::move(pts), rho.normalized(), sigma.normalized());
}

LLRSpectrum spectrum_of(const FiniteMeasure& rho_n, const FiniteMeasure& sigma_n, int n) {
    if (rho_n.size() != sigma_n.size()) throw InputError("measures must share one alphabet");
    std::vector<SpectrumPoint> pts;
    pts.reserve(rho_n.size());
    for (size_t x = 0; x < rho_n.size(); ++x) {
        SpectrumPoint p;
        p.z = llr(rho_n[x], sigma_n[x], n);
        p.rho_mass = rho_n[x];
        p.sigma_mass = sigma_n[x];
        p.log_rho_mass = rho_n[x] > 0 ? std::log(rho_n[x]) : -kInf;
        p.log_sigma_mass = sigma_n[x] > 0 ? std::log(sigma_n[x]) : -kInf;
        pts.push_back(p);
    }
    return merge_spectrum(n, std::move(pts), rho_n.normalized(), sigma_n.normalized());
}

TestEvaluation spectrum_alpha_beta(const LLRSpectrum& spec, double a, Mode mode) {
    double alpha = 0.0, beta = 0.0, beta_c = 0.0;
    double la = -kInf, lb = -kInf, lbc = -kInf;
    for (const auto& p : spec.points) {
        bool tie = is_tie(p.z, a);
        bool in_s = tie ? mode == Mode::Nonstrict : p.z > a;
        if (in_s) {
            beta += p.sigma_mass;
            lb = log_add(lb, p.log_sigma_mass);
        } else {
            alpha += p.rho_mass;
            la = log_add(la, p.log_rho_mass);
            beta_c += p.sigma_mass;
            lbc = log_add(lbc, p.log_sigma_mass);
        }
    }
    TestEvaluation e;
    e.alpha = alpha;
    e.beta = beta;
    e.beta_c = beta_c;
    e.eta = rate_from_log(la, spec.n);
    e.zeta = rate_from_log(lb, spec.n);
    e.zeta_c = rate_from_log(lbc, spec.n);
    return e;
}

double kl_divergence(const FiniteMeasure& rho, const FiniteMeasure& sigma) {
    if (rho.size() != sigma.size()) throw InputError("measures must share one alphabet");
    double d = 0.0;
    for (size_t x = 0; x < rho.size(); ++x) {
        if (rho[x] == 0.0) continue;
        if (sigma[x] == 0.0) return kInf;
        d += rho[x] * (std::log(rho[x]) - std::log(sigma[x]));
    }
    return d;
}

double classical_psi(const FiniteMeasure& rho, const FiniteMeasure& sigma, double theta) {
    if (rho.size() != sigma.size()) throw InputError("measures must share one alphabet");
    std::vector<double> terms;
    for (size_t x = 0; x < rho.size(); ++x) {
        if (rho[x] == 0.0) continue;
        double lr = std::log(rho[x]);
        if (sigma[x] == 0.0) {
            if (theta > 0) return kInf;
            if (theta < 0) continue;
            terms.push_back(lr);
            continue;
        }
        terms.push_back(lr + theta * (lr - std::log(sigma[x])));
    }
    if (terms.empty()) return -kInf;
    return log_sum_exp(terms);
}

static double xlogxy(double x, double y) {
    if (x == 0.0) return 0.0;
    if (y == 0.0) return kInf;
    return x * (std::log(x) - std::log(y));
}

double binary_divergence(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0))
        throw InputError("binary_divergence arguments must lie in [0,1]");
    return xlogxy(p, q) + xlogxy(1.0 - p, 1.0 - q);
}

double shannon_entropy(const FiniteMeasure& p) {
    double h = 0.0;
    for (double x : p.weights())
        if (x > 0.0) h -= x * std::log(x);
    return h;
}

ClassicalTest truncate_acceptance_region(const ClassicalTest& s, const FiniteMeasure& rho, size_t target_size) {
    if (s.size() != rho.size()) throw InputError("test and measure must share one alphabet");
    if (!s.deterministic()) throw InputError("truncate_acceptance_region needs a deterministic test");
    std::vector<size_t> idx;
    for (size_t x = 0; x < s.size(); ++x)
        if (s[x] == 1.0) idx.push_back(x);
    if (target_size > idx.size()) {
        std::ostringstream os;
        os << "target size " << target_size << " exceeds accepted set size " << idx.size();
        throw InputError(os.str());
    }
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return rho[a] > rho[b]; });
    std::vector<double> acc(s.size(), 0.0);
    for (size_t k = 0; k < target_size; ++k) acc[idx[k]] = 1.0;
    return ClassicalTest(std::move(acc));
}

FiniteMeasure iid_product(const FiniteMeasure& p, int n, long long cap) {
    if (n < 1) throw InputError("n must be >= 1");
    long double total = std::pow(static_cast<long double>(p.size()), n);
    if (total > static_cast<long double>(cap)) {
        std::ostringstream os;
        os << "product alphabet " << p.size() << "^" << n << " exceeds cap " << cap;
        throw SizeError(os.str());
    }
    std::vector<double> w(1, 1.0);
    for (int k = 0; k < n; ++k) {
        std::vector<double> next;
        next.reserve(w.size() * p.size());
        for (double x : w)
            for (double y : p.weights()) next.push_back(x * y);
        w.swap(next);
    }
    if (p.normalized()) {
        // renormalize drift of order n * eps so the flag stays valid
        double s = compensated_sum(w);
        if (std::abs(s - 1.0) > 1e-14)
            for (double& x : w) x /= s;
    }
    return FiniteMeasure(std::move(w), p.normalized());
}

FiniteMeasure measure_from_json_text(const std::string& text) {
    try {
        auto j = nlohmann::json::parse(text);
        if (!j.contains("weights")) throw InputError("measure JSON needs 'weights'");
        auto w = j.at("weights").get<std::vector<double>>();
        bool normalized = j.value("normalized", true);
        return FiniteMeasure(std::move(w), normalized);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("measure JSON: ") + e.what());
    }
}

std::string measure_to_json_text(const FiniteMeasure& m) {
    nlohmann::json j;
    j["weights"] = m.weights();
    j["normalized"] = m.normalized();
    return j.dump();
}

}  // namespace infospec
