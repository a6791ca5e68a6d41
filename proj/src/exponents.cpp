#include "infospec/exponents.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <sstream>

#include "infospec/io.hpp"
#include "infospec/schur.hpp"

namespace infospec {

const char* rate_kind_name(RateKind k) {
    switch (k) {
        case RateKind::EtaLower: return "eta_lower";
        case RateKind::ZetaLower: return "zeta_lower";
        case RateKind::ZetaCUpper: return "zeta_c_upper";
        case RateKind::SigmaLower: return "sigma_lower";
        case RateKind::SigmaStarUpper: return "sigma_star_upper";
    }
    return "?";
}

RateKind parse_rate_kind(const std::string& s) {
    for (RateKind k : {RateKind::EtaLower, RateKind::ZetaLower, RateKind::ZetaCUpper, RateKind::SigmaLower,
                       RateKind::SigmaStarUpper})
        if (s == rate_kind_name(k)) return k;
    throw InputError("unknown rate kind '" + s + "'");
}

bool rate_kind_nonincreasing(RateKind k) {
    return k == RateKind::EtaLower || k == RateKind::ZetaCUpper || k == RateKind::SigmaStarUpper;
}

namespace {

// Amount by which `next` breaks the monotone direction relative to `prev`.
double step_violation(double prev, double next, bool nonincreasing) {
    if (!nonincreasing) std::swap(prev, next);
    // want next <= prev
    if (next == kInf && prev != kInf) return kInf;
    if (prev == -kInf && next != -kInf) return kInf;
    if (!std::isfinite(next) || !std::isfinite(prev)) return 0.0;
    double d = next - prev;
    return d > 1e-9 * std::max(1.0, std::abs(prev)) ? d : 0.0;
}

}  // namespace

RateFunction RateFunction::unchecked(std::vector<double> grid, std::vector<double> values, RateKind kind) {
    if (grid.empty() || grid.size() != values.size()) throw InputError("rate function needs matching nonempty grid");
    for (size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw InputError("rate grid must be finite");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw InputError("rate grid must be strictly ascending");
        if (std::isnan(values[i])) throw InputError("rate values must not be NaN");
    }
    RateFunction f;
    f.grid_ = std::move(grid);
    f.values_ = std::move(values);
    f.kind_ = kind;
    return f;
}

RateFunction::RateFunction(std::vector<double> grid, std::vector<double> values, RateKind kind) {
    *this = unchecked(std::move(grid), std::move(values), kind);
    if (monotone_violation() > 0.0) {
        std::ostringstream os;
        os << rate_kind_name(kind_) << " values are not "
           << (rate_kind_nonincreasing(kind_) ? "nonincreasing" : "nondecreasing") << " on the grid";
        throw InputError(os.str());
    }
    if (kind_ == RateKind::ZetaLower)
        for (size_t i = 0; i < grid_.size(); ++i)
            if (values_[i] < grid_[i] - 1e-9 * std::max(1.0, std::abs(grid_[i])))
                throw InputError("zeta_lower must satisfy zeta(a) >= a");
}

double RateFunction::spacing() const {
    double h = 0.0;
    for (size_t i = 1; i < grid_.size(); ++i) h = std::max(h, grid_[i] - grid_[i - 1]);
    return h;
}

double RateFunction::monotone_violation() const {
    double worst = 0.0;
    const bool dec = rate_kind_nonincreasing(kind_);
    for (size_t i = 1; i < values_.size(); ++i) worst = std::max(worst, step_violation(values_[i - 1], values_[i], dec));
    return worst;
}

void ExponentQuery::validate() const {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InputError("epsilon must lie in [0,1]");
    if (theta_grid < 64) throw InputError("theta grid needs at least 64 points");
    if (std::isnan(r)) throw InputError("r must not be NaN");
}

double grid_tolerance(double spacing) { return spacing + 1e-9; }

// ---------------------------------------------------------------------------
// classical Cramer rates

namespace {

TailRate llr_under(const FiniteMeasure& rho, const FiniteMeasure& sigma, bool under_rho) {
    if (rho.size() != sigma.size()) throw InputError("rho and sigma alphabets differ");
    std::vector<double> v, w;
    for (size_t x = 0; x < rho.size(); ++x) {
        double wx = under_rho ? rho[x] : sigma[x];
        if (!(wx > 0.0)) continue;
        v.push_back(llr(rho[x], sigma[x], 1));
        w.push_back(std::log(wx));
    }
    return TailRate(v, w);
}

std::once_flag zeta_c_once;

}  // namespace

ExponentResult classical_eta_rate(const FiniteMeasure& rho, const FiniteMeasure& sigma, double a) {
    auto res = llr_under(rho, sigma, true).lower(a);
    if (a > kl_divergence(rho, sigma)) res.flags.push_back("clamped");
    if (a < -kl_divergence(sigma, rho)) res.flags.push_back("extended-beyond-interval");
    return res;
}

ExponentResult classical_zeta_rate(const FiniteMeasure& rho, const FiniteMeasure& sigma, double a) {
    return llr_under(rho, sigma, false).upper(a);
}

void zeta_c_self_test() {
    std::call_once(zeta_c_once, [] {
        FiniteMeasure rho = FiniteMeasure::probability({0.3, 0.7});
        FiniteMeasure sigma = FiniteMeasure::probability({0.6, 0.4});
        TailRate t = llr_under(rho, sigma, false);
        for (int n : {200, 500, 1000}) {
            LLRSpectrum spec = iid_spectrum(rho, sigma, n);
            for (double a : {-0.6, -0.45, -0.3}) {
                double exact = spectrum_alpha_beta(spec, a, Mode::Strict).zeta_c;
                double rate = t.lower(a).value;
                double allowance = 2.0 * std::log(static_cast<double>(n)) / n;
                if (!(exact >= rate - 1e-9) || !(exact - rate <= allowance)) {
                    std::ostringstream os;
                    os << "zeta_c closed form failed its type-class check at n=" << n << ", a=" << a
                       << " (finite " << exact << ", closed form " << rate << ")";
                    throw PropertyFailure(os.str());
                }
            }
        }
    });
}

ExponentResult classical_zeta_c_rate(const FiniteMeasure& rho, const FiniteMeasure& sigma, double a) {
    zeta_c_self_test();
    auto res = llr_under(rho, sigma, false).lower(a);
    if (a > -kl_divergence(sigma, rho)) res.flags.push_back("clamped");
    return res;
}

RateFunction classical_rate_table(const FiniteMeasure& rho, const FiniteMeasure& sigma,
                                  const std::vector<double>& grid, RateKind kind) {
    std::vector<double> vals;
    vals.reserve(grid.size());
    for (double a : grid) {
        switch (kind) {
            case RateKind::EtaLower: vals.push_back(classical_eta_rate(rho, sigma, a).value); break;
            case RateKind::ZetaLower: vals.push_back(classical_zeta_rate(rho, sigma, a).value); break;
            case RateKind::ZetaCUpper: vals.push_back(classical_zeta_c_rate(rho, sigma, a).value); break;
            default: throw InputError("rate kind is not a likelihood-ratio rate");
        }
    }
    return RateFunction(grid, std::move(vals), kind);
}

// ---------------------------------------------------------------------------
// error exponent from rate tables

namespace {

void require_shared_grid(const RateFunction& f, const RateFunction& g) {
    if (f.size() != g.size()) throw InputError("rate functions must share a grid");
    for (size_t i = 0; i < f.size(); ++i)
        if (std::abs(f.grid()[i] - g.grid()[i]) > 1e-12 * std::max(1.0, std::abs(f.grid()[i])))
            throw InputError("rate functions must share a grid");
}

bool same_value(double x, double y) {
    if (x == y) return true;
    if (!std::isfinite(x) || !std::isfinite(y)) return false;
    return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x));
}

bool close(double x, double y, double tol) {
    if (x == y) return true;
    if (!std::isfinite(x) || !std::isfinite(y)) return false;
    return std::abs(x - y) <= tol;
}

}  // namespace

ErrorExponentForms B_e_forms(const RateFunction& eta, const RateFunction& zeta, double r) {
    require_shared_grid(eta, zeta);
    const auto& a = eta.grid();
    const auto& e = eta.values();
    const auto& z = zeta.values();
    const size_t N = a.size();
    ErrorExponentForms f;
    f.sup_form = -kInf;
    f.inf_form = kInf;
    long last = -1;
    // r = 0 is read as the right limit r -> 0+, i.e. the constraint eta > 0;
    // taken literally eta >= 0 holds everywhere and the value is +inf.
    auto constrained = [r](double v) { return r == 0.0 ? v > 0.0 : v >= r; };
    for (size_t i = 0; i < N; ++i) {
        if (constrained(e[i])) {
            f.sup_form = std::max(f.sup_form, z[i]);
            last = static_cast<long>(i);
        } else {
            f.inf_form = std::min(f.inf_form, a[i] + e[i]);
        }
    }
    if (last < 0) {
        f.a0 = -kInf;
        f.zeta_left = -kInf;
        f.a0_plus_eta_right = -kInf;
        return f;
    }
    size_t i0 = static_cast<size_t>(last);
    while (i0 + 1 < N && same_value(z[i0 + 1], z[static_cast<size_t>(last)])) ++i0;
    f.a0 = a[i0];
    f.zeta_left = z[i0];
    f.a0_plus_eta_right = i0 + 1 < N ? a[i0] + e[i0 + 1] : kInf;
    return f;
}

ExponentResult B_e_from_rates(const RateFunction& eta, const RateFunction& zeta, double r) {
    ErrorExponentForms f = B_e_forms(eta, zeta, r);
    ExponentResult res;
    res.method = "dual-form-grid";
    res.optimizer = f.a0;
    res.flags.push_back("grid-resolved");
    if (f.sup_form == -kInf) {
        res.value = -kInf;
        res.flags.push_back("empty-constraint");
        return res;
    }
    if (f.inf_form == kInf) {
        // eta >= r on the whole grid: the infimum runs over an empty set
        res.value = kInf;
        res.flags.push_back("inf-form-empty");
        return res;
    }
    res.value = f.sup_form;
    const double tol = grid_tolerance(eta.spacing());
    if (!close(f.sup_form, f.inf_form, tol) || !close(f.sup_form, f.zeta_left, tol) ||
        !close(f.sup_form, f.a0_plus_eta_right, tol))
        res.flags.push_back("dual-form-disagreement");
    return res;
}

// ---------------------------------------------------------------------------
// single-letter theta forms

namespace {

struct PsiFunctions {
    std::function<double(double)> psi;
    std::function<double(double)> d1;  // may be empty
    std::function<double(double)> d2;
};

constexpr double kInset = 1e-6;

// max over [lo, hi] of ((1+t) r + psi(t)) / t, with Newton polish on
// t psi'(t) - psi(t) - r = 0 when derivatives are available.
Maximum theta_form_max(const PsiFunctions& p, double r, double lo, double hi, int points) {
    auto f = [&](double t) { return ((1.0 + t) * r + p.psi(t)) / t; };
    Maximum m = scan_then_golden(f, lo, hi, points);
    if (p.d1 && p.d2) {
        double t = m.x;
        for (int it = 0; it < 3; ++it) {
            double d1 = p.d1(t), d2 = p.d2(t);
            double nt = t * d1 - p.psi(t) - r, nd = t * d2;
            if (!(nd != 0.0) || !std::isfinite(nt)) break;
            double tn = t - nt / nd;
            if (!(tn >= lo && tn <= hi)) break;
            double fn = f(tn);
            if (!(fn >= m.f)) break;
            t = tn;
            m = {tn, fn};
        }
    }
    return m;
}

ExponentResult hoeffding_core(const PsiFunctions& p, double psi0_left, double D, double r, const ExponentQuery& q) {
    q.validate();
    if (r < 0.0) throw InputError("r must be >= 0");
    ExponentResult res;
    res.method = "theta-form";
    const double hi = -kInset;
    Maximum m = theta_form_max(p, r, -1.0, hi, q.theta_grid);
    res.value = m.f;
    res.optimizer = m.x;
    auto f = [&](double t) { return ((1.0 + t) * r + p.psi(t)) / t; };
    const bool at_inset = m.x >= hi - 1e-9;
    if (at_inset && f(hi) >= f(hi - 1e-7)) {
        // still increasing at the inset: use the limit theta -> 0-
        const double lim = r + psi0_left;
        res.optimizer = 0.0;
        if (lim < -1e-15) {
            res.value = kInf;
            res.method = "limit theta->0-";
        } else if (std::abs(lim) <= 1e-15) {
            res.value = D;
            res.method = "limit theta->0-";
        } else {
            res.optimizer = hi;
            res.flags.push_back("inset-boundary");
        }
    }
    return res;
}

PsiFunctions classical_psi_functions(const TailRate& t) {
    PsiFunctions p;
    p.psi = [&t](double th) { return t.cumulant(th); };
    p.d1 = [&t](double th) { return t.cumulant_d1(th); };
    p.d2 = [&t](double th) { return t.cumulant_d2(th); };
    return p;
}

}  // namespace

ExponentResult hoeffding_exponent(const FiniteMeasure& rho, const FiniteMeasure& sigma, double r,
                                  const ExponentQuery& q) {
    TailRate t = llr_under(rho, sigma, true);
    if (!t.has_finite()) {
        // rho and sigma have disjoint supports
        ExponentResult res;
        res.value = kInf;
        res.method = "disjoint-supports";
        return res;
    }
    return hoeffding_core(classical_psi_functions(t), t.cumulant(0.0), kl_divergence(rho, sigma), r, q);
}

ExponentResult han_kobayashi_exponent(const FiniteMeasure& rho, const FiniteMeasure& sigma, double r,
                                      const ExponentQuery& q) {
    q.validate();
    if (r < 0.0) throw InputError("r must be >= 0");
    ExponentResult res;
    const double dsr = kl_divergence(sigma, rho);
    if (r <= dsr) {
        res.value = 0.0;
        res.optimizer = -1.0;
        res.method = "vanishing";
        return res;
    }
    TailRate t = llr_under(rho, sigma, true);
    if (!t.has_finite()) throw InputError("rho and sigma have disjoint supports");
    PsiFunctions p = classical_psi_functions(t);
    auto f = [&](double th) { return ((1.0 + th) * r + p.psi(th)) / th; };
    double big = 40.0;
    Maximum m = theta_form_max(p, r, -big, -1.0, q.theta_grid);
    res.method = "theta-form";
    bool extended = false;
    while (m.x <= -big + 1e-8 * big && f(-big) >= f(-big * (1.0 - 1e-6))) {
        // increasing toward -inf at the truncation point
        extended = true;
        if (big >= 1e6) break;
        big *= 4.0;
        m = theta_form_max(p, r, -big, -1.0, q.theta_grid);
    }
    res.value = m.f;
    res.optimizer = m.x;
    if (extended) res.flags.push_back("extended-theta-range");
    if (m.x <= -big + 1e-8 * big) {
        // sup is the limit r + min L as theta -> -inf
        double lim = r + t.min_value();
        if (lim >= res.value) {
            res.value = lim;
            res.optimizer = -kInf;
            res.method = "limit theta->-inf";
        }
    }
    return res;
}

ExponentResult quantum_hoeffding_lower_bound(const HermitianOperator& rho, const HermitianOperator& sigma, double r,
                                             const ExponentQuery& q) {
    PsiFunctions p;
    p.psi = [&](double th) { return quantum_psi(rho, sigma, th); };
    return hoeffding_core(p, quantum_psi_left_limit(rho, sigma), quantum_relative_entropy(rho, sigma), r, q);
}

// ---------------------------------------------------------------------------
// correct-testing exponent from zeta_c tables

CorrectExponentForms B_e_star_forms(const RateFunction& zeta_c, double r) {
    const auto& a = zeta_c.grid();
    const auto& z = zeta_c.values();
    CorrectExponentForms f;
    f.sup_form = -kInf;
    f.inf_form = kInf;
    long last = -1;
    for (size_t i = 0; i < a.size(); ++i) {
        f.sup_form = std::max(f.sup_form, std::min(z[i], r + a[i]));
        f.inf_form = std::min(f.inf_form, std::max(z[i], r + a[i]));
        if (z[i] - a[i] >= r) last = static_cast<long>(i);
    }
    f.a0 = last < 0 ? a.front() : a[static_cast<size_t>(last)];
    // linear crossing of zeta_c(a) - a = r inside the bracketing cell
    if (last >= 0 && static_cast<size_t>(last) + 1 < a.size()) {
        const size_t i = static_cast<size_t>(last);
        const double f0 = z[i] - a[i] - r, f1 = z[i + 1] - a[i + 1] - r;
        if (std::isfinite(f0) && std::isfinite(f1) && f0 > f1) f.a0 = a[i] + (a[i + 1] - a[i]) * f0 / (f0 - f1);
    }
    f.r_plus_a0 = r + f.a0;
    return f;
}

ExponentResult B_e_star_from_rates(const RateFunction& zeta_c, double r) {
    CorrectExponentForms f = B_e_star_forms(zeta_c, r);
    ExponentResult res;
    res.method = "crossing-interpolated";
    res.optimizer = f.a0;
    res.value = f.r_plus_a0;
    res.flags.push_back("grid-resolved");
    const auto& a = zeta_c.grid();
    const auto& z = zeta_c.values();
    if (z.front() - a.front() < r) res.flags.push_back("a0-below-grid");
    if (z.back() - a.back() >= r) res.flags.push_back("a0-above-grid");
    const double tol = grid_tolerance(zeta_c.spacing());
    if (!close(f.sup_form, f.r_plus_a0, tol) || !close(f.inf_form, f.r_plus_a0, tol))
        res.flags.push_back("dual-form-disagreement");
    return res;
}

ExponentResult B_e_star_star(const RateFunction& zeta_c, double r) {
    const auto& a = zeta_c.grid();
    const auto& z = zeta_c.values();
    ExponentResult res;
    res.method = "inverse-crossing-interpolated";
    res.flags.push_back("grid-resolved");
    // first index with zeta_c <= r (values nonincreasing)
    size_t lo = 0, hi = z.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (z[mid] <= r)
            hi = mid;
        else
            lo = mid + 1;
    }
    if (lo == z.size()) {
        res.value = -kInf;
        res.optimizer = kInf;
        res.flags.push_back("a0-above-grid");
        return res;
    }
    if (lo == 0) res.flags.push_back("a0-at-grid-start");
    double a0 = a[lo];
    // linear crossing of zeta_c = r inside the cell that brackets it
    if (lo > 0 && std::isfinite(z[lo - 1]) && z[lo - 1] > z[lo])
        a0 = a[lo - 1] + (a[lo] - a[lo - 1]) * (z[lo - 1] - r) / (z[lo - 1] - z[lo]);
    res.optimizer = a0;
    res.value = r - a0;
    return res;
}

// ---------------------------------------------------------------------------
// tilted tests

namespace {

void check_tilted(const TestEvaluation& ev, double r, double a, int n) {
    const double target = std::exp(-n * r);
    if (!(std::abs(ev.alpha - target) <= 1e-12 * target)) {
        std::ostringstream os;
        os << "tilted test: alpha = " << ev.alpha << " but e^{-nr} = " << target;
        throw PropertyFailure(os.str());
    }
    if (!(ev.zeta_c <= r + a + 1e-9)) {
        std::ostringstream os;
        os << "tilted test: zeta_c = " << ev.zeta_c << " exceeds r + a = " << r + a;
        throw PropertyFailure(os.str());
    }
}

TestEvaluation tilted_evaluation(const TestEvaluation& s, double q, int n) {
    return make_evaluation(q * s.alpha, s.beta + (1.0 - q) * s.beta_c, q * s.beta_c, n);
}

}  // namespace

TiltedClassicalTest construct_tilted_test(const FiniteMeasure& rho_n, const FiniteMeasure& sigma_n, double a,
                                          double r, int n, TieRule tie) {
    ClassicalTest s = classical_np_test(rho_n, sigma_n, a, n, tie);
    TestEvaluation ev = evaluate_test(rho_n, sigma_n, s, n);
    if (ev.eta >= r) return {s, ev, false, 0.0};
    if (!(ev.alpha > 0.0)) throw InputError("alpha_n(a) = 0 leaves nothing to tilt");
    const double q = std::exp(-n * r - std::log(ev.alpha));
    const double c = 1.0 - q;
    std::vector<double> t(s.size());
    for (size_t i = 0; i < t.size(); ++i) t[i] = s[i] + c * (1.0 - s[i]);
    TiltedClassicalTest out{ClassicalTest(std::move(t)), tilted_evaluation(ev, q, n), true, c};
    check_tilted(out.eval, r, a, n);
    return out;
}

TiltedQuantumTest construct_tilted_test(const HermitianOperator& rho_n, const HermitianOperator& sigma_n, double a,
                                        double r, int n, Mode mode) {
    Projection p = quantum_np_projection(rho_n, sigma_n, a, n, mode);
    QuantumTest s(p);
    TestEvaluation ev = evaluate_quantum_test(rho_n, sigma_n, s, n);
    if (ev.eta >= r) return {s, ev, false, 0.0};
    if (!(ev.alpha > 0.0)) throw InputError("alpha_n(a) = 0 leaves nothing to tilt");
    const double q = std::exp(-n * r - std::log(ev.alpha));
    const double c = 1.0 - q;
    const Matrix id = Matrix::Identity(rho_n.dim(), rho_n.dim());
    QuantumTest t(HermitianOperator::symmetrized(p.matrix() + c * (id - p.matrix())));
    TiltedQuantumTest out{t, tilted_evaluation(ev, q, n), true, c};
    check_tilted(out.eval, r, a, n);
    return out;
}

// ---------------------------------------------------------------------------

std::string HanReport::to_json() const {
    nlohmann::json j;
    j["han_value"] = json_number(han_value);
    j["theorem4_value"] = json_number(theorem4_value);
    j["condition_holds"] = condition_holds;
    j["equal"] = equal;
    return j.dump();
}

HanReport han_formula_check(const RateFunction& eta, const RateFunction& zeta_c, double r) {
    require_shared_grid(eta, zeta_c);
    const auto& a = eta.grid();
    const auto& e = eta.values();
    const auto& z = zeta_c.values();
    HanReport rep;
    rep.han_value = kInf;
    for (size_t i = 0; i < a.size(); ++i) {
        if (e[i] == kInf) continue;
        rep.han_value = std::min(rep.han_value, a[i] + e[i] + std::max(r - e[i], 0.0));
    }
    rep.theorem4_value = B_e_star_from_rates(zeta_c, r).value;
    const double z0 = z.front();
    if (z0 == kInf) {
        rep.condition_holds = true;
    } else {
        double b = a.front();
        for (size_t i = 0; i < a.size() && same_value(z[i], z0); ++i) b = a[i];
        rep.condition_holds = r <= z0 - b;
    }
    rep.equal = close(rep.han_value, rep.theorem4_value, grid_tolerance(eta.spacing()));
    return rep;
}

// ---------------------------------------------------------------------------
// finite-n samples and Stein thresholds

namespace {

struct Evaluator {
    // returns the evaluation of S_n(a) for one n
    std::function<TestEvaluation(double)> eval;
};

Evaluator make_evaluator(const IidPair& pair, int n, Mode mode, const SampleCaps& caps) {
    if (const auto* c = std::get_if<ClassicalPair>(&pair)) {
        auto spec = std::make_shared<LLRSpectrum>(iid_spectrum(c->rho, c->sigma, n, caps.type_cap));
        return {[spec, mode](double a) { return spectrum_alpha_beta(*spec, a, mode); }};
    }
    const auto& q = std::get<QuantumPair>(pair);
    if (q.rho.dim() == 2) {
        auto dec = std::make_shared<SchurBlockDecomposition>(build_decomposition(q.rho, q.sigma, n));
        return {[dec, mode](double a) { return fast_iid_evaluation(*dec, a, mode).eval; }};
    }
    auto rn = std::make_shared<HermitianOperator>(tensor_power(q.rho, n, caps.brute_cap));
    auto sn = std::make_shared<HermitianOperator>(tensor_power(q.sigma, n, caps.brute_cap));
    return {[rn, sn, n, mode](double a) { return quantum_np_evaluation(*rn, *sn, a, n, mode).eval; }};
}

}  // namespace

std::vector<FiniteRateSamples> finite_n_rate_samples(const IidPair& pair, const std::vector<int>& n_list,
                                                     const std::vector<double>& a_grid, Mode mode,
                                                     const SampleCaps& caps) {
    std::vector<FiniteRateSamples> out;
    for (int n : n_list) {
        if (n < 1) throw InputError("n must be >= 1");
        Evaluator ev = make_evaluator(pair, n, mode, caps);
        FiniteRateSamples s;
        s.n = n;
        std::vector<double> eta, zeta, zeta_c;
        for (double a : a_grid) {
            TestEvaluation e = ev.eval(a);
            eta.push_back(e.eta);
            zeta.push_back(e.zeta);
            zeta_c.push_back(e.zeta_c);
            s.alpha.push_back(e.alpha);
            s.beta.push_back(e.beta);
            s.beta_c.push_back(e.beta_c);
        }
        s.eta = RateFunction::unchecked(a_grid, eta, RateKind::EtaLower);
        s.zeta = RateFunction::unchecked(a_grid, zeta, RateKind::ZetaLower);
        s.zeta_c = RateFunction::unchecked(a_grid, zeta_c, RateKind::ZetaCUpper);
        out.push_back(std::move(s));
    }
    return out;
}

double classical_stein_threshold(const LLRSpectrum& spec, double epsilon) {
    double cum = 0.0;
    for (const auto& p : spec.points) {
        cum += p.rho_mass;
        if (cum > epsilon) return p.z;
    }
    return kInf;
}

SteinReport stein_report(const IidPair& pair, double epsilon, const std::vector<int>& n_list,
                         const std::vector<double>& a_grid, const SampleCaps& caps) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0,1)");
    if (n_list.empty()) throw InputError("n list is empty");
    std::vector<int> ns = n_list;
    std::sort(ns.begin(), ns.end());
    SteinReport rep;
    const bool classical = std::holds_alternative<ClassicalPair>(pair);
    if (classical) {
        const auto& c = std::get<ClassicalPair>(pair);
        rep.analytic_target = kl_divergence(c.rho, c.sigma);
    } else {
        const auto& q = std::get<QuantumPair>(pair);
        rep.analytic_target = quantum_relative_entropy(q.rho, q.sigma);
    }
    for (int n : ns) {
        SteinRow row;
        row.n = n;
        if (classical) {
            const auto& c = std::get<ClassicalPair>(pair);
            row.threshold = classical_stein_threshold(iid_spectrum(c.rho, c.sigma, n, caps.type_cap), epsilon);
        } else {
            if (a_grid.size() < 2) throw InputError("quantum thresholds need an a-grid bracket");
            Evaluator ev = make_evaluator(pair, n, Mode::Strict, caps);
            double lo = a_grid.front(), hi = a_grid.back();
            if (ev.eval(hi).alpha <= epsilon) {
                row.threshold = hi;
                rep.flags.push_back("threshold-above-grid");
            } else if (ev.eval(lo).alpha > epsilon) {
                row.threshold = lo;
                rep.flags.push_back("threshold-below-grid");
            } else {
                for (int it = 0; it < 60; ++it) {
                    double mid = 0.5 * (lo + hi);
                    (ev.eval(mid).alpha <= epsilon ? lo : hi) = mid;
                }
                row.threshold = lo;
            }
        }
        row.error = std::abs(row.threshold - rep.analytic_target);
        rep.per_n_thresholds.push_back(row);
    }
    rep.D_lower_estimate = rep.per_n_thresholds.back().threshold;
    rep.D_upper_estimate = rep.D_lower_estimate;
    for (size_t i = rep.per_n_thresholds.size() / 2; i < rep.per_n_thresholds.size(); ++i)
        rep.D_upper_estimate = std::max(rep.D_upper_estimate, rep.per_n_thresholds[i].threshold);
    rep.strong_converse_gap = rep.D_upper_estimate - rep.D_lower_estimate;
    if (std::abs(rep.analytic_target) <= 1e-15) {
        rep.degenerate = true;
        rep.flags.push_back("degenerate");
    }
    return rep;
}

}  // namespace infospec
