#include "infospec/cramer.hpp"

#include <algorithm>
#include <cmath>

namespace infospec {

bool ExponentResult::has_flag(const std::string& f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

TailRate::TailRate(const std::vector<double>& values, const std::vector<double>& log_weights) {
    if (values.size() != log_weights.size()) throw InputError("values and weights differ in length");
    for (size_t i = 0; i < values.size(); ++i) {
        double v = values[i], w = log_weights[i];
        if (std::isnan(v) || std::isnan(w) || w == kInf) throw InputError("bad tail-rate point");
        if (w == -kInf) continue;
        if (v == kInf)
            log_pinf_ = log_add(log_pinf_, w);
        else if (v == -kInf)
            log_minf_ = log_add(log_minf_, w);
        else {
            v_.push_back(v);
            w_.push_back(w);
        }
    }
}

namespace {

struct Moments {
    double log_z;
    double mean;
    double var;
};

Moments tilted(const std::vector<double>& v, const std::vector<double>& w, double theta) {
    double hi = -kInf;
    for (size_t i = 0; i < v.size(); ++i) hi = std::max(hi, w[i] + theta * v[i]);
    double z = 0.0, m1 = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        double e = std::exp(w[i] + theta * v[i] - hi);
        z += e;
        m1 += e * v[i];
    }
    double mean = m1 / z, m2 = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        double e = std::exp(w[i] + theta * v[i] - hi);
        m2 += e * (v[i] - mean) * (v[i] - mean);
    }
    return {hi + std::log(z), mean, m2 / z};
}

}  // namespace

double TailRate::cumulant(double theta) const {
    if (v_.empty()) return -kInf;
    return tilted(v_, w_, theta).log_z;
}
double TailRate::cumulant_d1(double theta) const { return tilted(v_, w_, theta).mean; }
double TailRate::cumulant_d2(double theta) const { return tilted(v_, w_, theta).var; }
double TailRate::finite_mean() const { return cumulant_d1(0.0); }
double TailRate::min_value() const { return v_.empty() ? kInf : *std::min_element(v_.begin(), v_.end()); }
double TailRate::max_value() const { return v_.empty() ? -kInf : *std::max_element(v_.begin(), v_.end()); }

// sign = +1: lower tail of X; sign = -1: lower tail of -X at -a (upper tail).
ExponentResult TailRate::lower_impl(double a, double sign) const {
    ExponentResult out;
    out.method = "legendre";
    // Points on the far side never enter the tail and simply drop out of the
    // finite sum; points on the near side always do.
    const double log_good = sign > 0 ? log_minf_ : log_pinf_;  // always in the tail
    std::vector<double> v(v_.size());
    for (size_t i = 0; i < v_.size(); ++i) v[i] = sign * v_[i];
    const double x = sign * a;
    double log_fin = v.empty() ? -kInf : tilted(v, w_, 0.0).log_z;
    if (std::abs(log_fin) <= 1e-14) log_fin = 0.0;  // normalized up to rounding
    if (log_good != -kInf) {
        // Some letter forces the mean into the tail: the event has
        // asymptotically full mass among sequences avoiding the other side.
        out.value = -log_add(log_fin, log_good);
        out.method = "infinite-point";
        return out;
    }
    if (v.empty()) {
        out.value = kInf;
        out.method = "empty";
        return out;
    }
    const Moments m0 = tilted(v, w_, 0.0);
    const double vmin = *std::min_element(v.begin(), v.end());
    const double tol = 1e-15 * std::max(1.0, std::abs(x));
    if (x >= m0.mean) {
        out.value = -log_fin + 0.0;  // no negative zero
        out.method = "mean";
        return out;
    }
    if (x < vmin - tol) {
        out.value = kInf;
        out.method = "below-support";
        out.optimizer = -kInf * sign;
        return out;
    }
    if (x <= vmin + tol) {
        double lw = -kInf;
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i] <= vmin + tol) lw = log_add(lw, w_[i]);
        out.value = -lw;
        out.method = "support-edge";
        out.optimizer = -kInf * sign;
        return out;
    }
    auto f = [&](double t) { return t * x - tilted(v, w_, t).log_z; };
    double lo = -1.0;
    while (tilted(v, w_, lo).mean > x && lo > -1e12) lo *= 2.0;
    Maximum best = golden_maximize(f, lo, 0.0);
    double t = best.x;
    // Newton polish on the stationarity condition Lambda'(t) = x.
    for (int it = 0; it < 3; ++it) {
        Moments mt = tilted(v, w_, t);
        if (!(mt.var > 0.0)) break;
        double tn = t - (mt.mean - x) / mt.var;
        if (!(tn >= lo && tn <= 0.0)) break;
        double fn = f(tn);
        if (fn < best.f) break;
        t = tn;
        best.f = fn;
    }
    out.value = std::max(best.f, -log_fin);
    out.optimizer = sign * t;
    return out;
}

ExponentResult TailRate::lower(double a) const { return lower_impl(a, 1.0); }
ExponentResult TailRate::upper(double a) const { return lower_impl(a, -1.0); }

Maximum golden_maximize(const std::function<double(double)>& f, double lo, double hi, double width) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    // width scales with |x| so far-out brackets terminate at double resolution
    const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
    for (int it = 0; it < 500 && hi - lo > width * scale; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    Maximum m{0.5 * (lo + hi), 0.0};
    m.f = f(m.x);
    // endpoints may beat the interior when the maximum sits on the boundary
    if (f1 > m.f) m = {x1, f1};
    if (f2 > m.f) m = {x2, f2};
    return m;
}

Maximum scan_then_golden(const std::function<double(double)>& f, double lo, double hi, int points, double width) {
    points = std::max(points, 3);
    std::vector<double> xs(static_cast<size_t>(points)), fs(static_cast<size_t>(points));
    size_t best = 0;
    for (int i = 0; i < points; ++i) {
        xs[i] = lo + (hi - lo) * i / (points - 1);
        fs[i] = f(xs[i]);
        if (fs[i] > fs[best] || std::isnan(fs[best])) best = static_cast<size_t>(i);
    }
    double a = xs[best == 0 ? 0 : best - 1];
    double b = xs[std::min(best + 1, xs.size() - 1)];
    Maximum m = golden_maximize(f, a, b, width);
    if (fs[best] > m.f) m = {xs[best], fs[best]};
    return m;
}

}  // namespace infospec
