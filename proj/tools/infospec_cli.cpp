// infospec: batch front end. Reads operators or measures from JSON files,
// writes CSV or JSON to --out (stdout by default).
//
// Exit codes: 0 ok, 2 input error, 3 property failure, 4 resource cap.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <variant>

#include "infospec/exponents.hpp"
#include "infospec/io.hpp"
#include "infospec/quantum.hpp"
#include "infospec/schur.hpp"
#include "infospec/selftest.hpp"
#include "infospec/source_coding.hpp"

using namespace infospec;
using nlohmann::json;

namespace {

struct RunConfig {
    std::string command;
    std::string input_rho, input_sigma;
    std::vector<int> n_list{1};
    double a_min = 0.0, a_max = 0.8;
    int a_points = 161;
    std::vector<double> epsilon{0.5};
    std::vector<double> r{0.1};
    std::string mode = "strict";
    std::optional<std::uint64_t> seed;
    std::string out = "-";
    bool oracle = false;
    int threads = 1;
    long long cap = kDefaultBruteCap;
    long long type_cap = kDefaultTypeCap;
    double theta_min = -1.0, theta_max = 1.0;
    int theta_points = 21;
    std::string kind = "hoeffding";
    std::string table = "exponents";
    int grid_points = 2001;
    int trials = 200;
    bool corrupt = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Inputs are identified by content, not only by path.
std::string file_digest(const std::string& path) {
    if (path.empty()) return "";
    return config_hash(json(read_file(path)));
}

json config_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["version"] = kVersion;
    j["input_rho"] = c.input_rho;
    j["input_sigma"] = c.input_sigma;
    j["rho_digest"] = file_digest(c.input_rho);
    j["sigma_digest"] = file_digest(c.input_sigma);
    j["n"] = c.n_list;
    j["a_min"] = c.a_min;
    j["a_max"] = c.a_max;
    j["a_points"] = c.a_points;
    j["epsilon"] = c.epsilon;
    j["r"] = c.r;
    j["mode"] = c.mode;
    j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
    j["oracle"] = c.oracle;
    j["cap"] = c.cap;
    j["type_cap"] = c.type_cap;
    j["theta"] = {c.theta_min, c.theta_max, c.theta_points};
    j["kind"] = c.kind;
    j["table"] = c.table;
    j["grid_points"] = c.grid_points;
    j["trials"] = c.trials;
    j["corrupt"] = c.corrupt;
    return j;
}

using Input = std::variant<FiniteMeasure, HermitianOperator>;

Input load_input(const std::string& path, const char* which) {
    if (path.empty()) throw InputError(std::string("missing --input-") + which);
    const std::string text = read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    if (j.contains("weights")) return measure_from_json_text(text);
    return operator_from_json_text(text);
}

HermitianOperator as_operator(const Input& in) {
    if (const auto* m = std::get_if<FiniteMeasure>(&in)) return HermitianOperator::diagonal(m->weights());
    return std::get<HermitianOperator>(in);
}

IidPair load_pair(const RunConfig& c) {
    Input a = load_input(c.input_rho, "rho"), b = load_input(c.input_sigma, "sigma");
    if (std::holds_alternative<FiniteMeasure>(a) && std::holds_alternative<FiniteMeasure>(b))
        return ClassicalPair{std::get<FiniteMeasure>(a), std::get<FiniteMeasure>(b)};
    HermitianOperator ra = as_operator(a), rb = as_operator(b);
    DensityOperator da(ra), db(rb);  // validates
    return QuantumPair{ra, rb};
}

std::vector<double> linspace(double lo, double hi, int points) {
    if (points < 1) throw InputError("grids need at least one point");
    if (points == 1) return {lo};
    if (!(hi > lo)) throw InputError("grid maximum must exceed its minimum");
    std::vector<double> g(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
    g.back() = hi;
    return g;
}

std::vector<double> a_grid(const RunConfig& c) { return linspace(c.a_min, c.a_max, c.a_points); }

std::string join_flags(const std::vector<std::string>& f) {
    std::string s;
    for (size_t i = 0; i < f.size(); ++i) s += (i ? ";" : "") + f[i];
    return s;
}

json report_header(const RunConfig& c) {
    json cfg = config_json(c);
    return {{"version", kVersion}, {"config", cfg}, {"config_hash", config_hash(cfg)}};
}

bool brute_fits(int dim, int n, long long cap) {
    return std::pow(static_cast<long double>(dim), n) <= static_cast<long double>(cap);
}

void cmd_gcurve(const RunConfig& c, std::ostream& os) {
    const IidPair pair = load_pair(c);
    HermitianOperator rho, sigma;
    if (const auto* q = std::get_if<QuantumPair>(&pair)) {
        rho = q->rho;
        sigma = q->sigma;
    } else {
        const auto& p = std::get<ClassicalPair>(pair);
        rho = HermitianOperator::diagonal(p.rho.weights());
        sigma = HermitianOperator::diagonal(p.sigma.weights());
    }
    const Mode mode = parse_mode(c.mode);
    const std::vector<double> grid = a_grid(c);
    std::vector<std::string> cols{"n", "a", "g", "alpha", "beta", "log10_beta"};
    if (c.oracle) cols.push_back("g_oracle");
    CsvWriter w(os, config_json(c), cols);
    const double ln10 = std::log(10.0);
    for (int n : c.n_list) {
        if (n < 1) throw InputError("n must be >= 1");
        const bool fast = rho.dim() == 2;
        if (!fast && !brute_fits(rho.dim(), n, c.cap))
            throw SizeError("fast path requires dim 2; dim " + std::to_string(rho.dim()) + " at n = " +
                            std::to_string(n) + " exceeds the brute-force cap");
        std::optional<SchurBlockDecomposition> dec;
        if (fast) dec = build_decomposition(rho, sigma, n);
        std::optional<HermitianOperator> rn, sn;
        if (c.oracle && brute_fits(rho.dim(), n, c.cap)) {
            rn = tensor_power(rho, n, c.cap);
            sn = tensor_power(sigma, n, c.cap);
        }
        for (double a : grid) {
            double g;
            TestEvaluation ev;
            if (fast) {
                IidEvaluation e = fast_iid_evaluation(*dec, a, mode);
                g = e.g;
                ev = e.eval;
            } else {
                NPEvaluation e = brute_force_iid_evaluation(rho, sigma, n, a, mode, c.cap);
                g = e.g;
                ev = e.eval;
            }
            w << n << a << g << ev.alpha << ev.beta << (ev.zeta == kInf ? -kInf : -n * ev.zeta / ln10);
            if (c.oracle) w << (rn ? quantum_np_evaluation(*rn, *sn, a, n, mode).g : std::nan(""));
            w.end_row();
        }
    }
}

void cmd_divergence(const RunConfig& c, std::ostream& os) {
    const IidPair pair = load_pair(c);
    json j = report_header(c);
    double d_rs, d_sr;
    if (const auto* p = std::get_if<ClassicalPair>(&pair)) {
        d_rs = kl_divergence(p->rho, p->sigma);
        d_sr = kl_divergence(p->sigma, p->rho);
    } else {
        const auto& q = std::get<QuantumPair>(pair);
        d_rs = quantum_relative_entropy(q.rho, q.sigma);
        d_sr = quantum_relative_entropy(q.sigma, q.rho);
    }
    j["D_rho_sigma"] = json_number(d_rs);
    j["D_sigma_rho"] = json_number(d_sr);
    os << j.dump(2) << "\n";
}

void cmd_psi(const RunConfig& c, std::ostream& os) {
    const IidPair pair = load_pair(c);
    CsvWriter w(os, config_json(c), {"theta", "psi"});
    for (double t : linspace(c.theta_min, c.theta_max, c.theta_points)) {
        double v;
        if (const auto* p = std::get_if<ClassicalPair>(&pair))
            v = classical_psi(p->rho, p->sigma, t);
        else
            v = quantum_psi(std::get<QuantumPair>(pair).rho, std::get<QuantumPair>(pair).sigma, t);
        w << t << v;
        w.end_row();
    }
}

void cmd_stein(const RunConfig& c, std::ostream& os) {
    if (c.epsilon.size() != 1) throw InputError("stein takes a single --epsilon");
    const IidPair pair = load_pair(c);
    SampleCaps caps{c.type_cap, c.cap};
    SteinReport rep = stein_report(pair, c.epsilon[0], c.n_list, a_grid(c), caps);
    json j = report_header(c);
    j["D_lower_estimate"] = json_number(rep.D_lower_estimate);
    j["D_upper_estimate"] = json_number(rep.D_upper_estimate);
    j["strong_converse_gap"] = json_number(rep.strong_converse_gap);
    j["analytic_target"] = json_number(rep.analytic_target);
    j["degenerate"] = rep.degenerate;
    j["flags"] = rep.flags;
    json rows = json::array();
    for (const auto& r : rep.per_n_thresholds)
        rows.push_back({{"n", r.n}, {"threshold", json_number(r.threshold)}, {"error", json_number(r.error)}});
    j["per_n_thresholds"] = rows;
    os << j.dump(2) << "\n";
}

void cmd_exponent(const RunConfig& c, std::ostream& os) {
    const IidPair pair = load_pair(c);
    CsvWriter w(os, config_json(c), {"r", "value", "optimizer", "method", "flags"});
    for (double r : c.r) {
        ExponentResult e;
        if (const auto* p = std::get_if<ClassicalPair>(&pair)) {
            if (c.kind == "hoeffding")
                e = hoeffding_exponent(p->rho, p->sigma, r);
            else if (c.kind == "han-kobayashi")
                e = han_kobayashi_exponent(p->rho, p->sigma, r);
            else
                throw InputError("unknown exponent kind '" + c.kind + "' for classical inputs");
        } else {
            const auto& q = std::get<QuantumPair>(pair);
            if (c.kind == "hoeffding" || c.kind == "quantum-hoeffding")
                e = quantum_hoeffding_lower_bound(q.rho, q.sigma, r);
            else
                throw InputError("quantum inputs support only the hoeffding lower bound");
        }
        w << r << e.value << e.optimizer << e.method << join_flags(e.flags);
        w.end_row();
    }
}

void cmd_source(const RunConfig& c, std::ostream& os) {
    Input in = load_input(c.input_rho, "rho");
    const auto* p = std::get_if<FiniteMeasure>(&in);
    if (!p) throw InputError("source coding takes a measure ({\"weights\": ...})");
    if (c.table == "rates") {
        CsvWriter w(os, config_json(c), {"epsilon", "n", "rate"});
        for (int n : c.n_list)
            for (double e : c.epsilon) {
                w << e << n << finite_n_rate(*p, e, n, c.type_cap, 0).rate;
                w.end_row();
            }
    } else if (c.table == "exponents") {
        const std::vector<double> grid = self_information_grid(*p, c.grid_points);
        const RateFunction lo = sigma_rate_table(*p, grid, RateKind::SigmaLower);
        const RateFunction up = sigma_rate_table(*p, grid, RateKind::SigmaStarUpper);
        CsvWriter w(os, config_json(c), {"r", "R_e", "R_e_star"});
        for (double r : c.r) {
            w << r << (r > 0.0 ? R_e(lo, r).value : std::nan("")) << R_e_star(up, r).value;
            w.end_row();
        }
    } else {
        throw InputError("--table must be 'rates' or 'exponents'");
    }
}

int cmd_selftest(const RunConfig& c, std::ostream& os) {
    if (!c.seed) throw InputError("selftest is randomized and requires --seed");
    SelftestConfig cfg;
    cfg.seed = *c.seed;
    cfg.corrupt = c.corrupt;
    cfg.brute_cap = c.cap;
    cfg.type_cap = c.type_cap;
    cfg.trials = c.trials;
    SelftestReport rep = run_selftest(cfg);
    json j = rep.to_json();
    j["run_config"] = config_json(c);
    os << j.dump(2) << "\n";
    return rep.passed() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig c;
    CLI::App app{"infospec: hypothesis-testing and source-coding exponents"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* s) {
        s->add_option("--input-rho", c.input_rho, "JSON operator or measure");
        s->add_option("--input-sigma", c.input_sigma, "JSON operator or measure");
        s->add_option("--n", c.n_list, "block lengths, comma separated")->delimiter(',');
        s->add_option("--a-min", c.a_min);
        s->add_option("--a-max", c.a_max);
        s->add_option("--a-points", c.a_points);
        s->add_option("--epsilon", c.epsilon)->delimiter(',');
        s->add_option("--r", c.r)->delimiter(',');
        s->add_option("--mode", c.mode)->check(CLI::IsMember({"strict", "nonstrict"}));
        s->add_option("--seed", c.seed);
        s->add_option("--out", c.out, "output path, - for stdout");
        s->add_flag("--oracle", c.oracle, "add a brute-force column where it fits the cap");
        s->add_option("--threads", c.threads, "accepted for compatibility; runs single-threaded")
            ->check(CLI::PositiveNumber);
        s->add_option("--cap", c.cap, "brute-force dimension cap");
        s->add_option("--type-cap", c.type_cap, "type-class count cap");
    };
    struct Sub {
        const char* name;
        const char* help;
    };
    const Sub subs[] = {{"gcurve", "g_n(a) curves (CSV)"},
                        {"divergence", "relative entropies (JSON)"},
                        {"psi", "cumulant function psi(theta) (CSV)"},
                        {"stein", "finite-n Stein thresholds (JSON)"},
                        {"exponent", "error exponents over r (CSV)"},
                        {"source", "fixed-length source coding (CSV)"},
                        {"selftest", "property suite (JSON)"}};
    for (const Sub& s : subs) {
        CLI::App* sc = app.add_subcommand(s.name, s.help);
        add_common(sc);
        sc->callback([&c, name = std::string(s.name)] { c.command = name; });
        const std::string nm = s.name;
        if (nm == "psi") {
            sc->add_option("--theta-min", c.theta_min);
            sc->add_option("--theta-max", c.theta_max);
            sc->add_option("--theta-points", c.theta_points);
        } else if (nm == "exponent") {
            sc->add_option("--kind", c.kind)->check(CLI::IsMember({"hoeffding", "han-kobayashi", "quantum-hoeffding"}));
        } else if (nm == "source") {
            sc->add_option("--table", c.table)->check(CLI::IsMember({"rates", "exponents"}));
            sc->add_option("--grid-points", c.grid_points);
        } else if (nm == "selftest") {
            sc->add_option("--trials", c.trials);
            sc->add_flag("--corrupt", c.corrupt, "flip a sign in the Schur block formula");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        std::ostringstream buf;
        int rc = 0;
        if (c.command == "gcurve")
            cmd_gcurve(c, buf);
        else if (c.command == "divergence")
            cmd_divergence(c, buf);
        else if (c.command == "psi")
            cmd_psi(c, buf);
        else if (c.command == "stein")
            cmd_stein(c, buf);
        else if (c.command == "exponent")
            cmd_exponent(c, buf);
        else if (c.command == "source")
            cmd_source(c, buf);
        else
            rc = cmd_selftest(c, buf);
        if (c.out == "-") {
            std::cout << buf.str();
        } else {
            std::ofstream f(c.out, std::ios::binary);
            if (!f) throw InputError("cannot write " + c.out);
            f << buf.str();
        }
        return rc;
    } catch (const SizeError& e) {
        std::cerr << "infospec: resource cap: " << e.what() << "\n";
        return 4;
    } catch (const InputError& e) {
        std::cerr << "infospec: input error: " << e.what() << "\n";
        return 2;
    } catch (const PropertyFailure& e) {
        std::cerr << "infospec: property failure: " << e.what() << "\n";
        return 3;
    } catch (const EigenError& e) {
        std::cerr << "infospec: property failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "infospec: " << e.what() << "\n";
        return 1;
    }
}
