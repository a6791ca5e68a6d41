#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "infospec/exponents.hpp"
#include "infospec/quantum.hpp"
#include "infospec/schur.hpp"
#include "infospec/selftest.hpp"
#include "infospec/source_coding.hpp"

namespace py = pybind11;
using namespace infospec;

namespace {

// numpy arrays arrive as complex matrices; real input is promoted by pybind11.
HermitianOperator herm(const Matrix& m) { return HermitianOperator::symmetrized(m, kIngestTol); }

FiniteMeasure prob(const std::vector<double>& w) { return FiniteMeasure::probability(w); }

Mode mode_of(const std::string& s) { return parse_mode(s); }

py::dict exponent_dict(const ExponentResult& e) {
    py::dict d;
    d["value"] = e.value;
    d["optimizer"] = e.optimizer;
    d["method"] = e.method;
    d["flags"] = e.flags;
    return d;
}

}  // namespace

PYBIND11_MODULE(_infospec, m) {
    m.doc() = "Hypothesis-testing and source-coding exponents (C++ core)";
    m.attr("__version__") = kVersion;

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<SizeError>(m, "SizeError", PyExc_MemoryError);
    py::register_exception<PropertyFailure>(m, "PropertyFailure", PyExc_AssertionError);

    m.def(
        "quantum_relative_entropy",
        [](const Matrix& rho, const Matrix& sigma) { return quantum_relative_entropy(herm(rho), herm(sigma)); },
        py::arg("rho"), py::arg("sigma"));
    m.def(
        "quantum_psi", [](const Matrix& rho, const Matrix& sigma, double theta) {
            return quantum_psi(herm(rho), herm(sigma), theta);
        },
        py::arg("rho"), py::arg("sigma"), py::arg("theta"));

    // rows of (n, a, g, alpha, beta)
    m.def(
        "g_curve",
        [](const Matrix& rho, const Matrix& sigma, const std::vector<int>& n_list, const std::vector<double>& a_grid,
           const std::string& mode) {
            std::vector<std::tuple<int, double, double, double, double>> out;
            for (const GCurveRow& r : g_curve(herm(rho), herm(sigma), n_list, a_grid, mode_of(mode)))
                out.emplace_back(r.n, r.a, r.g, r.alpha, r.beta);
            return out;
        },
        py::arg("rho"), py::arg("sigma"), py::arg("n_list"), py::arg("a_grid"), py::arg("mode") = "strict");
    m.def(
        "brute_force_g",
        [](const Matrix& rho, const Matrix& sigma, int n, double a, const std::string& mode, long long cap) {
            return brute_force_iid_g(herm(rho), herm(sigma), n, a, mode_of(mode), cap);
        },
        py::arg("rho"), py::arg("sigma"), py::arg("n"), py::arg("a"), py::arg("mode") = "strict",
        py::arg("cap") = kDefaultBruteCap);
    m.def(
        "pure_state_g", [](double delta, int n, double a) { return pure_state_g({delta, n}, a); },
        py::arg("delta"), py::arg("n"), py::arg("a"));

    m.def(
        "kl_divergence", [](const std::vector<double>& p, const std::vector<double>& q) {
            return kl_divergence(prob(p), prob(q));
        },
        py::arg("p"), py::arg("q"));
    m.def(
        "hoeffding_exponent",
        [](const std::vector<double>& p, const std::vector<double>& q, double r) {
            return exponent_dict(hoeffding_exponent(prob(p), prob(q), r));
        },
        py::arg("rho"), py::arg("sigma"), py::arg("r"));
    m.def(
        "han_kobayashi_exponent",
        [](const std::vector<double>& p, const std::vector<double>& q, double r) {
            return exponent_dict(han_kobayashi_exponent(prob(p), prob(q), r));
        },
        py::arg("rho"), py::arg("sigma"), py::arg("r"));

    m.def(
        "finite_n_rate", [](const std::vector<double>& p, double eps, int n) {
            return finite_n_rate(prob(p), eps, n).rate;
        },
        py::arg("p"), py::arg("epsilon"), py::arg("n"));
    m.def(
        "R_e", [](const std::vector<double>& p, double r, int points) { return exponent_dict(R_e(prob(p), r, points)); },
        py::arg("p"), py::arg("r"), py::arg("points") = 2001);
    m.def(
        "R_e_star",
        [](const std::vector<double>& p, double r, int points) { return exponent_dict(R_e_star(prob(p), r, points)); },
        py::arg("p"), py::arg("r"), py::arg("points") = 2001);

    // JSON report as a string; json.loads it on the Python side
    m.def(
        "selftest",
        [](std::uint64_t seed, int trials, bool corrupt) {
            SelftestConfig c;
            c.seed = seed;
            c.trials = trials;
            c.corrupt = corrupt;
            return run_selftest(c).to_json().dump();
        },
        py::arg("seed"), py::arg("trials") = 50, py::arg("corrupt") = false);
}
