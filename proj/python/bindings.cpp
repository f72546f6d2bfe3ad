#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <tuple>

#include "superint/analysis.hpp"
#include "superint/cli.hpp"
#include "superint/errors.hpp"
#include "superint/niven.hpp"
#include "superint/qes.hpp"
#include "superint/recurrence.hpp"

namespace py = pybind11;
using namespace superint;

namespace {

Sign parse_sign(const std::string& s) {
    if (s == "+") return Sign::Plus;
    if (s == "-") return Sign::Minus;
    throw DomainError("sign must be '+' or '-'");
}

ModelV1 v1(double omega, double k1, double k2, const std::string& sign2) {
    ModelV1 m{omega, k1, k2, parse_sign(sign2)};
    m.validate();
    return m;
}

ModelV2 v2(double omega, double k1, double k2, const std::string& sign1, const std::string& sign2) {
    ModelV2 m{omega, k1, k2, parse_sign(sign1), parse_sign(sign2)};
    m.validate();
    return m;
}

py::dict solution_dict(const QesSolution& s) {
    py::dict d;
    d["q"] = s.q;
    d["lambda"] = s.lambda;
    d["q1"] = s.q1;
    d["q2"] = s.q2;
    d["coefficients"] = s.coeffs;
    d["zeros"] = s.zeros;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spectra, bases and checks for two singular-oscillator superintegrable systems";

    // Translators run newest first, so the base class goes in before the subclasses.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<BranchError>(m, "BranchError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<LabelingError>(m, "LabelingError", PyExc_ValueError);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            return std::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run one command-line invocation; returns (exit_code, stdout, stderr).");

    m.def(
        "energy_v1", [](double omega, double k1, double k2, const std::string& sign2, int n) {
            return energy_level(v1(omega, k1, k2, sign2), n);
        },
        py::arg("omega"), py::arg("k1"), py::arg("k2"), py::arg("sign2") = "+", py::arg("n") = 0);
    m.def(
        "energy_v2",
        [](double omega, double k1, double k2, const std::string& sign1, const std::string& sign2, int n) {
            return energy_level(v2(omega, k1, k2, sign1, sign2), n);
        },
        py::arg("omega"), py::arg("k1"), py::arg("k2"), py::arg("sign1") = "+", py::arg("sign2") = "+",
        py::arg("n") = 0);

    m.def(
        "parabolic_separation_constants",
        [](double omega, double k1, double k2, const std::string& sign2, int n) {
            return separation_eigenvalues(build_parabolic_recurrence(v1(omega, k1, k2, sign2), n)).lambdas;
        },
        py::arg("omega"), py::arg("k1"), py::arg("k2"), py::arg("sign2") = "+", py::arg("n"));
    m.def(
        "elliptic_separation_constants",
        [](double omega, double k1, double k2, const std::string& sign1, const std::string& sign2, int n, double d2) {
            return separation_eigenvalues(build_elliptic_recurrence(v2(omega, k1, k2, sign1, sign2), n, d2)).lambdas;
        },
        py::arg("omega"), py::arg("k1"), py::arg("k2"), py::arg("sign1") = "+", py::arg("sign2") = "+",
        py::arg("n"), py::arg("d2"));

    m.def(
        "solve_parabolic",
        [](double omega, double k1, double k2, const std::string& sign2, int n) {
            py::list out;
            for (const auto& s : solve_parabolic(v1(omega, k1, k2, sign2), n)) out.append(solution_dict(s));
            return out;
        },
        py::arg("omega"), py::arg("k1"), py::arg("k2"), py::arg("sign2") = "+", py::arg("n"));

    m.def(
        "niven_lambdas",
        [](double omega, double k1, double k2, const std::string& sign2, int n) {
            const auto model = v1(omega, k1, k2, sign2);
            std::vector<double> out;
            for (const auto& c : solve_zero_system(model, n)) out.push_back(lambda_from_zeros(model, c));
            return out;
        },
        py::arg("omega"), py::arg("k1"), py::arg("k2"), py::arg("sign2") = "+", py::arg("n"),
        "Separation constants from converged Niven zero configurations, ascending.");

    m.def(
        "interbasis_matrix",
        [](double omega, double k2, const std::string& sign2, int n, const std::string& method) {
            InterbasisMethod im;
            if (method == "projection") im = InterbasisMethod::Projection;
            else if (method == "closed") im = InterbasisMethod::ClosedSum;
            else throw DomainError("method must be 'projection' or 'closed'");
            return interbasis_matrix(v1(omega, 0.0, k2, sign2), n, im).W;
        },
        py::arg("omega"), py::arg("k2"), py::arg("sign2") = "+", py::arg("n"), py::arg("method") = "projection");
}
