#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>
#include <sstream>

#include "eslab/circle_method.hpp"
#include "eslab/cli.hpp"
#include "eslab/diophantine.hpp"
#include "eslab/expsums.hpp"
#include "eslab/phase.hpp"
#include "eslab/vinogradov.hpp"
#include "eslab/window_sieve.hpp"

namespace py = pybind11;
using namespace eslab;

namespace {

// Python ints are unbounded, so big counts cross as decimal strings.
py::object to_pyint(const BigInt& v) { return py::int_(py::str(v.str())); }

PolynomialPhase monomial(const std::string& alpha, int k, std::uint64_t N) {
  return monomial_to_shifted(Angle::parse(alpha), k, static_cast<std::int64_t>(N));
}

Summation mode(bool compensated) { return compensated ? Summation::kCompensated : Summation::kPlain; }

py::dict expsum_dict(const ExpSumResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["terms"] = r.terms;
  d["normalized"] = r.normalized;
  d["warnings"] = r.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exponential sums over short intervals and small circle-method checks.";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<BudgetError>(m, "BudgetError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<ArithmeticTable>(m, "ArithmeticTable")
      .def_property_readonly("start", [](const ArithmeticTable& t) { return t.window().start(); })
      .def_property_readonly("length", [](const ArithmeticTable& t) { return t.window().length(); })
      .def("__len__", &ArithmeticTable::size)
      .def("lambda_values",
           [](const ArithmeticTable& t) { return std::vector<double>(t.lambda_values().begin(), t.lambda_values().end()); })
      .def("mu_values",
           [](const ArithmeticTable& t) { return std::vector<int>(t.mu_values().begin(), t.mu_values().end()); })
      .def("primes", &ArithmeticTable::primes)
      .def("psi", &chebyshev_psi_delta);

  m.def("sieve_window", [](std::uint64_t N, std::uint64_t H, unsigned threads) { return sieve_window(Window(N, H), threads); },
        py::arg("N"), py::arg("H"), py::arg("threads") = 0,
        "Lambda, mu and factorizations on (N, N + H].");

  m.def(
      "phase_values",
      [](const std::string& alpha, int k, std::uint64_t N, std::uint64_t H) {
        std::vector<std::string> out;
        for (const Angle& a : phase_stream(monomial(alpha, k, N), Window(N, H))) out.push_back(a.to_hex());
        return out;
      },
      py::arg("alpha"), py::arg("k"), py::arg("N"), py::arg("H"),
      "alpha n^k mod 1 (up to a constant) on (N, N + H] as 32-digit hex fixed point.");

  m.def(
      "lambda_exp_sum",
      [](const ArithmeticTable& t, const std::string& alpha, int k, bool compensated) {
        return expsum_dict(lambda_exp_sum(t, monomial(alpha, k, t.window().start()), mode(compensated)));
      },
      py::arg("table"), py::arg("alpha"), py::arg("k") = 1, py::arg("compensated") = true);
  m.def(
      "mobius_exp_sum",
      [](const ArithmeticTable& t, const std::string& alpha, int k, bool compensated) {
        return expsum_dict(mobius_exp_sum(t, monomial(alpha, k, t.window().start()), mode(compensated)));
      },
      py::arg("table"), py::arg("alpha"), py::arg("k") = 1, py::arg("compensated") = true);

  m.def(
      "best_rational",
      [](const std::string& alpha, std::uint64_t q_max) {
        const auto r = best_rational(Angle::parse(alpha), q_max);
        return py::make_tuple(r.a, r.q, r.err);
      },
      py::arg("alpha"), py::arg("q_max"), "(a, q, ||q alpha||) for the best q <= q_max.");

  m.def(
      "classify_arc",
      [](const std::string& alpha, int k, std::uint64_t X, std::uint64_t H, double Q) {
        const Arc a = classify_arc(Angle::parse(alpha), k, X, H, Q);
        py::dict d;
        d["kind"] = to_string(a.kind);
        d["a"] = a.a;
        d["q"] = a.q;
        d["width"] = a.width;
        return d;
      },
      py::arg("alpha"), py::arg("k"), py::arg("X"), py::arg("H"), py::arg("Q"));

  m.def("count_J", [](int t, int k, std::uint64_t H) { return to_pyint(count_J(t, k, H).count); }, py::arg("t"),
        py::arg("k"), py::arg("H"), "Solutions of the Vinogradov system with 1 <= x_i, y_i <= H.");
  m.def("mean_value_F",
        [](int t, std::uint64_t X, std::uint64_t H, int k) { return to_pyint(mean_value_F(t, X, H, k)); },
        py::arg("t"), py::arg("X"), py::arg("H"), py::arg("k"));

  m.def(
      "singular_series",
      [](int k, int s, std::uint64_t N, double theta, std::uint64_t q_max) {
        return singular_series(WaringInstance::from_theta(k, s, N, theta), q_max).value;
      },
      py::arg("k"), py::arg("s"), py::arg("N"), py::arg("theta"), py::arg("q_max") = 10'000);
  m.def(
      "rho_exact",
      [](int k, int s, std::uint64_t N, std::uint64_t X, std::uint64_t H) {
        return rho_exact(WaringInstance::explicit_range(k, s, N, X, H)).rho;
      },
      py::arg("k"), py::arg("s"), py::arg("N"), py::arg("X"), py::arg("H"));
  m.def(
      "find_representations",
      [](int k, int s, std::uint64_t N, double theta, std::size_t limit) {
        return find_representations(WaringInstance::from_theta(k, s, N, theta), limit).reps;
      },
      py::arg("k"), py::arg("s"), py::arg("N"), py::arg("theta"), py::arg("limit") = 10);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        py::gil_scoped_release release;
        return run_cli(args, std::cerr);
      },
      py::arg("args"), "Runs the command-line tool in process and returns its exit code.");
}
