// Thin layer over the command functions. Results cross as JSON text; the
// Python side decodes them and turns relation entries into ints.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pslqe/report.hpp"

namespace py = pybind11;
using namespace pslqe;

namespace {

GlobalOptions globals(int digits, std::optional<std::string> gamma, double omega, std::uint64_t seed) {
  GlobalOptions g;
  g.digits = digits;
  g.gamma = std::move(gamma);
  g.omega = omega;
  g.seed = seed;
  return g;
}

std::vector<BigInt> to_big(const std::vector<std::string>& m) {
  std::vector<BigInt> out;
  for (const std::string& s : m) out.emplace_back(s);
  return out;
}

}  // namespace

PYBIND11_MODULE(_pslqe, mod) {
  mod.attr("__version__") = std::string(kToolkitVersion);

  py::register_exception<InfeasiblePlan>(mod, "InfeasiblePlan", PyExc_ValueError);
  py::register_exception<InputError>(mod, "InputError", PyExc_ValueError);

  mod.def(
      "plan",
      [](const std::string& input, const std::string& eps, const std::string& G, int digits, double omega) {
        const ErrorPlan p = cmd_plan(eps, G, parse_vector_spec(input), globals(digits, std::nullopt, omega, 1));
        return to_json(p).dump();
      },
      py::arg("input"), py::arg("eps"), py::arg("G"), py::arg("digits") = 50, py::arg("omega") = 0.5);

  mod.def(
      "find",
      [](const std::string& input, std::optional<std::string> eps, std::optional<std::string> G,
         std::optional<std::string> eps2, const std::string& data, std::optional<std::uint64_t> max_iterations,
         bool exact, int digits, std::optional<std::string> gamma, double omega, std::uint64_t seed) {
        FindRequest r;
        r.input = parse_vector_spec(input);
        r.eps = std::move(eps);
        r.G = std::move(G);
        r.eps2 = std::move(eps2);
        r.data = parse_data_model(data);
        r.max_iterations = max_iterations;
        r.exact = exact;
        py::gil_scoped_release unlocked;
        const RunReport rep = cmd_find(r, globals(digits, std::move(gamma), omega, seed));
        return to_json(rep).dump();
      },
      py::arg("input"), py::arg("eps") = py::none(), py::arg("G") = py::none(), py::arg("eps2") = py::none(),
      py::arg("data") = "exact", py::arg("max_iterations") = py::none(), py::arg("exact") = false,
      py::arg("digits") = 50, py::arg("gamma") = py::none(), py::arg("omega") = 0.5, py::arg("seed") = 1);

  mod.def(
      "minpoly",
      [](const std::string& constant, int degree, const std::string& eps, const std::string& G, const std::string& data,
         int digits) {
        MinpolyRequest r;
        r.constant = constant;
        r.degree = degree;
        r.eps = eps;
        r.G = G;
        r.data = parse_data_model(data);
        py::gil_scoped_release unlocked;
        const RunReport rep = cmd_minpoly(r, globals(digits, std::nullopt, 0.5, 1));
        return to_json(rep).dump();
      },
      py::arg("constant"), py::arg("degree"), py::arg("eps"), py::arg("G"), py::arg("data") = "exact",
      py::arg("digits") = 50);

  mod.def(
      "sweep",
      [](const std::string& input, int first, int last, const std::string& G,
         std::optional<std::vector<std::string>> reference, const std::string& data, int digits, unsigned jobs) {
        SweepRequest r;
        r.input = parse_vector_spec(input);
        r.first = first;
        r.last = last;
        r.G = G;
        if (reference) r.reference = to_big(*reference);
        r.data = parse_data_model(data);
        r.jobs = jobs;
        py::gil_scoped_release unlocked;
        return sweep_csv(cmd_sweep(r, globals(digits, std::nullopt, 0.5, 1)).points);
      },
      py::arg("input"), py::arg("first"), py::arg("last"), py::arg("G"), py::arg("reference") = py::none(),
      py::arg("data") = "exact", py::arg("digits") = 50, py::arg("jobs") = 0);

  mod.def(
      "verify",
      [](const std::string& input, const std::vector<std::string>& m, std::optional<std::string> eps,
         std::optional<std::string> G, int digits) {
        return to_json(cmd_verify(parse_vector_spec(input), to_big(m), eps, G, globals(digits, std::nullopt, 0.5, 1)))
            .dump();
      },
      py::arg("input"), py::arg("m"), py::arg("eps") = py::none(), py::arg("G") = py::none(), py::arg("digits") = 50);

  mod.def(
      "selftest",
      [](int digits, std::uint64_t seed) {
        SelftestOptions o;
        o.digits = digits;
        o.seed = seed;
        py::gil_scoped_release unlocked;
        return to_json(cmd_selftest(o)).dump();
      },
      py::arg("digits") = 40, py::arg("seed") = 1);
}
