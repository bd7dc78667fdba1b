#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dlambda/conics.hpp"
#include "dlambda/errors.hpp"
#include "dlambda/report.hpp"
#include "dlambda/text.hpp"

namespace py = pybind11;
using namespace dlambda;

namespace {

ChartPtr chart_named(const std::string& name) {
  const auto& m = pgl3::Model::get();
  const auto& c = conics::ConicModel::get();
  if (name == "matrix") return m.matrix();
  if (name == "cell") return m.cell();
  if (name == "cone") return m.cone();
  if (name == "opposite") return m.opposite();
  if (name == "conic") return c.conic();
  if (name == "conic-entries") return c.entries();
  if (name == "conic-cone") return c.cone();
  throw PreconditionError("unknown chart: " + name);
}

cert::ParamMode mode_named(const std::string& s) {
  if (s == "symbolic") return cert::ParamMode::Symbolic;
  if (s == "sampled") return cert::ParamMode::Sampled;
  throw PreconditionError("unknown param mode: " + s);
}

}  // namespace

PYBIND11_MODULE(_dlambda, m) {
  m.doc() = "Exact differential operators on the wonderful compactification of PGL3";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);

  m.def("suite_names", &checks::suite_names);
  m.def("check_ids", [](const std::string& suite) { return checks::check_ids(suite); });

  // Reports are returned as JSON text; the Python side decodes them.
  m.def(
      "verify_json",
      [](const std::string& suite, const std::string& mode, long grid, std::uint64_t seed, unsigned jobs) {
        checks::Options o;
        o.mode = mode_named(mode);
        o.grid = grid;
        o.seed = seed;
        o.workers = jobs;
        std::vector<checks::CheckResult> results;
        {
          py::gil_scoped_release release;
          results = checks::run_suite(suite, o);
        }
        return report::verify_report(suite, o, results, {}).dump();
      },
      py::arg("suite") = "all", py::arg("mode") = "symbolic", py::arg("grid") = 4, py::arg("seed") = 1,
      py::arg("jobs") = 0);
  m.def(
      "certify_json",
      [](long l1, long l2, const std::string& mode) {
        auto c = cert::certify(l1, l2, mode_named(mode));
        auto k = cert::check_certificate(c);
        auto j = report::to_json(c);
        j["checker_ok"] = k.ok;
        j["checker_problems"] = k.problems;
        return j.dump();
      },
      py::arg("l1"), py::arg("l2"), py::arg("mode") = "symbolic");
  m.def("concordance_json", [](std::uint64_t seed) { return report::concordance_report(checks::concordance(seed)).dump(); },
        py::arg("seed") = 1);

  m.def(
      "normalize",
      [](const std::string& op, const std::string& chart) { return format_diffop(parse_diffop(op, chart_named(chart))); },
      py::arg("op"), py::arg("chart") = "cell");
  m.def(
      "apply",
      [](const std::string& op, const std::string& f, const std::string& chart) {
        DiffOp a = parse_diffop(op, chart_named(chart));
        return format_ratfunc(op_apply(a, parse_ratfunc(f, a.vars())));
      },
      py::arg("op"), py::arg("f"), py::arg("chart") = "cell");
  m.def(
      "compose",
      [](const std::string& a, const std::string& b, const std::string& chart) {
        auto c = chart_named(chart);
        return format_diffop(op_compose(parse_diffop(a, c), parse_diffop(b, c)));
      },
      py::arg("a"), py::arg("b"), py::arg("chart") = "cell");
}
