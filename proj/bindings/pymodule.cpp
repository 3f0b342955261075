#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "amlab/additive.hpp"
#include "amlab/errors.hpp"
#include "amlab/harness.hpp"
#include "amlab/prelude.hpp"
#include "amlab/strategies.hpp"
#include "amlab/term.hpp"

namespace py = pybind11;
using namespace amlab;
namespace strat = amlab::strategies;

namespace {

py::dict outcome_to_dict(const harness::RunOutcome& out, bool with_trace) {
  py::dict d;
  d["machine"] = harness::machine_name(out.machine);
  d["input"] = out.input_text;
  d["status"] =
      out.status == RunStatus::Halted ? "halted" : "fuel-exhausted";
  d["result"] = out.has_result ? py::object(py::str(out.result)) : py::none();
  d["readback"] = out.readback ? py::object(py::str(print(out.readback)))
                               : py::none();
  py::dict stats;
  stats["total"] = out.stats.total;
  stats["beta"] = out.stats.beta;
  py::dict per_rule;
  for (const auto& [rule, count] : out.stats.per_rule)
    per_rule[py::str(rule)] = count;
  stats["perRule"] = per_rule;
  d["stats"] = stats;
  if (with_trace) {
    py::list steps;
    for (std::size_t i = 0; i < out.steps.size(); ++i) {
      py::dict s;
      s["index"] = i + 1;
      s["rule"] = out.steps[i].first;
      s["config"] = out.steps[i].second;
      steps.append(s);
    }
    d["steps"] = steps;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(amlab, m) {
  m.doc() =
      "Reduction strategies and abstract machines for additive expressions "
      "and the lambda calculus";

  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<OpenTermError>(m, "OpenTermError");

  m.def(
      "parse",
      [](const std::string& src) { return print(parse(src)); },
      py::arg("src"),
      "Parse a lambda term (prelude names expand) and reprint it");

  m.def(
      "parse_additive",
      [](const std::string& src) {
        return additive::print(additive::parse_additive(src));
      },
      py::arg("src"), "Parse an additive expression and reprint it");

  m.def(
      "free_vars",
      [](const std::string& src) {
        auto fv = free_vars(parse(src));
        return std::vector<std::string>(fv.begin(), fv.end());
      },
      py::arg("src"));

  m.def(
      "alpha_eq",
      [](const std::string& a, const std::string& b) {
        return alpha_eq(parse(a), parse(b));
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "to_indices",
      [](const std::string& src) { return print(to_indices(parse(src))); },
      py::arg("src"), "De Bruijn index rendering of a closed term");

  m.def(
      "to_levels",
      [](const std::string& src) { return print(to_levels(parse(src))); },
      py::arg("src"), "De Bruijn level rendering of a closed term");

  m.def(
      "normalize",
      [](const std::string& src, const std::string& strategy,
         std::uint64_t max_steps) {
        auto r = strat::normalize(strat::strategy_from_name(strategy),
                                  parse(src), max_steps);
        py::dict d;
        d["term"] = print(r.term);
        d["steps"] = r.steps;
        d["exhausted"] = r.exhausted;
        return d;
      },
      py::arg("src"), py::arg("strategy") = "no",
      py::arg("max_steps") = 10000);

  m.def(
      "run",
      [](const std::string& machine, const std::string& src,
         std::uint64_t max_steps, bool trace) {
        auto out = harness::run_machine_on(
            harness::machine_from_name(machine), src, max_steps, trace);
        return outcome_to_dict(out, trace);
      },
      py::arg("machine"), py::arg("src"), py::arg("max_steps") = 10000,
      py::arg("trace") = false);

  m.def(
      "trace_json",
      [](const std::string& machine, const std::string& src,
         std::uint64_t max_steps) {
        auto out = harness::run_machine_on(
            harness::machine_from_name(machine), src, max_steps, true);
        return harness::trace_json(out);
      },
      py::arg("machine"), py::arg("src"), py::arg("max_steps") = 10000);

  m.def(
      "nbe",
      [](const std::string& src) {
        return additive::print(
            additive::nbe_normalize(additive::parse_additive(src)));
      },
      py::arg("src"), "Evaluation-based normalizer for additive expressions");

  m.def(
      "potential",
      [](const std::string& src) {
        return additive::potential(additive::parse_additive(src));
      },
      py::arg("src"));

  m.def(
      "depth",
      [](const std::string& src) {
        return additive::depth(additive::parse_additive(src));
      },
      py::arg("src"));

  m.def(
      "size_explosion",
      [](unsigned n) { return print(harness::size_explosion(n)); },
      py::arg("n"));

  m.def(
      "compare",
      [](const std::vector<std::string>& machines, const std::string& oracle,
         const std::vector<std::string>& inputs, std::uint64_t max_steps) {
        std::vector<harness::MachineId> ids;
        for (const auto& name : machines)
          ids.push_back(harness::machine_from_name(name));
        std::vector<TermPtr> terms;
        for (const auto& src : inputs) terms.push_back(parse(src));
        auto report = harness::compare(
            ids, strat::strategy_from_name(oracle), terms, max_steps);
        py::list rows;
        for (const auto& r : report.rows) {
          py::dict row;
          row["input"] = r.input;
          row["machine"] = r.machine;
          row["agree"] = r.agree;
          row["machineBeta"] = r.machine_beta;
          row["oracleSteps"] = r.oracle_steps;
          rows.append(row);
        }
        py::dict d;
        d["rows"] = rows;
        d["mismatches"] = report.mismatches;
        return d;
      },
      py::arg("machines"), py::arg("oracle"), py::arg("inputs"),
      py::arg("max_steps") = 10000);

  m.def(
      "bench",
      [](unsigned n_max, const std::vector<std::string>& machines,
         std::uint64_t max_steps) {
        std::vector<harness::MachineId> ids;
        for (const auto& name : machines)
          ids.push_back(harness::machine_from_name(name));
        auto report = harness::bench_size_explosion(ids, n_max, max_steps);
        py::list rows;
        for (const auto& r : report.rows) {
          py::dict row;
          row["n"] = r.n;
          row["beta"] = r.beta_count;
          row["nfSize"] = r.nf_size;
          py::dict steps;
          for (const auto& [name, count] : r.machine_steps)
            steps[py::str(name)] = count;
          row["machineSteps"] = steps;
          rows.append(row);
        }
        py::dict d;
        d["family"] = report.family;
        d["rows"] = rows;
        return d;
      },
      py::arg("n_max") = 8,
      py::arg("machines") = std::vector<std::string>{"kn", "mam"},
      py::arg("max_steps") = 10000000);

  m.def("prelude", [] {
    py::dict d;
    for (const auto& [name, body] : prelude()) d[py::str(name)] = print(body);
    return d;
  });
}
