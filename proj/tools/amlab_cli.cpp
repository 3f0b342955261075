#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "amlab/additive.hpp"
#include "amlab/errors.hpp"
#include "amlab/harness.hpp"
#include "amlab/prelude.hpp"
#include "amlab/strategies.hpp"
#include "amlab/term.hpp"

namespace {

using namespace amlab;

constexpr int kExitOk = 0;
constexpr int kExitFuel = 1;
constexpr int kExitUsage = 2;
constexpr int kExitMismatch = 3;
constexpr int kExitInvariant = 4;

std::string read_input(const std::string& positional,
                       const std::string& file) {
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("cannot open file: " + file);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
  if (positional.empty())
    throw std::invalid_argument("no input expression given");
  return positional;
}

std::vector<std::string> read_lines(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("cannot open file: " + file);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

int cmd_parse(const std::string& input, const std::string& machine) {
  if (!machine.empty() &&
      harness::is_additive_machine(harness::machine_from_name(machine))) {
    auto e = additive::parse_additive(input);
    std::cout << additive::print(e) << "\n";
  } else {
    auto t = parse(input);
    std::cout << print(t) << "\n";
  }
  return kExitOk;
}

int cmd_reduce(const std::string& input, const std::string& strategy,
               std::uint64_t max_steps) {
  auto s = strategies::strategy_from_name(strategy);
  TermPtr t = parse(input);
  FreshSupply fresh = fresh_for({t});
  std::cout << "0: " << print(t) << "\n";
  std::uint64_t steps = 0;
  while (steps < max_steps) {
    auto next = strategies::step(s, t, fresh);
    if (std::holds_alternative<strategies::NormalFormClass>(next)) {
      std::cout << "normal form after " << steps << " step"
                << (steps == 1 ? "" : "s") << ": " << print(t) << "\n";
      return kExitOk;
    }
    t = std::get<TermPtr>(next);
    ++steps;
    std::cout << steps << ": " << print(t) << "\n";
  }
  auto probe = strategies::step(s, t, fresh);
  if (std::holds_alternative<strategies::NormalFormClass>(probe)) {
    std::cout << "normal form after " << steps << " steps: " << print(t)
              << "\n";
    return kExitOk;
  }
  std::cerr << "fuel exhausted after " << steps << " steps\n";
  return kExitFuel;
}

int cmd_run(const std::string& input, const std::string& machine,
            const std::string& style_name, std::uint64_t max_steps) {
  auto m = harness::machine_from_name(machine);
  auto style = harness::style_from_name(style_name);
  auto outcome = harness::run_machine_on(m, input, max_steps);
  std::cout << harness::render_trace(outcome, style);
  if (style != harness::RenderStyle::Json) {
    if (outcome.has_result) {
      std::cout << "result: " << outcome.result << "\n";
      if (outcome.readback)
        std::cout << "read-back: " << print(outcome.readback) << "\n";
    }
    std::cout << "steps: " << outcome.stats.total
              << "  contractions: " << outcome.stats.beta << "\n";
  }
  if (outcome.status == RunStatus::FuelExhausted) {
    std::cerr << "fuel exhausted after " << outcome.stats.total << " steps\n";
    return kExitFuel;
  }
  return kExitOk;
}

int cmd_bench(const std::string& family, unsigned n_max,
              const std::vector<std::string>& machine_names,
              const std::string& style_name, std::uint64_t max_steps) {
  if (family != "size-explosion")
    throw std::invalid_argument("unknown family: " + family);
  std::vector<harness::MachineId> machines;
  for (const auto& name : machine_names)
    machines.push_back(harness::machine_from_name(name));
  auto report = harness::bench_size_explosion(machines, n_max, max_steps);
  if (style_name == "json")
    std::cout << harness::bench_json(report);
  else
    std::cout << harness::bench_csv(report);
  return kExitOk;
}

int cmd_compare(const std::vector<std::string>& machine_names,
                const std::string& strategy,
                const std::string& positional, const std::string& file,
                std::uint64_t max_steps, std::uint64_t seed) {
  std::vector<harness::MachineId> machines;
  for (const auto& name : machine_names)
    machines.push_back(harness::machine_from_name(name));
  auto oracle = strategies::strategy_from_name(strategy);
  std::vector<TermPtr> inputs;
  if (!positional.empty()) {
    inputs.push_back(parse(positional));
  } else if (!file.empty()) {
    for (const auto& line : read_lines(file)) inputs.push_back(parse(line));
  } else {
    inputs = harness::sn_corpus();
    for (const auto& t : harness::gen_closed_terms(50, 12, seed))
      inputs.push_back(t);
  }
  auto report = harness::compare(machines, oracle, inputs, max_steps);
  std::cout << harness::compare_json(report) << "\n";
  if (report.mismatches > 0) {
    std::cerr << report.mismatches << " mismatching row"
              << (report.mismatches == 1 ? "" : "s") << "\n";
    return kExitMismatch;
  }
  std::cerr << "all " << report.rows.size() << " rows agree\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"reduction strategies and abstract machines workbench"};
  cli.require_subcommand(1);

  std::string input;
  std::string file;
  std::string machine;
  std::string strategy = "no";
  std::string style = "plain";
  std::string family = "size-explosion";
  std::uint64_t max_steps = 10000;
  std::uint64_t seed = 0;
  unsigned n_max = 10;
  std::vector<std::string> machines;

  auto* parse_cmd = cli.add_subcommand("parse", "parse and reprint a term");
  parse_cmd->add_option("expr", input, "expression");
  parse_cmd->add_option("--file", file, "read the expression from a file");
  parse_cmd->add_option("--machine", machine,
                        "machine whose syntax to use (add-* for additive)");

  auto* reduce_cmd =
      cli.add_subcommand("reduce", "small-step strategy reduction");
  reduce_cmd->add_option("expr", input, "lambda expression");
  reduce_cmd->add_option("--file", file, "read the expression from a file");
  reduce_cmd->add_option("--strategy", strategy,
                         "cbn | lcbv | rcbv | no | full");
  reduce_cmd->add_option("--max-steps", max_steps, "fuel");

  auto* run_cmd = cli.add_subcommand("run", "run an abstract machine");
  run_cmd->add_option("expr", input, "expression");
  run_cmd->add_option("--file", file, "read the expression from a file");
  run_cmd->add_option("--machine", machine, "machine id")->required();
  run_cmd->add_option("--trace", style, "plain | refocus | json");
  run_cmd->add_option("--max-steps", max_steps, "fuel");

  auto* bench_cmd = cli.add_subcommand("bench", "step-count benchmarks");
  bench_cmd->add_option("--family", family, "benchmark family");
  bench_cmd->add_option("--n-max", n_max, "largest family index");
  bench_cmd->add_option("--machine", machines, "machines to measure");
  bench_cmd->add_option("--trace", style, "plain (csv) | json");
  bench_cmd->add_option("--max-steps", max_steps, "fuel per run");

  auto* compare_cmd =
      cli.add_subcommand("compare", "check machines against an oracle");
  compare_cmd->add_option("expr", input, "single input expression");
  compare_cmd->add_option("--file", file, "inputs, one per line");
  compare_cmd->add_option("--machine", machines, "machines to check")
      ->required();
  compare_cmd->add_option("--strategy", strategy, "oracle strategy")
      ->required();
  compare_cmd->add_option("--max-steps", max_steps, "fuel");
  compare_cmd->add_option("--seed", seed,
                          "seed for the extra random inputs used when no "
                          "explicit input is given");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = cli.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (parse_cmd->parsed())
      return cmd_parse(read_input(input, file), machine);
    if (reduce_cmd->parsed())
      return cmd_reduce(read_input(input, file), strategy, max_steps);
    if (run_cmd->parsed())
      return cmd_run(read_input(input, file), machine, style, max_steps);
    if (bench_cmd->parsed()) {
      if (machines.empty()) machines = {"kn", "mam"};
      return cmd_bench(family, n_max, machines, style, max_steps);
    }
    if (compare_cmd->parsed())
      return cmd_compare(machines, strategy, input, file, max_steps, seed);
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n"
              << "configuration: " << e.config() << "\n";
    return kExitInvariant;
  } catch (const ParseError& e) {
    std::cerr << "parse error at byte " << e.offset() << ": " << e.what()
              << "\n";
    return kExitUsage;
  } catch (const OpenTermError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const UnboundVariableError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const harness::UnsupportedStyle& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
