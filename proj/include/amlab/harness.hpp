#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "amlab/additive.hpp"
#include "amlab/strategies.hpp"
#include "amlab/term.hpp"
#include "amlab/trace.hpp"

namespace amlab::harness {

enum class RenderStyle { Plain, Refocus, Json };

RenderStyle style_from_name(const std::string& name);

class UnsupportedStyle : public std::runtime_error {
 public:
  explicit UnsupportedStyle(const std::string& what)
      : std::runtime_error(what) {}
};

enum class MachineId { AddL, AddR, Krivine, Cek, Secd, Kn, GhostKn, Mam, Scam };

MachineId machine_from_name(const std::string& name);
std::string machine_name(MachineId m);
bool is_additive_machine(MachineId m);

// Type-erased run result shared by the CLI, the comparison driver and
// the python surface.
struct RunOutcome {
  MachineId machine;
  std::string input_text;
  RunStatus status = RunStatus::Halted;
  std::string result;       // machine-native rendering; empty when exhausted
  bool has_result = false;
  TermPtr readback;         // named read-back where defined
  RunStats stats;
  std::string initial_config;
  std::vector<std::pair<std::string, std::string>> steps;  // rule, config
  // Typed additive trace, kept for the refocus renderer.
  std::optional<additive::MachineRun> additive_run;
};

RunOutcome run_machine_on(MachineId m, const std::string& input,
                          std::uint64_t fuel, bool record_trace = true);

std::string render_refocus(additive::EvalOrder order,
                           const Trace<additive::Config>& trace);
std::string render_expr_refocus(const additive::ExprPtr& e);

// Text of the whole trace in the requested style.
std::string render_trace(const RunOutcome& outcome, RenderStyle style);
std::string trace_json(const RunOutcome& outcome);

// Deterministic generators. The additive bound is the maximum tree
// height; bound 1 yields only constants.
std::vector<additive::ExprPtr> gen_additive(std::size_t count, unsigned bound,
                                            std::uint64_t seed);
std::vector<TermPtr> gen_closed_terms(std::size_t count, std::size_t max_size,
                                      std::uint64_t seed);

// All closed terms up to the given node count, as named terms.
std::vector<TermPtr> enumerate_closed_terms(std::size_t max_size);

// The strongly normalizing corpus: combinators, Church arithmetic, and
// every closed term up to 7 nodes.
std::vector<TermPtr> sn_corpus();

// The duplicator family: chain(0) applied to a free variable reduces in
// one step; each further level adds one beta step while doubling the
// size of the normal form.
TermPtr size_explosion(unsigned n);

struct CompareRow {
  std::string input;
  std::string machine;
  RunStatus machine_status;
  RunStatus oracle_status;
  std::uint64_t machine_beta = 0;
  std::uint64_t oracle_steps = 0;
  bool beta_checked = false;
  bool beta_ok = true;
  bool result_ok = true;
  bool agree = true;
};

struct CompareReport {
  std::vector<CompareRow> rows;
  std::size_t mismatches = 0;
};

CompareReport compare(const std::vector<MachineId>& machines,
                      strategies::StrategyId oracle,
                      const std::vector<TermPtr>& inputs, std::uint64_t fuel);

std::string compare_json(const CompareReport& report);

struct BenchRow {
  unsigned n = 0;
  std::uint64_t beta_count = 0;   // normal-order oracle steps
  std::size_t nf_size = 0;        // oracle normal-form size
  std::map<std::string, std::uint64_t> machine_steps;
};

struct BenchReport {
  std::string family;
  std::vector<BenchRow> rows;
  // Successive step ratios and differences per machine.
  std::map<std::string, std::vector<double>> ratios;
  std::map<std::string, std::vector<std::int64_t>> diffs;
};

BenchReport bench_size_explosion(const std::vector<MachineId>& machines,
                                 unsigned n_max, std::uint64_t fuel);

std::string bench_csv(const BenchReport& report);
std::string bench_json(const BenchReport& report);

}  // namespace amlab::harness
