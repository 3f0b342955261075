#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "amlab/harness.hpp"
#include "amlab/prelude.hpp"
#include "amlab/strategies.hpp"

using namespace amlab;
using namespace amlab::harness;
namespace strat = amlab::strategies;

TEST_CASE("generators are deterministic under a seed") {
  auto a = gen_additive(50, 8, 42);
  auto b = gen_additive(50, 8, 42);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(additive::expr_eq(a[i], b[i]));
  auto t1 = gen_closed_terms(50, 12, 42);
  auto t2 = gen_closed_terms(50, 12, 42);
  for (std::size_t i = 0; i < t1.size(); ++i)
    CHECK(term_eq(t1[i], t2[i]));
  for (const auto& t : t1) CHECK(is_closed(t));
  // Bound 1 yields only constants.
  for (const auto& e : gen_additive(20, 1, 7)) CHECK(e->is_const());
  for (const auto& e : gen_additive(50, 13, 7))
    CHECK(additive::depth(e) <= 12);
}

TEST_CASE("the corpus contains the expected landmarks") {
  auto corpus = sn_corpus();
  bool has_c2c2 = false;
  for (const auto& t : corpus)
    has_c2c2 |= term_eq(t, app(church(2), church(2)));
  CHECK(has_c2c2);
  // Everything in the corpus normalizes.
  CHECK(corpus.size() > 200);
}

TEST_CASE("size explosion family") {
  CHECK(term_eq(size_explosion(0),
                app(prelude_lookup("I"), var("y"))));
  auto nf0 = strat::normalize(strat::StrategyId::NormalOrder,
                              size_explosion(0), 100);
  CHECK(term_eq(nf0.term, var("y")));
  CHECK(nf0.steps == 1);
  auto nf1 = strat::normalize(strat::StrategyId::NormalOrder,
                              size_explosion(1), 100);
  CHECK(alpha_eq(nf1.term, parse("\\f. f y y")));
  CHECK(nf1.steps == 2);
  // One extra contraction per level; the normal form at least doubles.
  std::size_t prev_size = term_size(nf1.term);
  std::uint64_t prev_steps = nf1.steps;
  for (unsigned n = 2; n <= 8; ++n) {
    auto nf = strat::normalize(strat::StrategyId::NormalOrder,
                               size_explosion(n), 100000);
    REQUIRE(!nf.exhausted);
    CHECK(nf.steps == prev_steps + 1);
    CHECK(term_size(nf.term) >= 2 * prev_size);
    prev_size = term_size(nf.term);
    prev_steps = nf.steps;
  }
}

namespace {

std::string strip_focus_markers(std::string row) {
  for (const char* marker : {"⟨", "⟩∇", "⟩Δ"}) {
    for (std::size_t pos; (pos = row.find(marker)) != std::string::npos;)
      row.erase(pos, std::string(marker).size());
  }
  return row;
}

}  // namespace

TEST_CASE("refocus rendering matches the decoded expression") {
  auto e = additive::parse_additive("(1+2)+(4+8)");
  for (auto order : {additive::EvalOrder::Left, additive::EvalOrder::Right}) {
    auto run = additive::run_machine(order, e);
    auto rendered = render_refocus(order, run.trace);
    std::istringstream lines(rendered);
    std::string row;
    std::size_t index = 0;
    std::vector<additive::Config> configs{run.trace.initial};
    for (const auto& step : run.trace.steps) configs.push_back(step.config);
    while (std::getline(lines, row)) {
      REQUIRE(index < configs.size());
      // Drop the "i: " prefix and any trailing rule annotation.
      row = row.substr(row.find(": ") + 2);
      auto annotation = row.find("   (");
      if (annotation != std::string::npos) row = row.substr(0, annotation);
      auto decomposition = additive::decode(order, configs[index]);
      CHECK(strip_focus_markers(row) ==
            render_expr_refocus(additive::recompose(decomposition)));
      ++index;
    }
    CHECK(index == configs.size());
  }
  // The worked example's step 6 renders with the focus on the first sum.
  auto run = additive::run_machine(additive::EvalOrder::Left, e);
  auto rendered = render_refocus(additive::EvalOrder::Left, run.trace);
  CHECK(rendered.find("⟨⌈3⌉⟩Δ ⊕ "
                      "(⌈4⌉ ⊕ ⌈8⌉)") !=
        std::string::npos);
}

TEST_CASE("trace json follows the schema") {
  auto out = run_machine_on(MachineId::AddL, "1+2", 100);
  auto j = nlohmann::json::parse(trace_json(out));
  CHECK(j["machine"] == "add-l");
  CHECK(j["input"] == "1 + 2");
  CHECK(j["steps"].is_array());
  CHECK(j["steps"].size() == 5);
  CHECK(j["steps"][0].contains("index"));
  CHECK(j["steps"][0].contains("rule"));
  CHECK(j["steps"][0].contains("config"));
  CHECK(j["stats"]["total"] == 5);
  CHECK(j["stats"]["beta"] == 1);
  CHECK(j["stats"]["perRule"].is_object());
  CHECK(j["result"] == "3");
  CHECK(j["status"] == "halted");
  // A one-step run has exactly one steps element.
  auto one = run_machine_on(MachineId::AddL, "7", 100);
  auto j1 = nlohmann::json::parse(trace_json(one));
  CHECK(j1["steps"].size() == 1);
  // Fuel exhaustion reports a null result.
  auto spin = run_machine_on(MachineId::Cek, "Omega", 50);
  auto j2 = nlohmann::json::parse(trace_json(spin));
  CHECK(j2["status"] == "fuel-exhausted");
  CHECK(j2["result"].is_null());
}

TEST_CASE("refocus rendering is refused without a decoder") {
  auto out = run_machine_on(MachineId::Krivine, "K I I", 100);
  CHECK_THROWS_AS(render_trace(out, RenderStyle::Refocus), UnsupportedStyle);
}

TEST_CASE("compare agrees on the worked examples") {
  auto report = compare({MachineId::Krivine}, strat::StrategyId::Cbn,
                        {parse("K I Omega")}, 1000);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.mismatches == 0);
  CHECK(report.rows[0].machine_beta == 2);
  CHECK(report.rows[0].oracle_steps == 2);
  CHECK(report.rows[0].beta_checked);

  // Agreement on divergence.
  auto diverging = compare({MachineId::Cek}, strat::StrategyId::Lcbv,
                           {parse("Omega")}, 200);
  CHECK(diverging.mismatches == 0);
  CHECK(diverging.rows[0].machine_status == RunStatus::FuelExhausted);
  CHECK(diverging.rows[0].oracle_status == RunStatus::FuelExhausted);
}

TEST_CASE("bench rows grow and carry diagnostics") {
  auto report = bench_size_explosion({MachineId::Kn, MachineId::Mam}, 6,
                                     1000000);
  REQUIRE(report.rows.size() == 6);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    CHECK(report.rows[i].n == i + 1);
    CHECK(report.rows[i].beta_count == i + 2);
    for (const auto& [name, steps] : report.rows[i].machine_steps)
      CHECK(steps >= report.rows[i].beta_count);
    // The machine without sharing does strictly more work.
    CHECK(report.rows[i].machine_steps.at("kn") >
          report.rows[i].machine_steps.at("mam"));
  }
  CHECK(report.ratios.at("kn").size() == 5);
  auto csv = bench_csv(report);
  CHECK(csv.find("n,beta,nf_size,kn,mam") == 0);
  auto j = nlohmann::json::parse(bench_json(report));
  CHECK(j["rows"].size() == 6);
}

TEST_CASE("stats totals equal the per-rule sums") {
  for (auto machine : {MachineId::AddL, MachineId::AddR, MachineId::Krivine,
                       MachineId::Cek, MachineId::Secd, MachineId::Kn,
                       MachineId::GhostKn, MachineId::Mam, MachineId::Scam}) {
    auto input = is_additive_machine(machine) ? "(1+2)+(4+8)" : "c2 c2";
    auto out = run_machine_on(machine, input, 100000);
    CAPTURE(machine_name(machine));
    REQUIRE(out.status == RunStatus::Halted);
    std::uint64_t sum = 0;
    for (const auto& [rule, count] : out.stats.per_rule) sum += count;
    CHECK(sum == out.stats.total);
    CHECK(out.stats.total == out.steps.size());
  }
}
