// Acceptance suite: one pass/fail line per criterion, nonzero exit on
// any failure.

#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "amlab/additive.hpp"
#include "amlab/errors.hpp"
#include "amlab/harness.hpp"
#include "amlab/machines/ghost_kn.hpp"
#include "amlab/machines/kn.hpp"
#include "amlab/machines/mam.hpp"
#include "amlab/machines/scam.hpp"
#include "amlab/prelude.hpp"
#include "amlab/strategies.hpp"
#include "amlab/term.hpp"

using namespace amlab;
namespace add = amlab::additive;
namespace strat = amlab::strategies;
namespace mach = amlab::machines;
using harness::MachineId;

namespace {

struct Criterion {
  int number;
  std::string title;
  std::function<bool(std::string&)> run;
};

bool g_invariant_violated = false;

#define EXPECT(cond)                                               \
  do {                                                             \
    if (!(cond)) {                                                 \
      detail = std::string("failed: ") + #cond;                    \
      return false;                                                \
    }                                                              \
  } while (0)

add::ExprPtr fig_expr() {
  return add::plus(add::plus(add::cst(1), add::cst(2)),
                   add::plus(add::cst(4), add::cst(8)));
}

// 1. The left-to-right machine replays the worked 13-step run exactly.
bool criterion1(std::string& detail) {
  auto run = add::run_machine(add::EvalOrder::Left, fig_expr());
  EXPECT(run.result == 15);
  EXPECT(run.stats.total == 13);
  add::Config expect1{
      add::Mode::Down, add::plus(add::cst(1), add::cst(2)),
      List<add::Frame>{}.push(
          add::Frame{add::Frame::HolePlus{add::plus(add::cst(4),
                                                    add::cst(8))}})};
  EXPECT(run.trace.steps[0].config == expect1);
  add::Config expect6{
      add::Mode::Up, add::cst(3),
      List<add::Frame>{}.push(
          add::Frame{add::Frame::HolePlus{add::plus(add::cst(4),
                                                    add::cst(8))}})};
  EXPECT(run.trace.steps[5].config == expect6);
  add::Config expect13{add::Mode::Up, add::cst(15), {}};
  EXPECT(run.trace.steps[12].config == expect13);
  return true;
}

// 2. Machine steps equal the potential on 1000 seeded expressions.
bool criterion2(std::string& detail) {
  auto exprs = harness::gen_additive(1000, 13, 20240);
  for (const auto& e : exprs) {
    auto run = add::run_machine(add::EvalOrder::Left, e);
    if (run.stats.total != add::potential(e)) {
      detail = "steps != potential on " + add::print(e);
      return false;
    }
  }
  return true;
}

// 3. Overhead transitions preserve the decoded expression, contraction
// transitions perform legal left-to-right steps, and every transition
// drops the potential by exactly one.
bool criterion3(std::string& detail) {
  auto exprs = harness::gen_additive(1000, 13, 20240);
  for (const auto& e : exprs) {
    auto run = add::run_machine(add::EvalOrder::Left, e);
    add::Config prev = run.trace.initial;
    for (const auto& step : run.trace.steps) {
      auto before = add::recompose(add::decode(add::EvalOrder::Left, prev));
      auto after =
          add::recompose(add::decode(add::EvalOrder::Left, step.config));
      if (step.rule == "+") {
        auto legal = add::step_strategy(add::StepOrder::Left, before);
        EXPECT(legal.next.has_value());
        EXPECT(add::expr_eq(*legal.next, after));
      } else {
        EXPECT(add::expr_eq(before, after));
      }
      EXPECT(add::potential(add::EvalOrder::Left, prev) ==
             1 + add::potential(add::EvalOrder::Left, step.config));
      prev = step.config;
    }
  }
  return true;
}

// 4. The strategy table on K I Omega and the strong one-step example.
bool criterion4(std::string& detail) {
  auto t = parse("K I Omega");
  auto cbn = strat::normalize(strat::StrategyId::Cbn, t, 1000);
  EXPECT(!cbn.exhausted);
  EXPECT(cbn.steps == 2);
  EXPECT(alpha_eq(cbn.term, prelude_lookup("I")));
  for (std::uint64_t fuel : {3ull, 10ull, 200ull}) {
    EXPECT(strat::normalize(strat::StrategyId::Lcbv, t, fuel).exhausted);
    EXPECT(strat::normalize(strat::StrategyId::Rcbv, t, fuel).exhausted);
  }
  FreshSupply fresh = fresh_for({t});
  TermPtr cur = t;
  for (int i = 0; i < 5; ++i) {
    auto next = strat::step(strat::StrategyId::Rcbv, cur, fresh);
    EXPECT(std::holds_alternative<TermPtr>(next));
    cur = std::get<TermPtr>(next);
    EXPECT(alpha_eq(cur, t));
  }
  auto no = strat::normalize(strat::StrategyId::NormalOrder,
                             parse("\\x. (\\y. y) x"), 10);
  EXPECT(no.steps == 1);
  EXPECT(alpha_eq(no.term, parse("\\x. x")));
  return true;
}

// 5. De Bruijn translations: the two published values and the
// iff-property over seeded samples with alpha perturbations.
bool criterion5(std::string& detail) {
  auto t = lam("x", app(var("x"), lam("y", app(var("x"), var("y")))));
  EXPECT(nameless_eq(to_indices(t),
                     nl_lam(nl_app(nl_idx(0),
                                   nl_lam(nl_app(nl_idx(1), nl_idx(0)))))));
  EXPECT(nameless_eq(to_levels(t),
                     nl_lam(nl_app(nl_idx(0),
                                   nl_lam(nl_app(nl_idx(0), nl_idx(1)))))));
  auto samples = harness::gen_closed_terms(500, 24, 555);
  std::mt19937_64 rng(556);
  FreshSupply perturb_names("q");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const TermPtr& a = samples[i];
    // A consistent random renaming of binders.
    std::function<TermPtr(const TermPtr&,
                          std::map<std::string, std::string>&)>
        walk = [&](const TermPtr& u,
                   std::map<std::string, std::string>& renaming) -> TermPtr {
      if (u->is_var()) {
        auto it = renaming.find(u->var().name);
        return it == renaming.end() ? u : var(it->second);
      }
      if (u->is_app())
        return app(walk(u->app().fn, renaming),
                   walk(u->app().arg, renaming));
      auto saved = renaming;
      std::string name = u->lam().binder;
      if (rng() % 2 == 0) {
        name = perturb_names.draw();
        renaming[u->lam().binder] = name;
      } else {
        renaming.erase(u->lam().binder);
      }
      TermPtr body = walk(u->lam().body, renaming);
      renaming = saved;
      return lam(name, body);
    };
    std::map<std::string, std::string> renaming;
    TermPtr perturbed = walk(a, renaming);
    EXPECT(alpha_eq(a, perturbed));
    EXPECT(nameless_eq(to_indices(a), to_indices(perturbed)));
    EXPECT(nameless_eq(to_levels(a), to_levels(perturbed)));
    const TermPtr& b = samples[(i * 7 + 3) % samples.size()];
    bool ind_eq = nameless_eq(to_indices(a), to_indices(b));
    bool lev_eq = nameless_eq(to_levels(a), to_levels(b));
    bool alpha = alpha_eq(a, b);
    EXPECT(ind_eq == alpha);
    EXPECT(lev_eq == alpha);
  }
  return true;
}

// 6. Beta-count lockstep against the per-strategy oracles on the corpus.
bool criterion6(std::string& detail) {
  auto corpus = harness::sn_corpus();
  const std::uint64_t fuel = 500000;
  struct Pair {
    MachineId machine;
    strat::StrategyId oracle;
  };
  for (auto [machine, oracle] :
       {Pair{MachineId::Krivine, strat::StrategyId::Cbn},
        Pair{MachineId::Cek, strat::StrategyId::Lcbv},
        Pair{MachineId::Secd, strat::StrategyId::Rcbv},
        Pair{MachineId::Kn, strat::StrategyId::NormalOrder}}) {
    auto report = harness::compare({machine}, oracle, corpus, fuel);
    for (const auto& row : report.rows) {
      if (!row.beta_checked || !row.beta_ok || !row.result_ok) {
        detail = harness::machine_name(machine) + " disagrees on " +
                 row.input;
        return false;
      }
    }
  }
  return true;
}

// 7. Strong machines agree with the normal-order oracle end to end.
bool criterion7(std::string& detail) {
  auto corpus = harness::sn_corpus();
  auto report = harness::compare(
      {MachineId::Kn, MachineId::GhostKn, MachineId::Mam, MachineId::Scam},
      strat::StrategyId::NormalOrder, corpus, 500000);
  if (report.mismatches != 0) {
    for (const auto& row : report.rows)
      if (!row.agree) {
        detail = row.machine + " disagrees on " + row.input;
        return false;
      }
  }
  return true;
}

// 8. Ghost runs erase onto KN runs and respect the stack grammar.
bool criterion8(std::string& detail) {
  auto candidates = harness::gen_closed_terms(400, 14, 4242);
  std::vector<NamelessPtr> chosen;
  for (const auto& t : candidates) {
    if (chosen.size() == 100) break;
    if (!strat::normalize(strat::StrategyId::NormalOrder, t, 3000).exhausted)
      chosen.push_back(to_indices(t));
  }
  EXPECT(chosen.size() == 100);
  for (const auto& t : chosen) {
    auto kn = mach::run_kn(t, 100000, true, true);
    auto ghost = mach::run_ghost(t, 200000, true, true);
    EXPECT(kn.status == RunStatus::Halted);
    EXPECT(ghost.status == RunStatus::Halted);
    EXPECT(mach::erase(ghost.trace.initial) == kn.trace.initial);
    std::size_t kn_i = 0;
    for (const auto& step : ghost.trace.steps) {
      EXPECT(mach::ghost_stack_valid(step.config));
      if (step.rule == "8a") continue;
      EXPECT(kn_i < kn.trace.steps.size());
      EXPECT(step.rule == kn.trace.steps[kn_i].rule);
      EXPECT(mach::erase(step.config) == kn.trace.steps[kn_i].config);
      ++kn_i;
    }
    EXPECT(kn_i == kn.trace.steps.size());
  }
  return true;
}

// 9. Overhead classification on the size-explosion family.
bool criterion9(std::string& detail) {
  auto report = harness::bench_size_explosion(
      {MachineId::Kn, MachineId::Mam}, 10, 50000000);
  EXPECT(report.rows.size() == 10);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    EXPECT(row.beta_count == row.n + 1);
    if (i > 0 && report.rows[i].n >= 2)
      EXPECT(row.nf_size >= 2 * report.rows[i - 1].nf_size);
  }
  // Exponential signature for the machine without sharing.
  for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
    if (report.rows[i].n < 3) continue;
    double ratio =
        static_cast<double>(report.rows[i + 1].machine_steps.at("kn")) /
        static_cast<double>(report.rows[i].machine_steps.at("kn"));
    if (ratio < 1.8) {
      detail = "kn growth ratio " + std::to_string(ratio) + " at n=" +
               std::to_string(report.rows[i].n);
      return false;
    }
  }
  // Polynomial envelope for the machine with useful sharing. The
  // constant comes from the n=3 row, so the envelope bounds the rows
  // from the anchor upward.
  double c = 0;
  for (const auto& row : report.rows)
    if (row.n == 3)
      c = static_cast<double>(row.machine_steps.at("mam")) / 64.0;
  EXPECT(c > 0);
  for (const auto& row : report.rows) {
    if (row.n < 3) continue;
    double bound = c * static_cast<double>((row.n + 1)) *
                   static_cast<double>((row.n + 1)) *
                   static_cast<double>((row.n + 1));
    if (static_cast<double>(row.machine_steps.at("mam")) > bound) {
      detail = "mam exceeded the cubic envelope at n=" +
               std::to_string(row.n);
      return false;
    }
  }
  return true;
}

// 10. No machine ever met a configuration with zero or several
// applicable rules anywhere in this suite.
bool criterion10(std::string& detail) {
  // Re-run the strong machines over the corpus with invariant checking.
  auto corpus = harness::sn_corpus();
  try {
    for (const auto& t : corpus) {
      auto nameless = to_indices(t);
      (void)mach::run_kn(nameless, 500000, false, true);
      (void)mach::run_ghost(nameless, 500000, false, true);
      (void)mach::run_mam(t, 500000, false, true);
      (void)mach::run_scam(t, 500000, false);
    }
  } catch (const InvariantViolation& e) {
    detail = std::string("invariant violation: ") + e.what();
    return false;
  }
  EXPECT(!g_invariant_violated);
  return true;
}

// 11. The evaluation-based normalizer coincides with both machines.
bool criterion11(std::string& detail) {
  EXPECT(add::expr_eq(add::nbe_normalize(fig_expr()), add::cst(15)));
  auto exprs = harness::gen_additive(1000, 13, 31337);
  for (const auto& e : exprs) {
    auto direct = add::nbe_normalize(e);
    auto left = add::run_machine(add::EvalOrder::Left, e);
    auto right = add::run_machine(add::EvalOrder::Right, e);
    EXPECT(direct->cst().n == left.result);
    EXPECT(direct->cst().n == right.result);
  }
  return true;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "worked-example replay on the left-to-right additive machine",
       criterion1},
      {2, "machine steps equal the potential on 1000 seeded expressions",
       criterion2},
      {3, "overhead/contraction/potential lemmas hold on every transition",
       criterion3},
      {4, "strategy table on K I Omega and the under-binder step",
       criterion4},
      {5, "de Bruijn translations and the nameless-iff-alpha property",
       criterion5},
      {6, "beta-count lockstep with the strategy oracles on the corpus",
       criterion6},
      {7, "strong machines agree with the normal-order oracle", criterion7},
      {8, "ghost runs erase onto KN runs and respect the stack grammar",
       criterion8},
      {9, "size-explosion overhead: exponential KN, polynomial MAM",
       criterion9},
      {10, "every non-terminal configuration matched exactly one rule",
       criterion10},
      {11, "evaluation-based normalizer coincides with both machines",
       criterion11},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const InvariantViolation& e) {
      g_invariant_violated = true;
      detail = std::string("invariant violation: ") + e.what();
    } catch (const std::exception& e) {
      detail = e.what();
    }
    std::printf("criterion %2d: %s — %s\n", c.number,
                ok ? "PASS" : "FAIL", c.title.c_str());
    if (!ok) {
      ++failures;
      if (!detail.empty()) std::printf("              %s\n", detail.c_str());
    }
  }
  if (failures == 0)
    std::printf("all %zu criteria passed\n", criteria.size());
  else
    std::printf("%d criteria failed\n", failures);
  return failures;
}
