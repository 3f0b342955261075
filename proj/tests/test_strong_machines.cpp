#include <doctest.h>

#include "amlab/errors.hpp"
#include "amlab/harness.hpp"
#include "amlab/machines/ghost_kn.hpp"
#include "amlab/machines/kn.hpp"
#include "amlab/machines/mam.hpp"
#include "amlab/machines/scam.hpp"
#include "amlab/prelude.hpp"
#include "amlab/strategies.hpp"

using namespace amlab;
using namespace amlab::machines;
namespace strat = amlab::strategies;

namespace {

strat::NormalizeResult no_oracle(const TermPtr& t) {
  return strat::normalize(strat::StrategyId::NormalOrder, t, 200000);
}

}  // namespace

TEST_CASE("kn normalizes under the binder") {
  // \ ((\0) 0): one contraction, normal form \0.
  auto t = nl_lam(nl_app(nl_lam(nl_idx(0)), nl_idx(0)));
  auto run = run_kn(t, 100, true, true);
  REQUIRE(run.status == RunStatus::Halted);
  CHECK(nameless_eq(run.final.term, nl_lam(nl_idx(0))));
  CHECK(run.stats.beta == 1);
  std::vector<std::string> rules;
  for (const auto& s : run.trace.steps) rules.push_back(s.rule);
  CHECK(rules == std::vector<std::string>{"3", "1", "2", "4", "4", "6", "9"});
  CHECK(run.stats.total == 7);
}

TEST_CASE("kn rule 6 computes the index from the depth") {
  KnConfig k{KnMode::Down, KnClosure{KnClosure::AbstractVar{1}}, nullptr,
             List<KnFrame>{}.push(KnFrame{KnFrame::LamMarker{}}), 1};
  auto next = kn_step(k);
  REQUIRE(next.has_value());
  CHECK(next->second == "6");
  CHECK(next->first.mode == KnMode::Up);
  CHECK(nameless_eq(next->first.term, nl_idx(0)));
}

TEST_CASE("kn reaches the church numeral") {
  auto t = to_indices(parse("c2 c2"));
  auto run = run_kn(t, 100000, false, true);
  REQUIRE(run.status == RunStatus::Halted);
  CHECK(nameless_eq(run.final.term, to_indices(church(4))));
  auto oracle = no_oracle(parse("c2 c2"));
  CHECK(run.stats.beta == oracle.steps);
}

TEST_CASE("kn beta count equals normal-order steps on samples") {
  for (const auto& src :
       {"(\\x. x x) (\\y. y)", "S K K", "\\x. (\\y. y) x", "c3 c2",
        "pair (I I) K"}) {
    auto t = parse(src);
    CAPTURE(src);
    auto run = run_kn(to_indices(t), 200000, false, true);
    REQUIRE(run.status == RunStatus::Halted);
    auto oracle = no_oracle(t);
    CHECK(run.stats.beta == oracle.steps);
    CHECK(nameless_eq(run.final.term, to_indices(oracle.term)));
  }
}

TEST_CASE("ghost load and coercion") {
  auto t = nl_lam(nl_app(nl_lam(nl_idx(0)), nl_idx(0)));
  auto k0 = ghost_load(t);
  CHECK(k0.stack.size() == 1);
  CHECK(std::holds_alternative<GhostFrame::CoeMarker>(k0.stack.head().v));
  CHECK(ghost_stack_valid(k0));
  // Rule 8a coerces a neutral at a marker.
  GhostConfig k{GhostMode::UpNeutral, {}, ghost_idx(0), nullptr,
                List<GhostFrame>{}.push(GhostFrame{GhostFrame::CoeMarker{}}),
                0};
  auto next = ghost_step(k);
  REQUIRE(next.has_value());
  CHECK(next->second == "8a");
  CHECK(next->first.mode == GhostMode::UpNormal);
}

TEST_CASE("ghost erasure reproduces the kn run") {
  for (const auto& src : {"\\x. (\\y. y) x", "c2 c2", "K I (\\x. x)",
                          "(\\x. x x) (\\y. y)"}) {
    CAPTURE(src);
    auto t = to_indices(parse(src));
    auto kn = run_kn(t, 100000, true, true);
    auto ghost = run_ghost(t, 200000, true, true);
    REQUIRE(kn.status == RunStatus::Halted);
    REQUIRE(ghost.status == RunStatus::Halted);
    CHECK(erase(ghost.trace.initial) == kn.trace.initial);
    std::size_t kn_i = 0;
    for (const auto& step : ghost.trace.steps) {
      if (step.rule == "8a") continue;  // erased together with its marker
      REQUIRE(kn_i < kn.trace.steps.size());
      CHECK(step.rule == kn.trace.steps[kn_i].rule);
      CHECK(erase(step.config) == kn.trace.steps[kn_i].config);
      ++kn_i;
    }
    CHECK(kn_i == kn.trace.steps.size());
    CHECK(nameless_eq(erase(ghost.final.normal), kn.final.term));
  }
}

TEST_CASE("mam labels") {
  CHECK(mam_label(parse("\\x. x"), {}) == MamLabel::Abs);
  CHECK(mam_label(app(var("y"), var("z")), {}) == MamLabel::Neu);
  CHECK(mam_label(app(lam("x", var("x")), var("y")), {}) == MamLabel::Red);
  // Stored labels feed the classifier.
  MamStore store =
      MamStore{}.push(MamStoreEntry{"a", parse("\\x. x"), MamLabel::Abs});
  CHECK(mam_label(app(var("a"), var("b")), store) == MamLabel::Red);
  CHECK(mam_label(lam("q", app(lam("r", var("r")), var("q"))), {}) ==
        MamLabel::Red);
  // The label is red iff the oracle finds a redex after unfolding.
  auto corpus = harness::enumerate_closed_terms(6);
  for (const auto& t : corpus) {
    bool has_redex = !strat::decompose_all(t).empty();
    CHECK((mam_label(t, {}) == MamLabel::Red) == has_redex);
  }
}

TEST_CASE("mam renames the argument eagerly") {
  // (\a. \b. a) y: the head reduces by m1 when the argument is a variable.
  auto t = app(lam("a", lam("b", var("a"))), var("y"));
  auto run = run_mam(t, 1000, true, true);
  REQUIRE(run.status == RunStatus::Halted);
  bool saw_m1 = false;
  for (const auto& s : run.trace.steps) saw_m1 |= s.rule == "m1";
  CHECK(saw_m1);
  auto unfolded = mam_unfold(run.final.focus, run.final.store);
  CHECK(alpha_eq(unfolded, lam("b", var("y"))));
}

TEST_CASE("mam handles the strong corpus with a shared store") {
  for (const auto& src :
       {"c2 c2", "\\x. (\\y. y) x", "K I (\\z. z)", "S K K"}) {
    CAPTURE(src);
    auto t = parse(src);
    auto run = run_mam(t, 100000, false, true);
    REQUIRE(run.status == RunStatus::Halted);
    auto unfolded = mam_unfold(run.final.focus, run.final.store);
    CHECK(alpha_eq(unfolded, no_oracle(t).term));
  }
}

TEST_CASE("mam works on open terms") {
  auto t = parse("(\\x. x x) y");
  auto run = run_mam(t, 1000, false, true);
  REQUIRE(run.status == RunStatus::Halted);
  CHECK(alpha_eq(mam_unfold(run.final.focus, run.final.store),
                 app(var("y"), var("y"))));
}

TEST_CASE("crumbling") {
  FreshSupply fresh = fresh_for_crumbling(app(var("x"), var("y")));
  auto c = crumble(app(var("x"), var("y")), fresh);
  // A single application becomes one application bite on the result
  // variable.
  REQUIRE(c.size() == 1);
  CHECK(c.head().name == kStar);
  REQUIRE(std::holds_alternative<Bite::AppB>(c.head().bite.v));
  CHECK(std::get<Bite::AppB>(c.head().bite.v).fn == "x");
  CHECK(std::get<Bite::AppB>(c.head().bite.v).arg == "y");
  CHECK(term_eq(readback(c), app(var("x"), var("y"))));

  // Bite-only terms read back exactly.
  for (const auto& src : {"\\x. x", "\\x. \\y. x", "x y", "z"}) {
    auto t = parse_raw(src);
    FreshSupply f = fresh_for_crumbling(t);
    CHECK(alpha_eq(readback(crumble(t, f)), t));
  }

  // Readback is beta-convertible to the input on all small closed terms.
  for (const auto& t : harness::enumerate_closed_terms(6)) {
    FreshSupply f = fresh_for_crumbling(t);
    auto conv = strat::convertible(readback(crumble(t, f)), t, 5000);
    CAPTURE(print(t));
    CHECK(conv.convertible);
  }
}

TEST_CASE("scam single transitions") {
  // Loading a crumble whose head binding is an abstraction pushes it.
  auto t = parse("(\\x. x) (\\y. y)");
  auto run = run_scam(t, 1000);
  REQUIRE(run.status == RunStatus::Halted);
  CHECK(run.trace.steps[0].rule == "sea1");
  CHECK(run.stats.beta >= 1);
  // The final crumble reads back to something convertible to the value.
  auto conv = strat::convertible(readback(run.final.focus),
                                 lam("y", var("y")), 1000);
  CHECK(conv.convertible);
}

TEST_CASE("scam garbage-collects unused abstractions") {
  // K applied: the discarded argument is an abstraction that gc drops.
  auto t = parse("K (\\a. a) (\\b. b)");
  auto run = run_scam(t, 10000);
  REQUIRE(run.status == RunStatus::Halted);
  bool saw_gc = false;
  for (const auto& s : run.trace.steps) saw_gc |= s.rule == "gc";
  CHECK(saw_gc);
  CHECK(strat::convertible(readback(run.final.focus), lam("a", var("a")),
                           1000)
            .convertible);
}

TEST_CASE("scam normalizes church arithmetic up to convertibility") {
  for (const auto& src : {"c2 c2", "c2 c3", "(\\x. x) (\\y. y)"}) {
    CAPTURE(src);
    auto t = parse(src);
    auto run = run_scam(t, 100000);
    REQUIRE(run.status == RunStatus::Halted);
    auto rb = readback(run.final.focus);
    auto conv = strat::convertible(rb, no_oracle(t).term, 100000);
    CHECK(conv.convertible);
  }
}

TEST_CASE("scam handles open terms") {
  auto t = parse("(\\x. x x) y");
  auto run = run_scam(t, 1000);
  REQUIRE(run.status == RunStatus::Halted);
  CHECK(strat::convertible(readback(run.final.focus),
                           app(var("y"), var("y")), 1000)
            .convertible);
}

TEST_CASE("strong machines accept free variables through the harness") {
  using harness::MachineId;
  for (auto m : {MachineId::Kn, MachineId::GhostKn, MachineId::Mam,
                 MachineId::Scam}) {
    auto out = harness::run_machine_on(m, "(\\x. x x) y", 10000);
    REQUIRE(out.status == RunStatus::Halted);
    CAPTURE(harness::machine_name(m));
    if (m == MachineId::Scam) {
      CHECK(strat::convertible(out.readback, app(var("y"), var("y")), 1000)
                .convertible);
    } else {
      CHECK(alpha_eq(out.readback, app(var("y"), var("y"))));
    }
  }
}
