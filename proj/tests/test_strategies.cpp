#include <doctest.h>

#include <set>

#include "amlab/harness.hpp"
#include "amlab/prelude.hpp"
#include "amlab/strategies.hpp"

using namespace amlab;
using namespace amlab::strategies;

namespace {

TermPtr ki_omega() { return parse("K I Omega"); }

// Exhaustive full-beta search for the set of normal forms reachable from
// t. Independent of the deterministic strategy code paths: it uses only
// decompose_all plus plug, and explores every redex at every step.
std::set<std::string> nf_search(const TermPtr& t, int depth_limit,
                                std::size_t node_limit) {
  std::set<std::string> nfs;
  std::set<std::string> seen;
  // Keys are alpha-canonical so renamed duplicates collapse.
  auto canon = [](const TermPtr& u) {
    auto fv = free_vars(u);
    std::vector<std::string> order(fv.begin(), fv.end());
    return print(to_indices_open(u, order));
  };
  std::function<void(const TermPtr&, int)> go = [&](const TermPtr& u,
                                                    int depth) {
    if (seen.size() > node_limit) return;
    std::string key = canon(u);
    if (!seen.insert(key).second) return;
    auto redexes = decompose_all(u);
    if (redexes.empty()) {
      nfs.insert(key);
      return;
    }
    if (depth == 0) return;
    for (const auto& r : redexes) {
      FreshSupply fresh = fresh_for({u});
      auto contracted = contract_beta(r.redex, fresh);
      REQUIRE(contracted.has_value());
      go(plug(r.ctx, *contracted), depth - 1);
    }
  };
  go(t, depth_limit);
  return nfs;
}

}  // namespace

TEST_CASE("beta contraction") {
  FreshSupply fresh("x");
  auto ik = app(prelude_lookup("I"), prelude_lookup("K"));
  auto r = contract_beta(ik, fresh);
  REQUIRE(r.has_value());
  CHECK(term_eq(*r, prelude_lookup("K")));
  CHECK(!contract_beta(var("x"), fresh).has_value());
  // K y S reduces to y in two steps.
  auto t = parse("K y S");
  auto n1 = normalize(StrategyId::NormalOrder, t, 10);
  CHECK(term_eq(n1.term, var("y")));
  CHECK(n1.steps == 2);
}

TEST_CASE("beta_lambda fires only on abstraction arguments") {
  FreshSupply fresh("x");
  auto ik = app(prelude_lookup("I"), prelude_lookup("K"));
  auto r = contract_beta_lambda(ik, fresh);
  REQUIRE(r.has_value());
  CHECK(term_eq(*r, prelude_lookup("K")));
  auto guard = app(prelude_lookup("K"),
                   app(prelude_lookup("I"), prelude_lookup("I")));
  CHECK(!contract_beta_lambda(guard, fresh).has_value());
  // Omega reproduces itself.
  auto omega = parse("Omega");
  auto again = contract_beta_lambda(omega, fresh);
  REQUIRE(again.has_value());
  CHECK(alpha_eq(*again, omega));
}

TEST_CASE("decompositions per strategy") {
  auto t = parse("\\x. (\\y. y) x");
  auto d_no = decompose(StrategyId::NormalOrder, t);
  REQUIRE(std::holds_alternative<Decomposition>(d_no));
  const auto& dec = std::get<Decomposition>(d_no);
  REQUIRE(dec.ctx.size() == 1);
  CHECK(dec.ctx[0].kind == Frame::Kind::Under);
  CHECK(term_eq(dec.redex, app(lam("y", var("y")), var("x"))));

  auto d_cbn = decompose(StrategyId::Cbn, t);
  REQUIRE(std::holds_alternative<NormalFormClass>(d_cbn));
  CHECK(std::get<NormalFormClass>(d_cbn).kind ==
        NormalFormClass::Kind::WeakHeadNF);
  auto d_lcbv = decompose(StrategyId::Lcbv, var("x"));
  REQUIRE(std::holds_alternative<NormalFormClass>(d_lcbv));
  CHECK(std::get<NormalFormClass>(d_lcbv).kind ==
        NormalFormClass::Kind::CbvValue);
}

TEST_CASE("decompose_all finds every redex position") {
  CHECK(decompose_all(parse("Omega")).size() == 1);
  auto ii = app(prelude_lookup("I"), prelude_lookup("I"));
  CHECK(decompose_all(app(ii, ii)).size() == 2);
  CHECK(decompose_all(parse("\\x. x")).empty());
  for (const auto& d : decompose_all(app(ii, ii)))
    CHECK(term_eq(plug(d.ctx, d.redex), app(ii, ii)));
}

TEST_CASE("the three weak strategies on K I Omega") {
  auto t = ki_omega();
  FreshSupply fresh = fresh_for({t});

  auto cbn = normalize(StrategyId::Cbn, t, 100);
  CHECK(!cbn.exhausted);
  CHECK(cbn.steps == 2);
  CHECK(alpha_eq(cbn.term, prelude_lookup("I")));

  auto lcbv = normalize(StrategyId::Lcbv, t, 100);
  CHECK(lcbv.exhausted);
  auto rcbv = normalize(StrategyId::Rcbv, t, 100);
  CHECK(rcbv.exhausted);

  // The rcbv chain cycles on the input itself.
  TermPtr cur = t;
  for (int i = 0; i < 8; ++i) {
    auto next = step(StrategyId::Rcbv, cur, fresh);
    REQUIRE(std::holds_alternative<TermPtr>(next));
    cur = std::get<TermPtr>(next);
    CHECK(alpha_eq(cur, t));
  }
  // The lcbv chain parks on (\z. I) Omega.
  auto one = step(StrategyId::Lcbv, t, fresh);
  REQUIRE(std::holds_alternative<TermPtr>(one));
  auto two = step(StrategyId::Lcbv, std::get<TermPtr>(one), fresh);
  REQUIRE(std::holds_alternative<TermPtr>(two));
  CHECK(alpha_eq(std::get<TermPtr>(two), std::get<TermPtr>(one)));
}

TEST_CASE("normal order goes under binders") {
  FreshSupply fresh("x");
  auto t = parse("\\x. (\\y. y) x");
  auto next = step(StrategyId::NormalOrder, t, fresh);
  REQUIRE(std::holds_alternative<TermPtr>(next));
  CHECK(alpha_eq(std::get<TermPtr>(next), parse("\\x. x")));
  auto n = normalize(StrategyId::NormalOrder, t, 10);
  CHECK(n.steps == 1);
}

TEST_CASE("church arithmetic normalizes to numerals") {
  // The brute-force search certifies a unique normal form for c2 c2.
  auto t = app(church(2), church(2));
  auto nfs = nf_search(t, 20, 4000);
  REQUIRE(nfs.size() == 1);
  CHECK(*nfs.begin() ==
        print(to_indices(normalize(StrategyId::NormalOrder, t, 100).term)));
  CHECK(alpha_eq(normalize(StrategyId::NormalOrder, t, 1000).term, church(4)));
  CHECK(normalize(StrategyId::Lcbv, parse("Omega"), 100).exhausted);
}

TEST_CASE("classification of normal forms") {
  auto nf1 = parse("\\x y. x (\\z. z)");
  auto c1 = classify_nf(StrategyId::NormalOrder, nf1);
  REQUIRE(std::holds_alternative<NormalFormClass>(c1));
  CHECK(std::get<NormalFormClass>(c1).kind == NormalFormClass::Kind::BetaNF);
  CHECK(std::get<NormalFormClass>(c1).shape == NormalShape::Abs);

  auto red = classify_nf(StrategyId::NormalOrder,
                         app(prelude_lookup("I"), prelude_lookup("I")));
  CHECK(std::holds_alternative<std::monostate>(red));

  auto neutral = classify_nf(StrategyId::NormalOrder, var("x"));
  REQUIRE(std::holds_alternative<NormalFormClass>(neutral));
  CHECK(std::get<NormalFormClass>(neutral).shape == NormalShape::Neutral);
}

TEST_CASE("convertibility") {
  CHECK(convertible(app(church(2), church(2)), church(4), 1000).convertible);
  CHECK(!convertible(church(0), church(1), 100).convertible);
  auto t = parse("K I (c2 c2)");
  CHECK(convertible(t, t, 1000).convertible);
  CHECK(convertible(parse("Omega"), parse("I"), 50).exhausted);
}

TEST_CASE("normal forms satisfy their own classifier") {
  auto corpus = harness::sn_corpus();
  for (auto s : {StrategyId::Cbn, StrategyId::Lcbv, StrategyId::Rcbv,
                 StrategyId::NormalOrder}) {
    for (const auto& t : corpus) {
      auto n = normalize(s, t, 100000);
      REQUIRE(!n.exhausted);
      CAPTURE(strategy_name(s));
      CAPTURE(print(t));
      CHECK(is_nf(s, n.term));
    }
  }
}

TEST_CASE("deterministic strategies have at most one legal decomposition") {
  auto terms = harness::gen_closed_terms(400, 16, 321);
  auto more = harness::enumerate_closed_terms(6);
  terms.insert(terms.end(), more.begin(), more.end());
  for (const auto& t : terms) {
    auto all = decompose_all(t);
    for (auto s : {StrategyId::Cbn, StrategyId::Lcbv, StrategyId::Rcbv,
                   StrategyId::NormalOrder}) {
      std::size_t legal = 0;
      for (const auto& d : all) {
        const bool redex_ok =
            (s == StrategyId::Lcbv || s == StrategyId::Rcbv)
                ? d.redex->app().arg->is_lam()
                : true;
        if (redex_ok && validates(s, d.ctx)) ++legal;
      }
      CAPTURE(print(t));
      CAPTURE(strategy_name(s));
      CHECK(legal <= 1);
      auto direct = decompose(s, t);
      if (std::holds_alternative<Decomposition>(direct)) {
        const auto& dec = std::get<Decomposition>(direct);
        CHECK(legal == 1);
        CHECK(validates(s, dec.ctx));
        CHECK(term_eq(plug(dec.ctx, dec.redex), t));
      } else {
        CHECK(legal == 0);
      }
    }
  }
}

TEST_CASE("normal order extends call by name") {
  auto terms = harness::gen_closed_terms(300, 16, 654);
  for (const auto& t : terms) {
    auto cbn = decompose(StrategyId::Cbn, t);
    if (!std::holds_alternative<Decomposition>(cbn)) continue;
    auto no = decompose(StrategyId::NormalOrder, t);
    REQUIRE(std::holds_alternative<Decomposition>(no));
    CHECK(context_eq(std::get<Decomposition>(cbn).ctx,
                     std::get<Decomposition>(no).ctx));
    CHECK(term_eq(std::get<Decomposition>(cbn).redex,
                  std::get<Decomposition>(no).redex));
  }
}

TEST_CASE("one-step reducts rejoin (Church-Rosser desk check)") {
  // Closed terms up to 7 nodes hold at most one redex, so widen the
  // suite with strongly normalizing terms that fork.
  auto corpus = harness::enumerate_closed_terms(7);
  auto ii = app(prelude_lookup("I"), prelude_lookup("I"));
  corpus.push_back(app(ii, ii));
  corpus.push_back(parse("pair (I I) K"));
  corpus.push_back(parse("(\\x. I x) (I I)"));
  corpus.push_back(parse("c2 (I I)"));
  corpus.push_back(parse("(\\x. x x) (I I)"));
  corpus.push_back(parse("K (I I) (I K)"));
  std::size_t pairs = 0;
  for (const auto& t : corpus) {
    auto all = decompose_all(t);
    if (all.size() < 2) continue;
    std::vector<TermPtr> reducts;
    for (const auto& d : all) {
      FreshSupply fresh = fresh_for({t});
      auto c = contract_beta(d.redex, fresh);
      REQUIRE(c.has_value());
      reducts.push_back(plug(d.ctx, *c));
    }
    for (std::size_t i = 0; i < reducts.size(); ++i) {
      for (std::size_t j = i + 1; j < reducts.size(); ++j) {
        if (alpha_eq(reducts[i], reducts[j])) continue;
        auto conv = convertible(reducts[i], reducts[j], 5000);
        CHECK(conv.convertible);
        ++pairs;
      }
    }
  }
  CHECK(pairs > 0);
}

TEST_CASE("strategy contexts embed in general contexts") {
  auto terms = harness::gen_closed_terms(200, 14, 777);
  for (const auto& t : terms) {
    for (auto s : {StrategyId::Cbn, StrategyId::Lcbv, StrategyId::Rcbv,
                   StrategyId::NormalOrder}) {
      auto d = decompose(s, t);
      if (!std::holds_alternative<Decomposition>(d)) continue;
      CHECK(validates(StrategyId::FullBeta, std::get<Decomposition>(d).ctx));
    }
  }
}
