#include "amlab/strategies.hpp"

#include <algorithm>
#include <stdexcept>

namespace amlab::strategies {

StrategyId strategy_from_name(const std::string& name) {
  if (name == "cbn") return StrategyId::Cbn;
  if (name == "lcbv") return StrategyId::Lcbv;
  if (name == "rcbv") return StrategyId::Rcbv;
  if (name == "no") return StrategyId::NormalOrder;
  if (name == "full") return StrategyId::FullBeta;
  throw std::invalid_argument("unknown strategy: " + name);
}

std::string strategy_name(StrategyId s) {
  switch (s) {
    case StrategyId::Cbn: return "cbn";
    case StrategyId::Lcbv: return "lcbv";
    case StrategyId::Rcbv: return "rcbv";
    case StrategyId::NormalOrder: return "no";
    case StrategyId::FullBeta: return "full";
  }
  return "?";
}

TermPtr plug(const LamContext& ctx, const TermPtr& t) {
  TermPtr acc = t;
  for (const Frame& f : ctx) {
    switch (f.kind) {
      case Frame::Kind::AppL: acc = app(acc, f.term); break;
      case Frame::Kind::AppR: acc = app(f.term, acc); break;
      case Frame::Kind::Under: acc = lam(f.binder, acc); break;
    }
  }
  return acc;
}

bool context_eq(const LamContext& a, const LamContext& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].kind != b[i].kind) return false;
    if (a[i].kind == Frame::Kind::Under) {
      if (a[i].binder != b[i].binder) return false;
    } else if (!term_eq(a[i].term, b[i].term)) {
      return false;
    }
  }
  return true;
}

bool is_beta_normal(const TermPtr& t) {
  if (t->is_var()) return true;
  if (t->is_lam()) return is_beta_normal(t->lam().body);
  return is_neutral(t->app().fn) && is_beta_normal(t->app().arg);
}

bool is_neutral(const TermPtr& t) {
  if (t->is_var()) return true;
  if (t->is_app())
    return is_neutral(t->app().fn) && is_beta_normal(t->app().arg);
  return false;
}

namespace {

// States of the per-strategy context automata. Frames are consumed from
// the root end; acceptance asks whether the hole is derivable in the
// final state.
enum class NState { N, NBar };

bool validate_q(const LamContext& ctx) {
  for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
    if (it->kind != Frame::Kind::AppL) return false;
  return true;
}

bool validate_e(const LamContext& ctx) {
  for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
    if (it->kind == Frame::Kind::AppL) continue;
    if (it->kind == Frame::Kind::AppR && it->term->is_lam()) continue;
    return false;
  }
  return true;
}

bool validate_f(const LamContext& ctx) {
  for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
    if (it->kind == Frame::Kind::AppR) continue;
    if (it->kind == Frame::Kind::AppL && it->term->is_lam()) continue;
    return false;
  }
  return true;
}

bool validate_n(const LamContext& ctx) {
  NState state = NState::N;
  for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
    switch (it->kind) {
      case Frame::Kind::Under:
        if (state != NState::N) return false;
        break;
      case Frame::Kind::AppL:
        state = NState::NBar;
        break;
      case Frame::Kind::AppR:
        // Descending right requires a neutral (normal) function part.
        if (!is_neutral(it->term)) return false;
        state = NState::N;
        break;
    }
  }
  return true;  // both N and NBar derive the hole
}

}  // namespace

bool validates(StrategyId s, const LamContext& ctx) {
  switch (s) {
    case StrategyId::Cbn: return validate_q(ctx);
    case StrategyId::Lcbv: return validate_e(ctx);
    case StrategyId::Rcbv: return validate_f(ctx);
    case StrategyId::NormalOrder: return validate_n(ctx);
    case StrategyId::FullBeta: return true;
  }
  return false;
}

std::optional<TermPtr> contract_beta(const TermPtr& t, FreshSupply& fresh) {
  if (!t->is_app() || !t->app().fn->is_lam()) return std::nullopt;
  const auto& l = t->app().fn->lam();
  return subst_avoiding(l.body, l.binder, t->app().arg, fresh);
}

std::optional<TermPtr> contract_beta_lambda(const TermPtr& t,
                                            FreshSupply& fresh) {
  if (!t->is_app() || !t->app().fn->is_lam() || !t->app().arg->is_lam())
    return std::nullopt;
  return contract_beta(t, fresh);
}

namespace {

void push_app_l(LamContext& ctx, const TermPtr& arg) {
  ctx.push_back(Frame{Frame::Kind::AppL, arg, ""});
}
void push_app_r(LamContext& ctx, const TermPtr& fn) {
  ctx.push_back(Frame{Frame::Kind::AppR, fn, ""});
}
void push_under(LamContext& ctx, const std::string& binder) {
  ctx.push_back(Frame{Frame::Kind::Under, nullptr, binder});
}

// Contexts are discovered root-first, so frames are collected in root
// order and reversed into hole-first order at the end.
std::optional<Decomposition> finish(std::optional<Decomposition> d) {
  if (d) std::reverse(d->ctx.begin(), d->ctx.end());
  return d;
}

std::optional<Decomposition> find_cbn(const TermPtr& t, LamContext ctx) {
  if (!t->is_app()) return std::nullopt;
  if (t->app().fn->is_lam()) return Decomposition{std::move(ctx), t};
  push_app_l(ctx, t->app().arg);
  return find_cbn(t->app().fn, std::move(ctx));
}

std::optional<Decomposition> find_lcbv(const TermPtr& t, LamContext ctx) {
  if (!t->is_app()) return std::nullopt;
  const auto& a = t->app();
  if (!a.fn->is_lam()) {
    push_app_l(ctx, a.arg);
    return find_lcbv(a.fn, std::move(ctx));
  }
  if (a.arg->is_lam()) return Decomposition{std::move(ctx), t};
  push_app_r(ctx, a.fn);
  return find_lcbv(a.arg, std::move(ctx));
}

std::optional<Decomposition> find_rcbv(const TermPtr& t, LamContext ctx) {
  if (!t->is_app()) return std::nullopt;
  const auto& a = t->app();
  {
    LamContext inner = ctx;
    push_app_r(inner, a.fn);
    if (auto d = find_rcbv(a.arg, std::move(inner))) return d;
  }
  if (!a.arg->is_lam()) return std::nullopt;  // argument stuck, not a value
  {
    LamContext inner = ctx;
    push_app_l(inner, a.arg);
    if (auto d = find_rcbv(a.fn, std::move(inner))) return d;
  }
  if (a.fn->is_lam()) return Decomposition{std::move(ctx), t};
  return std::nullopt;
}

std::optional<Decomposition> find_normal(const TermPtr& t, LamContext ctx);

// Search inside an application spine; never descends under an
// abstraction in function position.
std::optional<Decomposition> find_normal_spine(const TermPtr& t,
                                               LamContext ctx) {
  if (!t->is_app()) return std::nullopt;
  const auto& a = t->app();
  if (a.fn->is_lam()) return Decomposition{std::move(ctx), t};
  {
    LamContext inner = ctx;
    push_app_l(inner, a.arg);
    if (auto d = find_normal_spine(a.fn, std::move(inner))) return d;
  }
  // Function part is a normal neutral term; continue into the argument.
  push_app_r(ctx, a.fn);
  return find_normal(a.arg, std::move(ctx));
}

std::optional<Decomposition> find_normal(const TermPtr& t, LamContext ctx) {
  if (t->is_var()) return std::nullopt;
  if (t->is_lam()) {
    push_under(ctx, t->lam().binder);
    return find_normal(t->lam().body, std::move(ctx));
  }
  return find_normal_spine(t, std::move(ctx));
}

NormalFormClass nf_class_of(StrategyId s, const TermPtr& t) {
  switch (s) {
    case StrategyId::Cbn:
      return NormalFormClass{NormalFormClass::Kind::WeakHeadNF, std::nullopt};
    case StrategyId::Lcbv:
    case StrategyId::Rcbv:
      return NormalFormClass{NormalFormClass::Kind::CbvValue, std::nullopt};
    case StrategyId::NormalOrder:
    case StrategyId::FullBeta:
      return NormalFormClass{
          NormalFormClass::Kind::BetaNF,
          t->is_lam() ? NormalShape::Abs : NormalShape::Neutral};
  }
  return NormalFormClass{NormalFormClass::Kind::BetaNF, std::nullopt};
}

}  // namespace

std::variant<Decomposition, NormalFormClass> decompose(StrategyId s,
                                                       const TermPtr& t) {
  std::optional<Decomposition> d;
  switch (s) {
    case StrategyId::Cbn: d = finish(find_cbn(t, {})); break;
    case StrategyId::Lcbv: d = finish(find_lcbv(t, {})); break;
    case StrategyId::Rcbv: d = finish(find_rcbv(t, {})); break;
    case StrategyId::NormalOrder:
    case StrategyId::FullBeta: d = finish(find_normal(t, {})); break;
  }
  if (d) return *d;
  return nf_class_of(s, t);
}

namespace {

void all_redexes(const TermPtr& t, LamContext& ctx,
                 std::vector<Decomposition>& out) {
  if (t->is_app()) {
    if (t->app().fn->is_lam()) {
      LamContext here = ctx;
      std::reverse(here.begin(), here.end());
      out.push_back(Decomposition{std::move(here), t});
    }
    push_app_l(ctx, t->app().arg);
    all_redexes(t->app().fn, ctx, out);
    ctx.pop_back();
    push_app_r(ctx, t->app().fn);
    all_redexes(t->app().arg, ctx, out);
    ctx.pop_back();
  } else if (t->is_lam()) {
    push_under(ctx, t->lam().binder);
    all_redexes(t->lam().body, ctx, out);
    ctx.pop_back();
  }
}

}  // namespace

std::vector<Decomposition> decompose_all(const TermPtr& t) {
  std::vector<Decomposition> out;
  LamContext ctx;
  all_redexes(t, ctx, out);
  return out;
}

std::variant<TermPtr, NormalFormClass> step(StrategyId s, const TermPtr& t,
                                            FreshSupply& fresh) {
  auto d = decompose(s, t);
  if (std::holds_alternative<NormalFormClass>(d))
    return std::get<NormalFormClass>(d);
  const auto& dec = std::get<Decomposition>(d);
  const bool value_only = s == StrategyId::Lcbv || s == StrategyId::Rcbv;
  auto contracted = value_only ? contract_beta_lambda(dec.redex, fresh)
                               : contract_beta(dec.redex, fresh);
  if (!contracted)
    throw std::logic_error("decomposition produced a non-redex");
  return plug(dec.ctx, *contracted);
}

NormalizeResult normalize(StrategyId s, const TermPtr& t, std::uint64_t fuel) {
  FreshSupply fresh = fresh_for({t});
  NormalizeResult r;
  r.term = t;
  while (r.steps < fuel) {
    auto next = step(s, r.term, fresh);
    if (std::holds_alternative<NormalFormClass>(next)) return r;
    r.term = std::get<TermPtr>(next);
    ++r.steps;
  }
  // One more probe: the fuel may have run out exactly at the normal form.
  auto next = step(s, r.term, fresh);
  if (std::holds_alternative<NormalFormClass>(next)) return r;
  r.exhausted = true;
  return r;
}

std::variant<NormalFormClass, std::monostate> classify_nf(StrategyId s,
                                                          const TermPtr& t) {
  if (!is_nf(s, t)) return std::monostate{};
  return nf_class_of(s, t);
}

namespace {

bool lcbv_irreducible(const TermPtr& t) {
  if (!t->is_app()) return true;
  const auto& a = t->app();
  if (!lcbv_irreducible(a.fn)) return false;
  if (!a.fn->is_lam()) return true;  // stuck function, argument unreachable
  if (a.arg->is_lam()) return false;  // a value-value redex
  return lcbv_irreducible(a.arg);
}

bool rcbv_irreducible(const TermPtr& t) {
  if (!t->is_app()) return true;
  const auto& a = t->app();
  if (!rcbv_irreducible(a.arg)) return false;
  if (!a.arg->is_lam()) return true;  // stuck argument, function unreachable
  if (!rcbv_irreducible(a.fn)) return false;
  return !a.fn->is_lam();
}

bool whnf(const TermPtr& t) {
  if (t->is_lam() || t->is_var()) return true;
  const TermPtr* cur = &t;
  while ((*cur)->is_app()) cur = &(*cur)->app().fn;
  return (*cur)->is_var();
}

}  // namespace

bool is_nf(StrategyId s, const TermPtr& t) {
  switch (s) {
    case StrategyId::Cbn: return whnf(t);
    case StrategyId::Lcbv: return lcbv_irreducible(t);
    case StrategyId::Rcbv: return rcbv_irreducible(t);
    case StrategyId::NormalOrder:
    case StrategyId::FullBeta: return is_beta_normal(t);
  }
  return false;
}

Convertibility convertible(const TermPtr& t1, const TermPtr& t2,
                           std::uint64_t fuel) {
  auto n1 = normalize(StrategyId::NormalOrder, t1, fuel);
  auto n2 = normalize(StrategyId::NormalOrder, t2, fuel);
  if (n1.exhausted || n2.exhausted) return Convertibility{false, true};
  return Convertibility{alpha_eq(n1.term, n2.term), false};
}

}  // namespace amlab::strategies
