#include "amlab/additive.hpp"

#include <cctype>
#include <sstream>

#include "amlab/errors.hpp"

namespace amlab::additive {

ExprPtr cst(Nat n) {
  return std::make_shared<const Expr>(Expr::Const{std::move(n)});
}
ExprPtr plus(ExprPtr left, ExprPtr right) {
  return std::make_shared<const Expr>(
      Expr::Plus{std::move(left), std::move(right)});
}

bool expr_eq(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->is_const() != b->is_const()) return false;
  if (a->is_const()) return a->cst().n == b->cst().n;
  return expr_eq(a->plus().left, b->plus().left) &&
         expr_eq(a->plus().right, b->plus().right);
}

ContextPtr hole() { return std::make_shared<const Context>(Context::Hole{}); }
ContextPtr plus_l(ContextPtr ctx, ExprPtr right) {
  return std::make_shared<const Context>(
      Context::PlusL{std::move(ctx), std::move(right)});
}
ContextPtr plus_r(ExprPtr left, ContextPtr ctx) {
  return std::make_shared<const Context>(
      Context::PlusR{std::move(left), std::move(ctx)});
}

bool context_eq(const ContextPtr& a, const ContextPtr& b) {
  if (a->node().index() != b->node().index()) return false;
  if (a->is_hole()) return true;
  if (a->is_plus_l())
    return context_eq(a->plus_l().ctx, b->plus_l().ctx) &&
           expr_eq(a->plus_l().right, b->plus_l().right);
  return expr_eq(a->plus_r().left, b->plus_r().left) &&
         context_eq(a->plus_r().ctx, b->plus_r().ctx);
}

ExprPtr plug(const ContextPtr& ctx, const ExprPtr& e) {
  if (ctx->is_hole()) return e;
  if (ctx->is_plus_l())
    return plus(plug(ctx->plus_l().ctx, e), ctx->plus_l().right);
  return plus(ctx->plus_r().left, plug(ctx->plus_r().ctx, e));
}

ContextPtr plug_ctx(const ContextPtr& outer, const ContextPtr& inner) {
  if (outer->is_hole()) return inner;
  if (outer->is_plus_l())
    return plus_l(plug_ctx(outer->plus_l().ctx, inner), outer->plus_l().right);
  return plus_r(outer->plus_r().left, plug_ctx(outer->plus_r().ctx, inner));
}

std::uint64_t depth(const ExprPtr& e) {
  if (e->is_const()) return 0;
  return 1 + std::max(depth(e->plus().left), depth(e->plus().right));
}

std::optional<ExprPtr> contract_plus(const ExprPtr& e) {
  if (!e->is_plus()) return std::nullopt;
  const auto& p = e->plus();
  if (!p.left->is_const() || !p.right->is_const()) return std::nullopt;
  return cst(p.left->cst().n + p.right->cst().n);
}

namespace {

// Deterministic redex search under the order's restricted contexts.
std::optional<Redex> find_redex(EvalOrder order, const ExprPtr& e,
                                const ContextPtr& ctx) {
  if (e->is_const()) return std::nullopt;
  const auto& p = e->plus();
  if (order == EvalOrder::Left) {
    if (p.left->is_plus())
      return find_redex(order, p.left, plug_ctx(ctx, plus_l(hole(), p.right)));
    if (p.right->is_plus())
      return find_redex(order, p.right, plug_ctx(ctx, plus_r(p.left, hole())));
    return Redex{ctx, e};
  }
  if (p.right->is_plus())
    return find_redex(order, p.right, plug_ctx(ctx, plus_r(p.left, hole())));
  if (p.left->is_plus())
    return find_redex(order, p.left, plug_ctx(ctx, plus_l(hole(), p.right)));
  return Redex{ctx, e};
}

void all_redexes(const ExprPtr& e, const ContextPtr& ctx,
                 std::vector<Redex>& out) {
  if (e->is_const()) return;
  const auto& p = e->plus();
  if (p.left->is_const() && p.right->is_const()) {
    out.push_back(Redex{ctx, e});
    return;
  }
  all_redexes(p.left, plug_ctx(ctx, plus_l(hole(), p.right)), out);
  all_redexes(p.right, plug_ctx(ctx, plus_r(p.left, hole())), out);
}

}  // namespace

StrategyStep step_strategy(StepOrder order, const ExprPtr& e) {
  StrategyStep result;
  if (e->is_const()) return result;
  if (order == StepOrder::Any) {
    all_redexes(e, hole(), result.redexes);
    if (!result.redexes.empty()) {
      const auto& chosen = result.redexes.front();
      result.next = plug(chosen.ctx, *contract_plus(chosen.expr));
    }
    return result;
  }
  auto eo = order == StepOrder::Left ? EvalOrder::Left : EvalOrder::Right;
  auto redex = find_redex(eo, e, hole());
  if (!redex) return result;  // unreachable: non-const always has a redex
  result.next = plug(redex->ctx, *contract_plus(redex->expr));
  return result;
}

bool operator==(const Frame& a, const Frame& b) {
  if (a.slot.index() != b.slot.index()) return false;
  if (a.slot.index() == 0)
    return expr_eq(std::get<Frame::HolePlus>(a.slot).e,
                   std::get<Frame::HolePlus>(b.slot).e);
  return std::get<Frame::NumPlus>(a.slot).n ==
         std::get<Frame::NumPlus>(b.slot).n;
}

bool operator==(const Config& a, const Config& b) {
  return a.mode == b.mode && expr_eq(a.focus, b.focus) && a.stack == b.stack;
}

Config load(const ExprPtr& e) { return Config{Mode::Down, e, {}}; }

std::optional<std::pair<Config, std::string>> machine_step(EvalOrder order,
                                                           const Config& k) {
  const bool down = k.mode == Mode::Down;
  const bool focus_const = k.focus->is_const();

  if (down && !focus_const) {
    const auto& p = k.focus->plus();
    if (order == EvalOrder::Left) {
      return {{Config{Mode::Down, p.left,
                      k.stack.push(Frame{Frame::HolePlus{p.right}})},
               "↙"}};
    }
    return {{Config{Mode::Down, p.right,
                    k.stack.push(Frame{Frame::HolePlus{p.left}})},
             "↘"}};
  }
  if (down && focus_const) {
    return {{Config{Mode::Up, k.focus, k.stack}, "↑"}};
  }
  // Up mode; the focus is a constant.
  if (!focus_const)
    throw InvariantViolation("up-mode focus is not a constant",
                             show_config(order, k));
  if (k.stack.empty()) return std::nullopt;  // terminal
  const Frame& top = k.stack.head();
  if (std::holds_alternative<Frame::HolePlus>(top.slot)) {
    const auto& pending = std::get<Frame::HolePlus>(top.slot).e;
    auto rest = k.stack.tail().push(Frame{Frame::NumPlus{k.focus->cst().n}});
    return {{Config{Mode::Down, pending, rest},
             order == EvalOrder::Left ? "↘" : "↙"}};
  }
  const auto& done = std::get<Frame::NumPlus>(top.slot).n;
  Nat sum = order == EvalOrder::Left ? done + k.focus->cst().n
                                     : k.focus->cst().n + done;
  return {{Config{Mode::Up, cst(sum), k.stack.tail()}, "+"}};
}

MachineRun run_machine(EvalOrder order, const ExprPtr& e) {
  Config k = load(e);
  MachineRun run;
  run.trace.initial = k;
  for (;;) {
    auto next = machine_step(order, k);
    if (!next) break;
    k = next->first;
    run.stats.count(next->second, next->second == "+");
    run.trace.steps.push_back({next->second, k});
  }
  run.result = k.focus->cst().n;
  return run;
}

ContextPtr decode_stack(EvalOrder order, const List<Frame>& stack) {
  if (stack.empty()) return hole();
  ContextPtr rest = decode_stack(order, stack.tail());
  const Frame& top = stack.head();
  ContextPtr frame_ctx;
  if (std::holds_alternative<Frame::HolePlus>(top.slot)) {
    const auto& e = std::get<Frame::HolePlus>(top.slot).e;
    frame_ctx = order == EvalOrder::Left ? plus_l(hole(), e)
                                         : plus_r(e, hole());
  } else {
    auto n = std::get<Frame::NumPlus>(top.slot).n;
    frame_ctx = order == EvalOrder::Left ? plus_r(cst(n), hole())
                                         : plus_l(hole(), cst(n));
  }
  return plug_ctx(rest, frame_ctx);
}

Decomposition decode(EvalOrder order, const Config& k) {
  return Decomposition{k.focus, decode_stack(order, k.stack)};
}

ExprPtr recompose(const Decomposition& d) { return plug(d.ctx, d.focus); }

std::uint64_t potential(const ExprPtr& e) {
  if (e->is_const()) return 1;
  return 3 + potential(e->plus().left) + potential(e->plus().right);
}

std::uint64_t potential(EvalOrder order, const List<Frame>& stack) {
  std::uint64_t phi = 0;
  stack.for_each([&](const Frame& f) {
    if (std::holds_alternative<Frame::HolePlus>(f.slot))
      phi += 2 + potential(std::get<Frame::HolePlus>(f.slot).e);
    else
      phi += 1;
  });
  (void)order;  // mirror clauses coincide once frames are read by role
  return phi;
}

std::uint64_t potential(EvalOrder order, const Config& k) {
  std::uint64_t phi = potential(order, k.stack);
  if (k.mode == Mode::Down) phi += potential(k.focus);
  return phi;
}

Nat eval(const ExprPtr& e) {
  if (e->is_const()) return e->cst().n;
  return eval(e->plus().left) + eval(e->plus().right);
}

ExprPtr reify(const Nat& n) { return cst(n); }

ExprPtr nbe_normalize(const ExprPtr& e) { return reify(eval(e)); }

namespace {

struct AddParser {
  std::string_view src;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() &&
           std::isspace(static_cast<unsigned char>(src[pos])))
      ++pos;
  }

  ExprPtr expr() {
    ExprPtr left = atom();
    skip_ws();
    if (pos < src.size() && src[pos] == '+') {
      ++pos;
      ExprPtr right = atom();
      skip_ws();
      if (pos < src.size() && src[pos] == '+')
        throw ParseError("'+' does not associate; parenthesize", pos);
      return plus(std::move(left), std::move(right));
    }
    return left;
  }

  ExprPtr atom() {
    skip_ws();
    if (pos >= src.size()) throw ParseError("expected expression", pos);
    if (src[pos] == '(') {
      ++pos;
      ExprPtr inner = expr();
      skip_ws();
      if (pos >= src.size() || src[pos] != ')')
        throw ParseError("expected ')'", pos);
      ++pos;
      return inner;
    }
    if (!std::isdigit(static_cast<unsigned char>(src[pos])))
      throw ParseError("expected number or '('", pos);
    std::size_t start = pos;
    while (pos < src.size() &&
           std::isdigit(static_cast<unsigned char>(src[pos])))
      ++pos;
    return cst(Nat(std::string(src.substr(start, pos - start))));
  }
};

}  // namespace

ExprPtr parse_additive(std::string_view src) {
  AddParser p{src};
  ExprPtr e = p.expr();
  p.skip_ws();
  if (p.pos < src.size())
    throw ParseError("unexpected trailing input", p.pos);
  return e;
}

std::string print(const ExprPtr& e) {
  if (e->is_const()) return e->cst().n.str();
  const auto& p = e->plus();
  auto wrap = [](const ExprPtr& sub) {
    return sub->is_plus() ? "(" + print(sub) + ")" : print(sub);
  };
  return wrap(p.left) + " + " + wrap(p.right);
}

std::string print(const ContextPtr& c) {
  if (c->is_hole()) return "□";
  auto wrap_e = [](const ExprPtr& sub) {
    return sub->is_plus() ? "(" + print(sub) + ")" : print(sub);
  };
  auto wrap_c = [](const ContextPtr& sub) {
    return sub->is_hole() ? print(sub) : "(" + print(sub) + ")";
  };
  if (c->is_plus_l())
    return wrap_c(c->plus_l().ctx) + " + " + wrap_e(c->plus_l().right);
  return wrap_e(c->plus_r().left) + " + " + wrap_c(c->plus_r().ctx);
}

std::string show_config(EvalOrder order, const Config& k) {
  std::ostringstream out;
  out << "⟨" << print(k.focus) << ", ";
  k.stack.for_each([&](const Frame& f) {
    if (std::holds_alternative<Frame::HolePlus>(f.slot)) {
      const auto& e = std::get<Frame::HolePlus>(f.slot).e;
      if (order == EvalOrder::Left)
        out << "(□ + " << print(e) << ")";
      else
        out << "(" << print(e) << " + □)";
    } else {
      const auto& n = std::get<Frame::NumPlus>(f.slot).n;
      if (order == EvalOrder::Left)
        out << "(" << n.str() << " + □)";
      else
        out << "(□ + " << n.str() << ")";
    }
    out << "::";
  });
  out << "[]⟩" << (k.mode == Mode::Down ? "∇" : "Δ");
  return out.str();
}

}  // namespace amlab::additive
