#include "amlab/machines/ghost_kn.hpp"

#include <sstream>

#include "amlab/errors.hpp"

namespace amlab::machines {

GhostNePtr ghost_idx(std::uint64_t n) {
  return std::make_shared<const GhostNe>(GhostNe{GhostNe::Idx{n}});
}
GhostNePtr ghost_app(GhostNePtr fn, GhostNfPtr arg) {
  return std::make_shared<const GhostNe>(
      GhostNe{GhostNe::App{std::move(fn), std::move(arg)}});
}
GhostNfPtr ghost_lam(GhostNfPtr body) {
  return std::make_shared<const GhostNf>(GhostNf{GhostNf::Lam{std::move(body)}});
}
GhostNfPtr ghost_coe(GhostNePtr neutral) {
  return std::make_shared<const GhostNf>(
      GhostNf{GhostNf::Coe{std::move(neutral)}});
}

bool ghost_ne_eq(const GhostNePtr& a, const GhostNePtr& b) {
  if (a.get() == b.get()) return true;
  if (a->v.index() != b->v.index()) return false;
  if (a->v.index() == 0)
    return std::get<GhostNe::Idx>(a->v).n == std::get<GhostNe::Idx>(b->v).n;
  const auto& xa = std::get<GhostNe::App>(a->v);
  const auto& xb = std::get<GhostNe::App>(b->v);
  return ghost_ne_eq(xa.fn, xb.fn) && ghost_nf_eq(xa.arg, xb.arg);
}

bool ghost_nf_eq(const GhostNfPtr& a, const GhostNfPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->v.index() != b->v.index()) return false;
  if (a->v.index() == 0)
    return ghost_nf_eq(std::get<GhostNf::Lam>(a->v).body,
                       std::get<GhostNf::Lam>(b->v).body);
  return ghost_ne_eq(std::get<GhostNf::Coe>(a->v).neutral,
                     std::get<GhostNf::Coe>(b->v).neutral);
}

NamelessPtr erase(const GhostNePtr& a) {
  if (std::holds_alternative<GhostNe::Idx>(a->v))
    return nl_idx(std::get<GhostNe::Idx>(a->v).n);
  const auto& x = std::get<GhostNe::App>(a->v);
  return nl_app(erase(x.fn), erase(x.arg));
}

NamelessPtr erase(const GhostNfPtr& n) {
  if (std::holds_alternative<GhostNf::Lam>(n->v))
    return nl_lam(erase(std::get<GhostNf::Lam>(n->v).body));
  return erase(std::get<GhostNf::Coe>(n->v).neutral);
}

bool operator==(const GhostFrame& a, const GhostFrame& b) {
  if (a.v.index() != b.v.index()) return false;
  switch (a.v.index()) {
    case 0:
      return std::get<GhostFrame::Arg>(a.v).c ==
             std::get<GhostFrame::Arg>(b.v).c;
    case 2:
      return ghost_ne_eq(std::get<GhostFrame::FunNeutral>(a.v).a,
                         std::get<GhostFrame::FunNeutral>(b.v).a);
    default:
      return true;
  }
}

GhostConfig ghost_load(const NamelessPtr& t) {
  List<GhostFrame> stack;
  stack = stack.push(GhostFrame{GhostFrame::CoeMarker{}});
  return GhostConfig{GhostMode::Down, KnClosure{KnClosure::TE{t, {}}},
                     nullptr, nullptr, stack, 0};
}

std::optional<std::pair<GhostConfig, std::string>> ghost_step(
    const GhostConfig& k) {
  switch (k.mode) {
    case GhostMode::Down: {
      if (std::holds_alternative<KnClosure::AbstractVar>(k.focus.v)) {  // (6)
        auto level = std::get<KnClosure::AbstractVar>(k.focus.v).level;
        if (level > k.depth)
          throw InvariantViolation("abstract variable above current depth",
                                   show(k));
        return {{GhostConfig{GhostMode::UpNeutral, {},
                             ghost_idx(k.depth - level), nullptr, k.stack,
                             k.depth},
                 "6"}};
      }
      const auto& te = std::get<KnClosure::TE>(k.focus.v);
      if (te.code->is_app()) {  // (1)
        KnClosure arg{KnClosure::TE{te.code->app().arg, te.env}};
        return {{GhostConfig{GhostMode::Down,
                             KnClosure{KnClosure::TE{te.code->app().fn,
                                                     te.env}},
                             nullptr, nullptr,
                             k.stack.push(GhostFrame{GhostFrame::Arg{arg}}),
                             k.depth},
                 "1"}};
      }
      if (te.code->is_lam()) {
        if (k.stack.empty())
          throw InvariantViolation("down mode with empty stack", show(k));
        const GhostFrame& top = k.stack.head();
        if (std::holds_alternative<GhostFrame::Arg>(top.v)) {  // (2)
          const auto& c = std::get<GhostFrame::Arg>(top.v).c;
          return {{GhostConfig{GhostMode::Down,
                               KnClosure{KnClosure::TE{te.code->lam().body,
                                                       te.env.push(c)}},
                               nullptr, nullptr, k.stack.tail(), k.depth},
                   "2"}};
        }
        if (std::holds_alternative<GhostFrame::CoeMarker>(top.v)) {  // (3)
          // The binder frame goes under the coercion marker: the body is
          // evaluated over an applicative stack again, and the marker is
          // what rule (8a) later consumes. This also keeps a binder frame
          // from ever sitting directly on an argument frame.
          KnClosure av{KnClosure::AbstractVar{k.depth + 1}};
          auto stack = k.stack.tail()
                           .push(GhostFrame{GhostFrame::LamMarker{}})
                           .push(GhostFrame{GhostFrame::CoeMarker{}});
          return {{GhostConfig{
                       GhostMode::Down,
                       KnClosure{KnClosure::TE{te.code->lam().body,
                                               te.env.push(av)}},
                       nullptr, nullptr, stack, k.depth + 1},
                   "3"}};
        }
        throw InvariantViolation("abstraction over a non-applicative stack",
                                 show(k));
      }
      // Index lookup, rules (4) and (5).
      if (te.env.empty())
        throw UnboundVariableError("de Bruijn index " +
                                   std::to_string(te.code->idx().n) +
                                   " escapes the environment (open term)");
      if (te.code->idx().n == 0)
        return {{GhostConfig{GhostMode::Down, te.env.head(), nullptr, nullptr,
                             k.stack, k.depth},
                 "4"}};
      return {{GhostConfig{GhostMode::Down,
                           KnClosure{KnClosure::TE{nl_idx(te.code->idx().n - 1),
                                                   te.env.tail()}},
                           nullptr, nullptr, k.stack, k.depth},
               "5"}};
    }
    case GhostMode::UpNeutral: {
      if (k.stack.empty())
        throw InvariantViolation("neutral mode with empty stack", show(k));
      const GhostFrame& top = k.stack.head();
      if (std::holds_alternative<GhostFrame::Arg>(top.v)) {  // (8)
        const auto& c = std::get<GhostFrame::Arg>(top.v).c;
        auto stack = k.stack.tail()
                         .push(GhostFrame{GhostFrame::FunNeutral{k.neutral}})
                         .push(GhostFrame{GhostFrame::CoeMarker{}});
        return {{GhostConfig{GhostMode::Down, c, nullptr, nullptr, stack,
                             k.depth},
                 "8"}};
      }
      if (std::holds_alternative<GhostFrame::CoeMarker>(top.v)) {  // (8a)
        return {{GhostConfig{GhostMode::UpNormal, {}, nullptr,
                             ghost_coe(k.neutral), k.stack.tail(), k.depth},
                 "8a"}};
      }
      throw InvariantViolation("neutral focus over a non-applicative stack",
                               show(k));
    }
    case GhostMode::UpNormal: {
      if (k.stack.empty()) return std::nullopt;  // terminal at depth 0
      const GhostFrame& top = k.stack.head();
      if (std::holds_alternative<GhostFrame::LamMarker>(top.v)) {  // (9)
        return {{GhostConfig{GhostMode::UpNormal, {}, nullptr,
                             ghost_lam(k.normal), k.stack.tail(), k.depth - 1},
                 "9"}};
      }
      if (std::holds_alternative<GhostFrame::FunNeutral>(top.v)) {  // (10)
        const auto& fun = std::get<GhostFrame::FunNeutral>(top.v).a;
        return {{GhostConfig{GhostMode::UpNeutral, {},
                             ghost_app(fun, k.normal), nullptr,
                             k.stack.tail(), k.depth},
                 "10"}};
      }
      throw InvariantViolation("normal focus over an applicative stack",
                               show(k));
    }
  }
  return std::nullopt;
}

namespace {

bool valid_nu(List<GhostFrame> s);

bool valid_alpha(List<GhostFrame> s) {
  if (s.empty()) return false;
  const GhostFrame& top = s.head();
  if (std::holds_alternative<GhostFrame::Arg>(top.v))
    return valid_alpha(s.tail());
  if (std::holds_alternative<GhostFrame::CoeMarker>(top.v))
    return valid_nu(s.tail());
  return false;
}

bool valid_nu(List<GhostFrame> s) {
  if (s.empty()) return true;
  const GhostFrame& top = s.head();
  if (std::holds_alternative<GhostFrame::LamMarker>(top.v))
    return valid_nu(s.tail());
  if (std::holds_alternative<GhostFrame::FunNeutral>(top.v))
    return valid_alpha(s.tail());
  return false;
}

}  // namespace

bool ghost_stack_valid(const GhostConfig& k) {
  if (k.mode == GhostMode::UpNormal) return valid_nu(k.stack);
  return valid_alpha(k.stack);
}

GhostRun run_ghost(const NamelessPtr& t, std::uint64_t fuel, bool record_trace,
                   bool check_invariants) {
  GhostConfig k = ghost_load(t);
  GhostRun run{RunStatus::Halted, k, {}, {}};
  run.trace.initial = k;
  for (;;) {
    if (run.stats.total == fuel) {
      run.status = ghost_step(k) ? RunStatus::FuelExhausted : RunStatus::Halted;
      break;
    }
    auto next = ghost_step(k);
    if (!next) {
      if (k.depth != 0)
        throw InvariantViolation("terminal configuration at nonzero depth",
                                 show(k));
      break;
    }
    k = next->first;
    if (check_invariants && !ghost_stack_valid(k))
      throw InvariantViolation("stack violates the applicative grammar",
                               show(k));
    run.stats.count(next->second, next->second == "2");
    if (record_trace) run.trace.steps.push_back({next->second, k});
  }
  run.stats.fuel_used = run.stats.total;
  run.final = k;
  return run;
}

KnConfig erase(const GhostConfig& k) {
  List<KnFrame> stack;
  // Rebuild bottom-up to preserve order while dropping coercion frames.
  std::vector<const GhostFrame*> frames;
  k.stack.for_each([&](const GhostFrame& f) { frames.push_back(&f); });
  for (auto it = frames.rbegin(); it != frames.rend(); ++it) {
    const GhostFrame& f = **it;
    if (std::holds_alternative<GhostFrame::Arg>(f.v))
      stack = stack.push(KnFrame{KnFrame::Arg{std::get<GhostFrame::Arg>(f.v).c}});
    else if (std::holds_alternative<GhostFrame::FunNeutral>(f.v))
      stack = stack.push(KnFrame{
          KnFrame::FunTerm{erase(std::get<GhostFrame::FunNeutral>(f.v).a)}});
    else if (std::holds_alternative<GhostFrame::LamMarker>(f.v))
      stack = stack.push(KnFrame{KnFrame::LamMarker{}});
    // CoeMarker frames vanish.
  }
  switch (k.mode) {
    case GhostMode::Down:
      return KnConfig{KnMode::Down, k.focus, nullptr, stack, k.depth};
    case GhostMode::UpNeutral:
      return KnConfig{KnMode::Up, {}, erase(k.neutral), stack, k.depth};
    case GhostMode::UpNormal:
      return KnConfig{KnMode::Up, {}, erase(k.normal), stack, k.depth};
  }
  return KnConfig{};
}

namespace {

void show_ghost_ne(const GhostNePtr& a, std::ostringstream& out);

void show_ghost_nf(const GhostNfPtr& n, std::ostringstream& out) {
  if (std::holds_alternative<GhostNf::Lam>(n->v)) {
    out << "λ";
    show_ghost_nf(std::get<GhostNf::Lam>(n->v).body, out);
  } else {
    out << "[";
    show_ghost_ne(std::get<GhostNf::Coe>(n->v).neutral, out);
    out << "]";
  }
}

void show_ghost_ne(const GhostNePtr& a, std::ostringstream& out) {
  if (std::holds_alternative<GhostNe::Idx>(a->v)) {
    out << std::get<GhostNe::Idx>(a->v).n;
  } else {
    const auto& x = std::get<GhostNe::App>(a->v);
    out << "(";
    show_ghost_ne(x.fn, out);
    out << " ";
    show_ghost_nf(x.arg, out);
    out << ")";
  }
}

void show_kn_closure_g(const KnClosure& c, std::ostringstream& out) {
  if (std::holds_alternative<KnClosure::AbstractVar>(c.v)) {
    out << "V(" << std::get<KnClosure::AbstractVar>(c.v).level << ")";
    return;
  }
  const auto& te = std::get<KnClosure::TE>(c.v);
  out << "(" << print(te.code) << ", [";
  bool first = true;
  te.env.for_each([&](const KnClosure& e) {
    if (!first) out << ", ";
    first = false;
    show_kn_closure_g(e, out);
  });
  out << "])";
}

}  // namespace

std::string show(const GhostConfig& k) {
  std::ostringstream out;
  out << "⟨";
  switch (k.mode) {
    case GhostMode::Down: show_kn_closure_g(k.focus, out); break;
    case GhostMode::UpNeutral: show_ghost_ne(k.neutral, out); break;
    case GhostMode::UpNormal: show_ghost_nf(k.normal, out); break;
  }
  out << ", ";
  k.stack.for_each([&](const GhostFrame& f) {
    if (std::holds_alternative<GhostFrame::Arg>(f.v)) {
      out << "□";
      show_kn_closure_g(std::get<GhostFrame::Arg>(f.v).c, out);
    } else if (std::holds_alternative<GhostFrame::CoeMarker>(f.v)) {
      out << "[□]";
    } else if (std::holds_alternative<GhostFrame::FunNeutral>(f.v)) {
      show_ghost_ne(std::get<GhostFrame::FunNeutral>(f.v).a, out);
      out << "□";
    } else {
      out << "λ□";
    }
    out << "::";
  });
  out << "[], " << k.depth << "⟩";
  switch (k.mode) {
    case GhostMode::Down: out << "∇"; break;
    case GhostMode::UpNeutral: out << "Δ"; break;
    case GhostMode::UpNormal: out << "Δ'"; break;
  }
  return out.str();
}

}  // namespace amlab::machines
