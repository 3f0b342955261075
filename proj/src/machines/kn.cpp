#include "amlab/machines/kn.hpp"

#include <sstream>

#include "amlab/errors.hpp"

namespace amlab::machines {

bool operator==(const KnClosure& a, const KnClosure& b) {
  if (a.v.index() != b.v.index()) return false;
  if (a.v.index() == 1)
    return std::get<KnClosure::AbstractVar>(a.v).level ==
           std::get<KnClosure::AbstractVar>(b.v).level;
  const auto& ta = std::get<KnClosure::TE>(a.v);
  const auto& tb = std::get<KnClosure::TE>(b.v);
  return nameless_eq(ta.code, tb.code) && ta.env == tb.env;
}

bool operator==(const KnFrame& a, const KnFrame& b) {
  if (a.v.index() != b.v.index()) return false;
  switch (a.v.index()) {
    case 0:
      return std::get<KnFrame::Arg>(a.v).c == std::get<KnFrame::Arg>(b.v).c;
    case 1:
      return nameless_eq(std::get<KnFrame::FunTerm>(a.v).t,
                         std::get<KnFrame::FunTerm>(b.v).t);
    default:
      return true;
  }
}

bool operator==(const KnConfig& a, const KnConfig& b) {
  if (a.mode != b.mode || a.depth != b.depth || !(a.stack == b.stack))
    return false;
  if (a.mode == KnMode::Down) return a.focus == b.focus;
  return nameless_eq(a.term, b.term);
}

KnConfig kn_load(const NamelessPtr& t) {
  return KnConfig{KnMode::Down, KnClosure{KnClosure::TE{t, {}}}, nullptr, {},
                  0};
}

std::optional<std::pair<KnConfig, std::string>> kn_step(const KnConfig& k) {
  if (k.mode == KnMode::Down) {
    if (std::holds_alternative<KnClosure::AbstractVar>(k.focus.v)) {  // (6)
      auto level = std::get<KnClosure::AbstractVar>(k.focus.v).level;
      if (level > k.depth)
        throw InvariantViolation("abstract variable above current depth",
                                 show(k));
      return {{KnConfig{KnMode::Up, {}, nl_idx(k.depth - level), k.stack,
                        k.depth},
               "6"}};
    }
    const auto& te = std::get<KnClosure::TE>(k.focus.v);
    if (te.code->is_app()) {  // (1)
      KnClosure arg{KnClosure::TE{te.code->app().arg, te.env}};
      return {{KnConfig{KnMode::Down,
                        KnClosure{KnClosure::TE{te.code->app().fn, te.env}},
                        nullptr, k.stack.push(KnFrame{KnFrame::Arg{arg}}),
                        k.depth},
               "1"}};
    }
    if (te.code->is_lam()) {
      const bool arg_on_top =
          !k.stack.empty() &&
          std::holds_alternative<KnFrame::Arg>(k.stack.head().v);
      if (arg_on_top) {  // (2): the beta rule
        const auto& c = std::get<KnFrame::Arg>(k.stack.head().v).c;
        return {{KnConfig{KnMode::Down,
                          KnClosure{KnClosure::TE{te.code->lam().body,
                                                  te.env.push(c)}},
                          nullptr, k.stack.tail(), k.depth},
                 "2"}};
      }
      // (3): go under the binder with an abstract variable.
      KnClosure av{KnClosure::AbstractVar{k.depth + 1}};
      return {{KnConfig{KnMode::Down,
                        KnClosure{KnClosure::TE{te.code->lam().body,
                                                te.env.push(av)}},
                        nullptr, k.stack.push(KnFrame{KnFrame::LamMarker{}}),
                        k.depth + 1},
               "3"}};
    }
    // Index lookup, rules (4) and (5).
    if (te.env.empty())
      throw UnboundVariableError("de Bruijn index " +
                                 std::to_string(te.code->idx().n) +
                                 " escapes the environment (open term)");
    if (te.code->idx().n == 0)
      return {{KnConfig{KnMode::Down, te.env.head(), nullptr, k.stack,
                        k.depth},
               "4"}};
    return {{KnConfig{KnMode::Down,
                      KnClosure{KnClosure::TE{nl_idx(te.code->idx().n - 1),
                                              te.env.tail()}},
                      nullptr, k.stack, k.depth},
             "5"}};
  }
  // Up mode: rebuild the normal form.
  if (k.stack.empty()) return std::nullopt;  // terminal at depth 0
  const KnFrame& top = k.stack.head();
  if (std::holds_alternative<KnFrame::Arg>(top.v)) {  // (8)
    const auto& c = std::get<KnFrame::Arg>(top.v).c;
    return {{KnConfig{KnMode::Down, c, nullptr,
                      k.stack.tail().push(KnFrame{KnFrame::FunTerm{k.term}}),
                      k.depth},
             "8"}};
  }
  if (std::holds_alternative<KnFrame::LamMarker>(top.v)) {  // (9)
    return {{KnConfig{KnMode::Up, {}, nl_lam(k.term), k.stack.tail(),
                      k.depth - 1},
             "9"}};
  }
  // (10): attach the rebuilt argument to the rebuilt function.
  const auto& fun = std::get<KnFrame::FunTerm>(top.v).t;
  return {{KnConfig{KnMode::Up, {}, nl_app(fun, k.term), k.stack.tail(),
                    k.depth},
           "10"}};
}

namespace {

void check_depth_invariant(const KnConfig& k) {
  std::uint64_t markers = 0;
  k.stack.for_each([&](const KnFrame& f) {
    if (std::holds_alternative<KnFrame::LamMarker>(f.v)) ++markers;
  });
  if (markers != k.depth)
    throw InvariantViolation("depth counter out of sync with lambda frames",
                             show(k));
}

}  // namespace

KnRun run_kn(const NamelessPtr& t, std::uint64_t fuel, bool record_trace,
             bool check_invariants) {
  KnConfig k = kn_load(t);
  KnRun run{RunStatus::Halted, k, {}, {}};
  run.trace.initial = k;
  for (;;) {
    if (run.stats.total == fuel) {
      run.status = kn_step(k) ? RunStatus::FuelExhausted : RunStatus::Halted;
      break;
    }
    auto next = kn_step(k);
    if (!next) {
      if (k.depth != 0)
        throw InvariantViolation("terminal configuration at nonzero depth",
                                 show(k));
      break;
    }
    k = next->first;
    if (check_invariants) check_depth_invariant(k);
    run.stats.count(next->second, next->second == "2");
    if (record_trace) run.trace.steps.push_back({next->second, k});
  }
  run.stats.fuel_used = run.stats.total;
  run.final = k;
  return run;
}

namespace {

void show_kn_closure(const KnClosure& c, std::ostringstream& out) {
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
    show_kn_closure(e, out);
  });
  out << "])";
}

}  // namespace

std::string show(const KnConfig& k) {
  std::ostringstream out;
  out << "⟨";
  if (k.mode == KnMode::Down)
    show_kn_closure(k.focus, out);
  else
    out << print(k.term);
  out << ", ";
  k.stack.for_each([&](const KnFrame& f) {
    if (std::holds_alternative<KnFrame::Arg>(f.v)) {
      out << "□";
      show_kn_closure(std::get<KnFrame::Arg>(f.v).c, out);
    } else if (std::holds_alternative<KnFrame::FunTerm>(f.v)) {
      out << print(std::get<KnFrame::FunTerm>(f.v).t) << "□";
    } else {
      out << "λ□";
    }
    out << "::";
  });
  out << "[], " << k.depth << "⟩"
      << (k.mode == KnMode::Down ? "∇" : "Δ");
  return out.str();
}

}  // namespace amlab::machines
