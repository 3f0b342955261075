#include "amlab/machines/secd.hpp"

#include <sstream>

#include "amlab/errors.hpp"

namespace amlab::machines {

bool operator==(const SecdBinding& a, const SecdBinding& b) {
  return a.name == b.name && secd_value_eq(a.value, b.value);
}

bool secd_value_eq(const SecdValuePtr& a, const SecdValuePtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  return term_eq(a->code, b->code) && a->env == b->env;
}

bool operator==(const ControlItem& a, const ControlItem& b) {
  if (a.item.index() != b.item.index()) return false;
  if (a.item.index() == 1) return true;
  return term_eq(std::get<TermPtr>(a.item), std::get<TermPtr>(b.item));
}

bool operator==(const SecdDumpFrame& a, const SecdDumpFrame& b) {
  auto stack_eq = [](const List<SecdValuePtr>& x, const List<SecdValuePtr>& y) {
    auto xs = x;
    auto ys = y;
    while (!xs.empty() && !ys.empty()) {
      if (!secd_value_eq(xs.head(), ys.head())) return false;
      xs = xs.tail();
      ys = ys.tail();
    }
    return xs.empty() && ys.empty();
  };
  return stack_eq(a.stack, b.stack) && a.env == b.env &&
         a.control == b.control;
}

namespace {

SecdValuePtr env_lookup(const SecdEnv& env, const std::string& name) {
  for (SecdEnv e = env; !e.empty(); e = e.tail())
    if (e.head().name == name) return e.head().value;
  throw UnboundVariableError(name);
}

}  // namespace

SecdConfig secd_load(const TermPtr& t) {
  Control c = Control{}.push(ControlItem{t});
  return SecdConfig{{}, {}, c, {}};
}

std::optional<std::pair<SecdConfig, std::string>> secd_step(
    const SecdConfig& k) {
  if (!k.control.empty()) {
    const ControlItem& item = k.control.head();
    if (std::holds_alternative<TermPtr>(item.item)) {
      const TermPtr& t = std::get<TermPtr>(item.item);
      if (t->is_var()) {  // (2a)
        return {{SecdConfig{k.stack.push(env_lookup(k.env, t->var().name)),
                            k.env, k.control.tail(), k.dump},
                 "2a"}};
      }
      if (t->is_lam()) {  // (2b): close over the entire current environment
        auto v = std::make_shared<const SecdValue>(SecdValue{t, k.env});
        return {{SecdConfig{k.stack.push(std::move(v)), k.env,
                            k.control.tail(), k.dump},
                 "2b"}};
      }
      // (2d): argument scheduled before function (right-to-left order).
      const auto& a = t->app();
      Control rest = k.control.tail()
                         .push(ControlItem{ControlItem::Ap{}})
                         .push(ControlItem{a.fn})
                         .push(ControlItem{a.arg});
      return {{SecdConfig{k.stack, k.env, rest, k.dump}, "2d"}};
    }
    // (2c1): apply; the two topmost stack entries are function and argument.
    if (k.stack.empty() || k.stack.tail().empty())
      throw InvariantViolation("ap with fewer than two stack values",
                               show(k));
    const SecdValuePtr& fun = k.stack.head();
    const SecdValuePtr& arg = k.stack.tail().head();
    const auto& l = fun->code->lam();
    SecdDumpFrame caller{k.stack.tail().tail(), k.env, k.control.tail()};
    return {{SecdConfig{{},
                        fun->env.push(SecdBinding{l.binder, arg}),
                        Control{}.push(ControlItem{l.body}),
                        k.dump.push(std::move(caller))},
             "2c1"}};
  }
  if (k.stack.empty())
    throw InvariantViolation("empty control with empty stack", show(k));
  if (!k.dump.empty()) {  // (1): return the value to the caller
    const SecdDumpFrame& frame = k.dump.head();
    return {{SecdConfig{frame.stack.push(k.stack.head()), frame.env,
                        frame.control, k.dump.tail()},
             "1"}};
  }
  if (!k.stack.tail().empty())
    throw InvariantViolation("terminal stack holds more than one value",
                             show(k));
  return std::nullopt;  // terminal: single value, everything else empty
}

SecdRun run_secd(const TermPtr& t, std::uint64_t fuel, bool record_trace) {
  SecdConfig k = secd_load(t);
  SecdRun run{RunStatus::Halted, k, {}, {}};
  run.trace.initial = k;
  for (;;) {
    if (run.stats.total == fuel) {
      run.status = secd_step(k) ? RunStatus::FuelExhausted : RunStatus::Halted;
      break;
    }
    auto next = secd_step(k);
    if (!next) break;
    k = next->first;
    run.stats.count(next->second, next->second == "2c1");
    if (record_trace) run.trace.steps.push_back({next->second, k});
  }
  run.stats.fuel_used = run.stats.total;
  run.final = k;
  return run;
}

TermPtr secd_readback(const SecdValuePtr& v) {
  TermPtr t = v->code;
  for (SecdEnv e = v->env; !e.empty(); e = e.tail())
    t = subst_naive(t, e.head().name, secd_readback(e.head().value));
  return t;
}

std::string show(const SecdConfig& k) {
  std::ostringstream out;
  out << "⟨S:" << k.stack.size() << " E:" << k.env.size() << " C:";
  k.control.for_each([&](const ControlItem& item) {
    if (std::holds_alternative<TermPtr>(item.item))
      out << print(std::get<TermPtr>(item.item));
    else
      out << "ap";
    out << "::";
  });
  out << "[] D:" << k.dump.size() << "⟩";
  return out.str();
}

}  // namespace amlab::machines
