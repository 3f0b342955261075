#include "amlab/machines/cek.hpp"

#include <sstream>

#include "amlab/errors.hpp"

namespace amlab::machines {

bool operator==(const CekBinding& a, const CekBinding& b) {
  return a.name == b.name && cek_value_eq(a.value, b.value);
}

bool cek_value_eq(const CekValuePtr& a, const CekValuePtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  return term_eq(a->code, b->code) && a->env == b->env;
}

bool operator==(const CekFrame& a, const CekFrame& b) {
  if (a.slot.index() != b.slot.index()) return false;
  if (a.slot.index() == 0) {
    const auto& pa = std::get<CekFrame::ArgPending>(a.slot);
    const auto& pb = std::get<CekFrame::ArgPending>(b.slot);
    return term_eq(pa.term, pb.term) && pa.env == pb.env;
  }
  return cek_value_eq(std::get<CekFrame::FunDone>(a.slot).value,
                      std::get<CekFrame::FunDone>(b.slot).value);
}

namespace {

CekValuePtr env_lookup(const CekEnv& env, const std::string& name) {
  CekValuePtr found;
  for (CekEnv e = env; !e.empty(); e = e.tail()) {
    if (e.head().name == name) return e.head().value;
  }
  throw UnboundVariableError(name);
}

}  // namespace

CekConfig cek_load(const TermPtr& t) {
  return CekConfig{CekMode::Down, t, {}, nullptr, {}};
}

std::optional<std::pair<CekConfig, std::string>> cek_step(const CekConfig& k) {
  if (k.mode == CekMode::Down) {
    if (k.code->is_var()) {  // (1)
      return {{CekConfig{CekMode::Up, nullptr, {},
                         env_lookup(k.env, k.code->var().name), k.stack},
               "1"}};
    }
    if (k.code->is_lam()) {  // (2)
      auto v = std::make_shared<const CekValue>(CekValue{k.code, k.env});
      return {{CekConfig{CekMode::Up, nullptr, {}, std::move(v), k.stack},
               "2"}};
    }
    // (3): focus the function, park the argument.
    const auto& a = k.code->app();
    return {{CekConfig{CekMode::Down, a.fn, k.env, nullptr,
                       k.stack.push(
                           CekFrame{CekFrame::ArgPending{a.arg, k.env}})},
             "3"}};
  }
  if (k.stack.empty()) return std::nullopt;  // terminal value
  const CekFrame& top = k.stack.head();
  if (std::holds_alternative<CekFrame::ArgPending>(top.slot)) {  // (4)
    const auto& pending = std::get<CekFrame::ArgPending>(top.slot);
    return {{CekConfig{CekMode::Down, pending.term, pending.env, nullptr,
                       k.stack.tail().push(CekFrame{CekFrame::FunDone{k.value}})},
             "4"}};
  }
  // (5): the beta_lambda rule.
  const auto& fun = std::get<CekFrame::FunDone>(top.slot).value;
  const auto& l = fun->code->lam();
  return {{CekConfig{CekMode::Down, l.body,
                     fun->env.push(CekBinding{l.binder, k.value}), nullptr,
                     k.stack.tail()},
           "5"}};
}

CekRun run_cek(const TermPtr& t, std::uint64_t fuel, bool record_trace) {
  CekConfig k = cek_load(t);
  CekRun run{RunStatus::Halted, k, {}, {}};
  run.trace.initial = k;
  for (;;) {
    if (run.stats.total == fuel) {
      run.status = cek_step(k) ? RunStatus::FuelExhausted : RunStatus::Halted;
      break;
    }
    auto next = cek_step(k);
    if (!next) break;
    k = next->first;
    run.stats.count(next->second, next->second == "5");
    if (record_trace) run.trace.steps.push_back({next->second, k});
  }
  run.stats.fuel_used = run.stats.total;
  run.final = k;
  return run;
}

TermPtr cek_readback(const CekValuePtr& v) {
  TermPtr t = v->code;
  for (CekEnv e = v->env; !e.empty(); e = e.tail())
    t = subst_naive(t, e.head().name, cek_readback(e.head().value));
  return t;
}

namespace {

void show_value(const CekValuePtr& v, std::ostringstream& out) {
  out << "(" << print(v->code) << ", [";
  bool first = true;
  v->env.for_each([&](const CekBinding& b) {
    if (!first) out << ", ";
    first = false;
    out << "(" << b.name << ", ";
    show_value(b.value, out);
    out << ")";
  });
  out << "])";
}

}  // namespace

std::string show(const CekConfig& k) {
  std::ostringstream out;
  out << "⟨";
  if (k.mode == CekMode::Down) {
    out << "(" << print(k.code) << ", env[" << k.env.size() << "])";
  } else {
    show_value(k.value, out);
  }
  out << ", ";
  k.stack.for_each([&](const CekFrame& f) {
    if (std::holds_alternative<CekFrame::ArgPending>(f.slot)) {
      out << "□(" << print(std::get<CekFrame::ArgPending>(f.slot).term)
          << ")";
    } else {
      out << "(";
      show_value(std::get<CekFrame::FunDone>(f.slot).value, out);
      out << ")□";
    }
    out << "::";
  });
  out << "[]⟩" << (k.mode == CekMode::Down ? "∇" : "Δ");
  return out.str();
}

}  // namespace amlab::machines
