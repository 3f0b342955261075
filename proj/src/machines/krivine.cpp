#include "amlab/machines/krivine.hpp"

#include <sstream>

#include "amlab/errors.hpp"

namespace amlab::machines {

KrivineConfig krivine_load(const NamelessPtr& t) {
  return KrivineConfig{KrivineClosure{t, {}}, {}};
}

std::optional<std::pair<KrivineConfig, std::string>> krivine_step(
    const KrivineConfig& k) {
  const auto& code = k.focus.code;
  const auto& env = k.focus.env;
  if (code->is_app()) {  // (1)
    KrivineClosure arg{code->app().arg, env};
    return {{KrivineConfig{KrivineClosure{code->app().fn, env},
                           k.stack.push(std::move(arg))},
             "1"}};
  }
  if (code->is_lam()) {
    if (k.stack.empty()) return std::nullopt;  // terminal
    // (2): the beta rule; the argument closure moves into the environment.
    return {{KrivineConfig{
                 KrivineClosure{code->lam().body, env.push(k.stack.head())},
                 k.stack.tail()},
             "2"}};
  }
  // Index lookup, rules (3) and (4).
  if (env.empty())
    throw UnboundVariableError("de Bruijn index " +
                               std::to_string(code->idx().n) +
                               " escapes the environment (open term)");
  if (code->idx().n == 0)
    return {{KrivineConfig{env.head(), k.stack}, "3"}};
  return {{KrivineConfig{KrivineClosure{nl_idx(code->idx().n - 1), env.tail()},
                         k.stack},
           "4"}};
}

KrivineRun run_krivine(const NamelessPtr& t, std::uint64_t fuel,
                       bool record_trace) {
  KrivineConfig k = krivine_load(t);
  KrivineRun run{RunStatus::Halted, k, {}, {}};
  run.trace.initial = k;
  for (;;) {
    if (run.stats.total == fuel) {
      run.status =
          krivine_step(k) ? RunStatus::FuelExhausted : RunStatus::Halted;
      break;
    }
    auto next = krivine_step(k);
    if (!next) break;
    k = next->first;
    run.stats.count(next->second, next->second == "2");
    if (record_trace) run.trace.steps.push_back({next->second, k});
  }
  run.stats.fuel_used = run.stats.total;
  run.final = k;
  return run;
}

NamelessPtr krivine_readback(const KrivineClosure& c) {
  // (t, [c1..cn]) denotes (\^n t) applied to cn .. c1.
  NamelessPtr acc = c.code;
  std::vector<NamelessPtr> args;
  c.env.for_each(
      [&](const KrivineClosure& e) { args.push_back(krivine_readback(e)); });
  for (std::size_t i = 0; i < args.size(); ++i) acc = nl_lam(acc);
  for (auto it = args.rbegin(); it != args.rend(); ++it)
    acc = nl_app(acc, *it);
  return acc;
}

namespace {

void show_closure(const KrivineClosure& c, std::ostringstream& out) {
  out << "(" << print(c.code) << ", [";
  bool first = true;
  c.env.for_each([&](const KrivineClosure& e) {
    if (!first) out << ", ";
    first = false;
    show_closure(e, out);
  });
  out << "])";
}

}  // namespace

std::string show(const KrivineConfig& k) {
  std::ostringstream out;
  out << "⟨";
  show_closure(k.focus, out);
  out << ", ";
  k.stack.for_each([&](const KrivineClosure& c) {
    out << "□";
    show_closure(c, out);
    out << "::";
  });
  out << "[]⟩";
  return out.str();
}

}  // namespace amlab::machines
