#include "amlab/machines/scam.hpp"

#include <map>
#include <sstream>
#include <vector>

#include "amlab/errors.hpp"

namespace amlab::machines {

const std::string kStar = "*";

bool bite_eq(const Bite& a, const Bite& b) {
  if (a.v.index() != b.v.index()) return false;
  switch (a.v.index()) {
    case 0:
      return std::get<Bite::VarB>(a.v).name == std::get<Bite::VarB>(b.v).name;
    case 1: {
      const auto& xa = std::get<Bite::AppB>(a.v);
      const auto& xb = std::get<Bite::AppB>(b.v);
      return xa.fn == xb.fn && xa.arg == xb.arg;
    }
    default: {
      const auto& xa = std::get<Bite::AbsB>(a.v);
      const auto& xb = std::get<Bite::AbsB>(b.v);
      return xa.binder == xb.binder && crumble_eq(xa.body, xb.body);
    }
  }
}

bool crumble_eq(const Crumble& a, const Crumble& b) {
  Crumble xs = a;
  Crumble ys = b;
  while (!xs.empty() && !ys.empty()) {
    if (xs.head().name != ys.head().name ||
        !bite_eq(xs.head().bite, ys.head().bite))
      return false;
    xs = xs.tail();
    ys = ys.tail();
  }
  return xs.empty() && ys.empty();
}

namespace {

std::set<std::string> bite_free(const Bite& b) {
  if (std::holds_alternative<Bite::VarB>(b.v))
    return {std::get<Bite::VarB>(b.v).name};
  if (std::holds_alternative<Bite::AppB>(b.v)) {
    const auto& x = std::get<Bite::AppB>(b.v);
    return {x.fn, x.arg};
  }
  const auto& x = std::get<Bite::AbsB>(b.v);
  auto fv = crumble_free(x.body);
  fv.erase(x.binder);
  return fv;
}

}  // namespace

std::set<std::string> crumble_free(const Crumble& c) {
  if (c.empty()) return {kStar};
  auto fv = crumble_free(c.tail());
  fv.erase(c.head().name);
  auto head_fv = bite_free(c.head().bite);
  fv.insert(head_fv.begin(), head_fv.end());
  return fv;
}

namespace {

Crumble from_vector(const std::vector<CrumbleBinding>& innermost_first) {
  Crumble c;
  for (const auto& b : innermost_first) c = c.push(b);
  return c;
}

std::vector<CrumbleBinding> to_vector(const Crumble& c) {
  std::vector<CrumbleBinding> out;  // head (outermost) first
  c.for_each([&](const CrumbleBinding& b) { out.push_back(b); });
  return out;
}

struct Flattened {
  std::string name;
  std::vector<CrumbleBinding> bindings;  // innermost first
};

Flattened flatten(const TermPtr& t, FreshSupply& fresh);

Crumble crumble_rec(const TermPtr& t, FreshSupply& fresh) {
  if (t->is_var())
    return from_vector({CrumbleBinding{kStar, Bite{Bite::VarB{t->var().name}}}});
  if (t->is_lam())
    return from_vector({CrumbleBinding{
        kStar,
        Bite{Bite::AbsB{t->lam().binder, crumble_rec(t->lam().body, fresh)}}}});
  auto arg = flatten(t->app().arg, fresh);
  auto fn = flatten(t->app().fn, fresh);
  std::vector<CrumbleBinding> bindings;
  bindings.push_back(
      CrumbleBinding{kStar, Bite{Bite::AppB{fn.name, arg.name}}});
  bindings.insert(bindings.end(), fn.bindings.begin(), fn.bindings.end());
  bindings.insert(bindings.end(), arg.bindings.begin(), arg.bindings.end());
  return from_vector(bindings);
}

Flattened flatten(const TermPtr& t, FreshSupply& fresh) {
  if (t->is_var()) return {t->var().name, {}};
  if (t->is_lam()) {
    std::string v = fresh.draw();
    return {v,
            {CrumbleBinding{v, Bite{Bite::AbsB{
                                   t->lam().binder,
                                   crumble_rec(t->lam().body, fresh)}}}}};
  }
  auto arg = flatten(t->app().arg, fresh);
  auto fn = flatten(t->app().fn, fresh);
  std::string v = fresh.draw();
  std::vector<CrumbleBinding> bindings;
  bindings.push_back(CrumbleBinding{v, Bite{Bite::AppB{fn.name, arg.name}}});
  bindings.insert(bindings.end(), fn.bindings.begin(), fn.bindings.end());
  bindings.insert(bindings.end(), arg.bindings.begin(), arg.bindings.end());
  return {v, std::move(bindings)};
}

}  // namespace

FreshSupply fresh_for_crumbling(const TermPtr& t) {
  FreshSupply fresh = fresh_for({t}, "v");
  fresh.record_in_use(kStar);
  return fresh;
}

Crumble crumble(const TermPtr& t, FreshSupply& fresh) {
  return crumble_rec(t, fresh);
}

TermPtr readback(const Crumble& c) {
  auto bindings = to_vector(c);  // outermost first
  TermPtr acc = var(kStar);
  // The innermost binding resolves the result variable; work outward.
  for (auto it = bindings.rbegin(); it != bindings.rend(); ++it) {
    const Bite& b = it->bite;
    TermPtr bite_term;
    if (std::holds_alternative<Bite::VarB>(b.v)) {
      bite_term = var(std::get<Bite::VarB>(b.v).name);
    } else if (std::holds_alternative<Bite::AppB>(b.v)) {
      const auto& x = std::get<Bite::AppB>(b.v);
      bite_term = app(var(x.fn), var(x.arg));
    } else {
      const auto& x = std::get<Bite::AbsB>(b.v);
      bite_term = lam(x.binder, readback(x.body));
    }
    acc = subst_naive(acc, it->name, bite_term);
  }
  return acc;
}

namespace {

Bite subst_bite(const Bite& b, const std::string& from, const std::string& to);

Crumble subst_crumble(const Crumble& c, const std::string& from,
                      const std::string& to) {
  auto bindings = to_vector(c);
  bool shadowed = false;
  for (auto& binding : bindings) {
    if (shadowed) break;
    binding.bite = subst_bite(binding.bite, from, to);
    if (binding.name == from) shadowed = true;
  }
  std::vector<CrumbleBinding> innermost_first(bindings.rbegin(),
                                              bindings.rend());
  return from_vector(innermost_first);
}

Bite subst_bite(const Bite& b, const std::string& from,
                const std::string& to) {
  if (std::holds_alternative<Bite::VarB>(b.v)) {
    const auto& x = std::get<Bite::VarB>(b.v);
    return Bite{Bite::VarB{x.name == from ? to : x.name}};
  }
  if (std::holds_alternative<Bite::AppB>(b.v)) {
    const auto& x = std::get<Bite::AppB>(b.v);
    return Bite{Bite::AppB{x.fn == from ? to : x.fn,
                           x.arg == from ? to : x.arg}};
  }
  const auto& x = std::get<Bite::AbsB>(b.v);
  if (x.binder == from) return b;
  return Bite{Bite::AbsB{x.binder, subst_crumble(x.body, from, to)}};
}

Bite rename_bite(const Bite& b, std::map<std::string, std::string> renaming,
                 FreshSupply& fresh);

// Alpha-copy with globally fresh binding names; the result variable
// keeps its name in every scope.
Crumble rename_crumble(const Crumble& c,
                       std::map<std::string, std::string> renaming,
                       FreshSupply& fresh) {
  auto bindings = to_vector(c);  // outermost first
  for (auto& binding : bindings) {
    binding.bite = rename_bite(binding.bite, renaming, fresh);
    if (binding.name != kStar) {
      std::string renamed = fresh.draw();
      renaming[binding.name] = renamed;
      binding.name = renamed;
    }
  }
  std::vector<CrumbleBinding> innermost_first(bindings.rbegin(),
                                              bindings.rend());
  return from_vector(innermost_first);
}

Bite rename_bite(const Bite& b, std::map<std::string, std::string> renaming,
                 FreshSupply& fresh) {
  auto rename = [&renaming](const std::string& n) {
    auto it = renaming.find(n);
    return it == renaming.end() ? n : it->second;
  };
  if (std::holds_alternative<Bite::VarB>(b.v))
    return Bite{Bite::VarB{rename(std::get<Bite::VarB>(b.v).name)}};
  if (std::holds_alternative<Bite::AppB>(b.v)) {
    const auto& x = std::get<Bite::AppB>(b.v);
    return Bite{Bite::AppB{rename(x.fn), rename(x.arg)}};
  }
  const auto& x = std::get<Bite::AbsB>(b.v);
  std::string renamed = fresh.draw();
  renaming[x.binder] = renamed;
  return Bite{Bite::AbsB{renamed, rename_crumble(x.body, renaming, fresh)}};
}

// Stack lookup for the side conditions: what, if anything, is y bound to?
struct StackBinding {
  enum class Kind { Unbound, LambdaParam, Bound };
  Kind kind = Kind::Unbound;
  const Bite* bite = nullptr;
};

StackBinding stack_lookup(const List<ScamFrame>& stack,
                          const std::string& name) {
  StackBinding out;
  for (List<ScamFrame> s = stack; !s.empty(); s = s.tail()) {
    const ScamFrame& f = s.head();
    if (std::holds_alternative<ScamFrame::EnvF>(f.v)) {
      const auto& env = std::get<ScamFrame::EnvF>(f.v);
      if (env.binding.name == name) {
        out.kind = StackBinding::Kind::Bound;
        out.bite = &env.binding.bite;
        return out;
      }
    } else {
      const auto& abs = std::get<ScamFrame::AbsF>(f.v);
      if (abs.param == name) {
        out.kind = StackBinding::Kind::LambdaParam;
        return out;
      }
    }
  }
  return out;
}

bool bound_to_abstraction(const StackBinding& b) {
  return b.kind == StackBinding::Kind::Bound &&
         std::holds_alternative<Bite::AbsB>(b.bite->v);
}

}  // namespace

ScamConfig scam_load(const Crumble& c) {
  return ScamConfig{ScamMode::Down, c, {}};
}

std::optional<std::pair<ScamConfig, std::string>> scam_step(
    const ScamConfig& k, FreshSupply& fresh) {
  if (k.mode == ScamMode::Down) {
    if (k.focus.empty())  // (sea2): reached the result variable
      return {{ScamConfig{ScamMode::Up, k.focus, k.stack}, "sea2"}};
    const CrumbleBinding& binding = k.focus.head();
    Crumble rest = k.focus.tail();
    if (std::holds_alternative<Bite::AppB>(binding.bite.v)) {
      const auto& call = std::get<Bite::AppB>(binding.bite.v);
      StackBinding fn = stack_lookup(k.stack, call.fn);
      if (bound_to_abstraction(fn)) {
        // Copy the abstraction with fresh names; its body ends with the
        // binding of the result variable.
        const auto& abs = std::get<Bite::AbsB>(fn.bite->v);
        std::string param = fresh.draw();
        Crumble body = rename_crumble(
            abs.body, {{abs.binder, param}}, fresh);
        auto body_vec = to_vector(body);  // outermost first
        if (body_vec.empty() || body_vec.back().name != kStar)
          throw InvariantViolation(
              "abstraction body does not end with the result binding",
              show(k));
        Bite result_bite = body_vec.back().bite;
        body_vec.pop_back();  // the remaining bindings form the prefix E
        StackBinding arg = stack_lookup(k.stack, call.arg);
        const bool value_arg = bound_to_abstraction(arg);
        // Assemble E ++ [x <- b] ++ rest.
        std::vector<CrumbleBinding> assembled = std::move(body_vec);
        assembled.push_back(CrumbleBinding{binding.name, result_bite});
        if (value_arg) {
          for (auto& ab : assembled) {
            ab.bite = subst_bite(ab.bite, param, call.arg);
            if (ab.name == param)
              throw InvariantViolation("parameter shadowed in copied body",
                                       show(k));
          }
        }
        Crumble focus = rest;
        for (auto it = assembled.rbegin(); it != assembled.rend(); ++it)
          focus = focus.push(*it);
        if (value_arg)  // (beta_v)
          return {{ScamConfig{ScamMode::Down, focus, k.stack}, "β_v"}};
        // (beta_i): keep the parameter as an inert stack binding.
        auto stack = k.stack.push(ScamFrame{ScamFrame::EnvF{
            CrumbleBinding{param, Bite{Bite::VarB{call.arg}}}}});
        return {{ScamConfig{ScamMode::Down, focus, stack}, "β_i"}};
      }
      // Function not bound to an abstraction: fall through to (sea1).
    } else if (std::holds_alternative<Bite::VarB>(binding.bite.v) &&
               binding.name != kStar) {
      // (ren): collapse the variable chain eagerly.
      const auto& alias = std::get<Bite::VarB>(binding.bite.v);
      return {{ScamConfig{ScamMode::Down,
                          subst_crumble(rest, binding.name, alias.name),
                          k.stack},
               "ren"}};
    }
    // (sea1)
    return {{ScamConfig{ScamMode::Down, rest,
                        k.stack.push(ScamFrame{ScamFrame::EnvF{binding}})},
             "sea1"}};
  }
  // Up mode: reattach, drop or enter the processed bindings.
  if (k.stack.empty()) return std::nullopt;  // terminal
  const ScamFrame& top = k.stack.head();
  if (std::holds_alternative<ScamFrame::EnvF>(top.v)) {
    const CrumbleBinding& binding = std::get<ScamFrame::EnvF>(top.v).binding;
    if (!std::holds_alternative<Bite::AbsB>(binding.bite.v)) {  // (sea3)
      return {{ScamConfig{ScamMode::Up, k.focus.push(binding),
                          k.stack.tail()},
               "sea3"}};
    }
    if (crumble_free(k.focus).count(binding.name) == 0) {  // (gc)
      return {{ScamConfig{ScamMode::Up, k.focus, k.stack.tail()}, "gc"}};
    }
    // (sea5): normalize the abstraction body.
    const auto& abs = std::get<Bite::AbsB>(binding.bite.v);
    auto stack = k.stack.tail().push(ScamFrame{
        ScamFrame::AbsF{k.focus, binding.name, abs.binder}});
    return {{ScamConfig{ScamMode::Down, abs.body, stack}, "sea5"}};
  }
  // (sea4): wrap the normalized body back into its abstraction binding.
  const auto& abs_frame = std::get<ScamFrame::AbsF>(top.v);
  CrumbleBinding rebuilt{abs_frame.let_name,
                         Bite{Bite::AbsB{abs_frame.param, k.focus}}};
  return {{ScamConfig{ScamMode::Up, abs_frame.outer.push(rebuilt),
                      k.stack.tail()},
           "sea4"}};
}

ScamRun run_scam(const TermPtr& t, std::uint64_t fuel, bool record_trace) {
  FreshSupply fresh = fresh_for_crumbling(t);
  ScamConfig k = scam_load(crumble(t, fresh));
  ScamRun run{RunStatus::Halted, k, {}, {}};
  run.trace.initial = k;
  for (;;) {
    if (run.stats.total == fuel) {
      run.status =
          scam_step(k, fresh) ? RunStatus::FuelExhausted : RunStatus::Halted;
      break;
    }
    auto next = scam_step(k, fresh);
    if (!next) break;
    k = next->first;
    run.stats.count(next->second,
                    next->second == "β_v" || next->second == "β_i");
    if (record_trace) run.trace.steps.push_back({next->second, k});
  }
  run.stats.fuel_used = run.stats.total;
  run.final = k;
  return run;
}

std::string show(const Crumble& c) {
  auto bindings = to_vector(c);
  std::ostringstream out;
  out << "⋆";
  for (auto it = bindings.rbegin(); it != bindings.rend(); ++it) {
    out << "[" << it->name << "←";
    const Bite& b = it->bite;
    if (std::holds_alternative<Bite::VarB>(b.v)) {
      out << std::get<Bite::VarB>(b.v).name;
    } else if (std::holds_alternative<Bite::AppB>(b.v)) {
      const auto& x = std::get<Bite::AppB>(b.v);
      out << x.fn << " " << x.arg;
    } else {
      const auto& x = std::get<Bite::AbsB>(b.v);
      out << "\\" << x.binder << ". " << show(x.body);
    }
    out << "]";
  }
  return out.str();
}

std::string show(const ScamConfig& k) {
  std::ostringstream out;
  out << "⟨" << show(k.focus) << ", ";
  k.stack.for_each([&](const ScamFrame& f) {
    if (std::holds_alternative<ScamFrame::EnvF>(f.v)) {
      const auto& b = std::get<ScamFrame::EnvF>(f.v).binding;
      out << "□[" << b.name << "←...]";
    } else {
      const auto& a = std::get<ScamFrame::AbsF>(f.v);
      out << "t[" << a.let_name << "←\\" << a.param << ".□]";
    }
    out << "::";
  });
  out << "[]⟩" << (k.mode == ScamMode::Down ? "∇" : "Δ");
  return out.str();
}

}  // namespace amlab::machines
