#include "amlab/machines/mam.hpp"

#include <map>
#include <sstream>

#include "amlab/errors.hpp"

namespace amlab::machines {

std::string label_name(MamLabel l) {
  switch (l) {
    case MamLabel::Abs: return "abs";
    case MamLabel::Neu: return "neu";
    case MamLabel::Red: return "red";
  }
  return "?";
}

bool operator==(const MamDumpFrame& a, const MamDumpFrame& b) {
  if (a.v.index() != b.v.index()) return false;
  if (a.v.index() == 0)
    return std::get<MamDumpFrame::LamF>(a.v).binder ==
           std::get<MamDumpFrame::LamF>(b.v).binder;
  const auto& xa = std::get<MamDumpFrame::AppF>(a.v);
  const auto& xb = std::get<MamDumpFrame::AppF>(b.v);
  auto stack_eq = [](const List<TermPtr>& x, const List<TermPtr>& y) {
    auto xs = x;
    auto ys = y;
    while (!xs.empty() && !ys.empty()) {
      if (!term_eq(xs.head(), ys.head())) return false;
      xs = xs.tail();
      ys = ys.tail();
    }
    return xs.empty() && ys.empty();
  };
  return term_eq(xa.fn, xb.fn) && stack_eq(xa.saved_stack, xb.saved_stack);
}

namespace {

const MamStoreEntry* store_lookup(const MamStore& store,
                                  const std::string& name) {
  const MamStoreEntry* found = nullptr;
  for (MamStore s = store; !s.empty(); s = s.tail()) {
    if (s.head().name == name) return &s.head();
  }
  return found;
}

}  // namespace

MamLabel mam_label(const TermPtr& t, const MamStore& store) {
  if (t->is_var()) {
    const MamStoreEntry* e = store_lookup(store, t->var().name);
    return e ? e->label : MamLabel::Neu;
  }
  if (t->is_lam()) {
    return mam_label(t->lam().body, store) == MamLabel::Red ? MamLabel::Red
                                                            : MamLabel::Abs;
  }
  MamLabel fn = mam_label(t->app().fn, store);
  MamLabel arg = mam_label(t->app().arg, store);
  if (fn == MamLabel::Abs || fn == MamLabel::Red || arg == MamLabel::Red)
    return MamLabel::Red;
  return MamLabel::Neu;
}

namespace {

TermPtr rename_binders_rec(const TermPtr& t,
                           std::map<std::string, std::string>& renaming,
                           FreshSupply& fresh) {
  if (t->is_var()) {
    auto it = renaming.find(t->var().name);
    return it == renaming.end() ? t : var(it->second);
  }
  if (t->is_app())
    return app(rename_binders_rec(t->app().fn, renaming, fresh),
               rename_binders_rec(t->app().arg, renaming, fresh));
  const auto& l = t->lam();
  std::string renamed = fresh.draw();
  auto it = renaming.find(l.binder);
  std::optional<std::string> shadowed;
  if (it != renaming.end()) shadowed = it->second;
  renaming[l.binder] = renamed;
  TermPtr body = rename_binders_rec(l.body, renaming, fresh);
  if (shadowed)
    renaming[l.binder] = *shadowed;
  else
    renaming.erase(l.binder);
  return lam(renamed, std::move(body));
}

}  // namespace

TermPtr rename_binders(const TermPtr& t, FreshSupply& fresh) {
  std::map<std::string, std::string> renaming;
  return rename_binders_rec(t, renaming, fresh);
}

MamConfig mam_load(const TermPtr& t, FreshSupply& fresh) {
  return MamConfig{MamMode::Down, rename_binders(t, fresh), {}, {}, {}};
}

std::optional<std::pair<MamConfig, std::string>> mam_step(const MamConfig& k,
                                                          FreshSupply& fresh) {
  if (k.mode == MamMode::Down) {
    const TermPtr& t = k.focus;
    if (t->is_app()) {  // (nabla-c1)
      return {{MamConfig{MamMode::Down, t->app().fn,
                         k.stack.push(t->app().arg), k.dump, k.store},
               "∇c1"}};
    }
    if (t->is_lam()) {
      if (!k.stack.empty()) {
        const TermPtr& arg = k.stack.head();
        if (arg->is_var()) {
          // (m1): eager renaming keeps variable chains out of the store.
          return {{MamConfig{MamMode::Down,
                             subst_naive(t->lam().body, t->lam().binder, arg),
                             k.stack.tail(), k.dump, k.store},
                   "m1"}};
        }
        // (m2): delay the argument in the store under its usefulness label.
        MamLabel l = mam_label(arg, k.store);
        return {{MamConfig{
                     MamMode::Down, t->lam().body, k.stack.tail(), k.dump,
                     k.store.push(MamStoreEntry{t->lam().binder, arg, l})},
                 "m2"}};
      }
      // (nabla-c2): go under the binder.
      return {{MamConfig{MamMode::Down, t->lam().body, k.stack,
                         k.dump.push(MamDumpFrame{
                             MamDumpFrame::LamF{t->lam().binder}}),
                         k.store},
               "∇c2"}};
    }
    // Variable focus.
    const MamStoreEntry* e = store_lookup(k.store, t->var().name);
    if (e && e->label == MamLabel::Red) {  // (e_red)
      return {{MamConfig{MamMode::Down, rename_binders(e->term, fresh),
                         k.stack, k.dump, k.store},
               "e_red"}};
    }
    if (e && e->label == MamLabel::Abs && !k.stack.empty()) {  // (e_abs)
      return {{MamConfig{MamMode::Down, rename_binders(e->term, fresh),
                         k.stack, k.dump, k.store},
               "e_abs"}};
    }
    // (nabla-c3): the substitution would be useless; turn around.
    return {{MamConfig{MamMode::Up, t, k.stack, k.dump, k.store}, "∇c3"}};
  }
  // Up mode.
  if (!k.stack.empty()) {  // (delta-c6): evaluate the parked argument
    const TermPtr& arg = k.stack.head();
    return {{MamConfig{MamMode::Down, arg, {},
                       k.dump.push(MamDumpFrame{
                           MamDumpFrame::AppF{k.focus, k.stack.tail()}}),
                       k.store},
             "Δc6"}};
  }
  if (k.dump.empty()) return std::nullopt;  // terminal: unload (focus, store)
  const MamDumpFrame& frame = k.dump.head();
  if (std::holds_alternative<MamDumpFrame::LamF>(frame.v)) {  // (delta-c4)
    return {{MamConfig{MamMode::Up,
                       lam(std::get<MamDumpFrame::LamF>(frame.v).binder,
                           k.focus),
                       {}, k.dump.tail(), k.store},
             "Δc4"}};
  }
  // (delta-c5): rebuild the application, restore the parked stack.
  const auto& f = std::get<MamDumpFrame::AppF>(frame.v);
  return {{MamConfig{MamMode::Up, app(f.fn, k.focus), f.saved_stack,
                     k.dump.tail(), k.store},
           "Δc5"}};
}

namespace {

void collect_binders(const TermPtr& t, std::vector<std::string>& out) {
  if (t->is_app()) {
    collect_binders(t->app().fn, out);
    collect_binders(t->app().arg, out);
  } else if (t->is_lam()) {
    out.push_back(t->lam().binder);
    collect_binders(t->lam().body, out);
  }
}

// All binder names plus store names must be pairwise distinct.
void check_distinct_names(const MamConfig& k) {
  std::vector<std::string> names;
  collect_binders(k.focus, names);
  k.stack.for_each([&](const TermPtr& t) { collect_binders(t, names); });
  k.dump.for_each([&](const MamDumpFrame& f) {
    if (std::holds_alternative<MamDumpFrame::LamF>(f.v)) {
      names.push_back(std::get<MamDumpFrame::LamF>(f.v).binder);
    } else {
      const auto& af = std::get<MamDumpFrame::AppF>(f.v);
      collect_binders(af.fn, names);
      af.saved_stack.for_each(
          [&](const TermPtr& t) { collect_binders(t, names); });
    }
  });
  k.store.for_each([&](const MamStoreEntry& e) {
    names.push_back(e.name);
    collect_binders(e.term, names);
  });
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second)
      throw InvariantViolation("duplicate binder or store name: " + n,
                               show(k));
  }
}

void seed_supply(const TermPtr& t, FreshSupply& fresh) {
  if (t->is_var()) {
    fresh.record_in_use(t->var().name);
  } else if (t->is_app()) {
    seed_supply(t->app().fn, fresh);
    seed_supply(t->app().arg, fresh);
  } else {
    fresh.record_in_use(t->lam().binder);
    seed_supply(t->lam().body, fresh);
  }
}

}  // namespace

MamRun run_mam(const TermPtr& t, std::uint64_t fuel, bool record_trace,
               bool check_invariants) {
  FreshSupply fresh("m");
  seed_supply(t, fresh);
  MamConfig k = mam_load(t, fresh);
  MamRun run{RunStatus::Halted, k, {}, {}};
  run.trace.initial = k;
  for (;;) {
    if (run.stats.total == fuel) {
      run.status =
          mam_step(k, fresh) ? RunStatus::FuelExhausted : RunStatus::Halted;
      break;
    }
    auto next = mam_step(k, fresh);
    if (!next) break;
    k = next->first;
    if (check_invariants) check_distinct_names(k);
    run.stats.count(next->second,
                    next->second == "m1" || next->second == "m2");
    if (record_trace) run.trace.steps.push_back({next->second, k});
  }
  run.stats.fuel_used = run.stats.total;
  run.final = k;
  return run;
}

TermPtr mam_unfold(const TermPtr& t, const MamStore& store) {
  TermPtr acc = t;
  for (MamStore s = store; !s.empty(); s = s.tail())
    acc = subst_naive(acc, s.head().name, s.head().term);
  return acc;
}

std::string show(const MamConfig& k) {
  std::ostringstream out;
  out << "⟨" << print(k.focus) << " | ";
  k.stack.for_each(
      [&](const TermPtr& t) { out << "□(" << print(t) << ")::"; });
  out << "[] | ";
  k.dump.for_each([&](const MamDumpFrame& f) {
    if (std::holds_alternative<MamDumpFrame::LamF>(f.v))
      out << "\\" << std::get<MamDumpFrame::LamF>(f.v).binder << ".□";
    else
      out << "(" << print(std::get<MamDumpFrame::AppF>(f.v).fn)
          << " □)S";
    out << "::";
  });
  out << "[] | ";
  k.store.for_each([&](const MamStoreEntry& e) {
    out << "(" << e.name << ", (" << print(e.term) << ", "
        << label_name(e.label) << "))::";
  });
  out << "[]⟩" << (k.mode == MamMode::Down ? "∇" : "Δ");
  return out.str();
}

}  // namespace amlab::machines
