#include "amlab/term.hpp"

#include <algorithm>
#include <map>

#include "amlab/errors.hpp"

namespace amlab {

OpenTermError::OpenTermError(std::vector<std::string> free_names)
    : std::runtime_error([&free_names] {
        std::string msg = "open term; free variables:";
        for (const auto& n : free_names) msg += " " + n;
        return msg;
      }()),
      free_names_(std::move(free_names)) {}

TermPtr var(std::string name) {
  return std::make_shared<const Term>(Term::Var{std::move(name)});
}
TermPtr app(TermPtr fn, TermPtr arg) {
  return std::make_shared<const Term>(Term::App{std::move(fn), std::move(arg)});
}
TermPtr lam(std::string binder, TermPtr body) {
  return std::make_shared<const Term>(
      Term::Lam{std::move(binder), std::move(body)});
}

bool term_eq(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->node().index() != b->node().index()) return false;
  if (a->is_var()) return a->var().name == b->var().name;
  if (a->is_app())
    return term_eq(a->app().fn, b->app().fn) &&
           term_eq(a->app().arg, b->app().arg);
  return a->lam().binder == b->lam().binder &&
         term_eq(a->lam().body, b->lam().body);
}

std::size_t term_size(const TermPtr& t) {
  if (t->is_var()) return 1;
  if (t->is_app()) return 1 + term_size(t->app().fn) + term_size(t->app().arg);
  return 1 + term_size(t->lam().body);
}

namespace {

void collect_free(const TermPtr& t, std::set<std::string>& bound,
                  std::set<std::string>& out) {
  if (t->is_var()) {
    if (bound.count(t->var().name) == 0) out.insert(t->var().name);
  } else if (t->is_app()) {
    collect_free(t->app().fn, bound, out);
    collect_free(t->app().arg, bound, out);
  } else {
    const bool fresh_binding = bound.insert(t->lam().binder).second;
    collect_free(t->lam().body, bound, out);
    if (fresh_binding) bound.erase(t->lam().binder);
  }
}

void collect_bound(const TermPtr& t, std::set<std::string>& out) {
  if (t->is_app()) {
    collect_bound(t->app().fn, out);
    collect_bound(t->app().arg, out);
  } else if (t->is_lam()) {
    out.insert(t->lam().binder);
    collect_bound(t->lam().body, out);
  }
}

void collect_idents(const TermPtr& t, std::set<std::string>& out) {
  if (t->is_var()) {
    out.insert(t->var().name);
  } else if (t->is_app()) {
    collect_idents(t->app().fn, out);
    collect_idents(t->app().arg, out);
  } else {
    out.insert(t->lam().binder);
    collect_idents(t->lam().body, out);
  }
}

}  // namespace

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> bound;
  std::set<std::string> out;
  collect_free(t, bound, out);
  return out;
}

std::set<std::string> bound_vars(const TermPtr& t) {
  std::set<std::string> out;
  collect_bound(t, out);
  return out;
}

bool is_closed(const TermPtr& t) { return free_vars(t).empty(); }

TermPtr subst_naive(const TermPtr& t, const std::string& x, const TermPtr& s) {
  if (t->is_var()) return t->var().name == x ? s : t;
  if (t->is_app())
    return app(subst_naive(t->app().fn, x, s), subst_naive(t->app().arg, x, s));
  if (t->lam().binder == x) return t;
  return lam(t->lam().binder, subst_naive(t->lam().body, x, s));
}

TermPtr subst_avoiding(const TermPtr& t, const std::string& x,
                       const TermPtr& s, FreshSupply& fresh) {
  if (t->is_var()) return t->var().name == x ? s : t;
  if (t->is_app())
    return app(subst_avoiding(t->app().fn, x, s, fresh),
               subst_avoiding(t->app().arg, x, s, fresh));
  const auto& l = t->lam();
  if (l.binder == x) return t;
  auto body_free = free_vars(l.body);
  if (body_free.count(x) == 0) return t;  // nothing to substitute below
  if (free_vars(s).count(l.binder) != 0) {
    // Descending would capture the binder; rename it first.
    std::string renamed = fresh.draw();
    TermPtr body = subst_naive(l.body, l.binder, var(renamed));
    return lam(renamed, subst_avoiding(body, x, s, fresh));
  }
  return lam(l.binder, subst_avoiding(l.body, x, s, fresh));
}

FreshSupply fresh_for(std::initializer_list<TermPtr> terms, std::string base) {
  FreshSupply supply(std::move(base));
  std::set<std::string> idents;
  for (const auto& t : terms)
    if (t) collect_idents(t, idents);
  supply.record_all(idents);
  return supply;
}

NamelessPtr nl_idx(std::uint64_t n) {
  return std::make_shared<const NamelessTerm>(NamelessTerm::Idx{n});
}
NamelessPtr nl_app(NamelessPtr fn, NamelessPtr arg) {
  return std::make_shared<const NamelessTerm>(
      NamelessTerm::App{std::move(fn), std::move(arg)});
}
NamelessPtr nl_lam(NamelessPtr body) {
  return std::make_shared<const NamelessTerm>(NamelessTerm::Lam{std::move(body)});
}

bool nameless_eq(const NamelessPtr& a, const NamelessPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->node().index() != b->node().index()) return false;
  if (a->is_idx()) return a->idx().n == b->idx().n;
  if (a->is_app())
    return nameless_eq(a->app().fn, b->app().fn) &&
           nameless_eq(a->app().arg, b->app().arg);
  return nameless_eq(a->lam().body, b->lam().body);
}

std::size_t nameless_size(const NamelessPtr& t) {
  if (t->is_idx()) return 1;
  if (t->is_app())
    return 1 + nameless_size(t->app().fn) + nameless_size(t->app().arg);
  return 1 + nameless_size(t->lam().body);
}

namespace {

// Index encoding against an explicit binder stack (innermost first).
NamelessPtr encode_indices(const TermPtr& t, std::vector<std::string>& binders) {
  if (t->is_var()) {
    const auto& name = t->var().name;
    for (std::size_t i = 0; i < binders.size(); ++i) {
      if (binders[binders.size() - 1 - i] == name) return nl_idx(i);
    }
    throw OpenTermError({name});
  }
  if (t->is_app())
    return nl_app(encode_indices(t->app().fn, binders),
                  encode_indices(t->app().arg, binders));
  binders.push_back(t->lam().binder);
  auto body = encode_indices(t->lam().body, binders);
  binders.pop_back();
  return nl_lam(std::move(body));
}

// Level encoding: a variable names its binder by the binder's distance
// from the root.
NamelessPtr encode_levels(const TermPtr& t, std::vector<std::string>& binders) {
  if (t->is_var()) {
    const auto& name = t->var().name;
    for (std::size_t i = 0; i < binders.size(); ++i) {
      std::size_t pos = binders.size() - 1 - i;  // innermost match wins
      if (binders[pos] == name) return nl_idx(pos);
    }
    throw OpenTermError({name});
  }
  if (t->is_app())
    return nl_app(encode_levels(t->app().fn, binders),
                  encode_levels(t->app().arg, binders));
  binders.push_back(t->lam().binder);
  auto body = encode_levels(t->lam().body, binders);
  binders.pop_back();
  return nl_lam(std::move(body));
}

void require_closed(const TermPtr& t) {
  auto fv = free_vars(t);
  if (!fv.empty())
    throw OpenTermError(std::vector<std::string>(fv.begin(), fv.end()));
}

}  // namespace

NamelessPtr to_indices(const TermPtr& t) {
  require_closed(t);
  std::vector<std::string> binders;
  return encode_indices(t, binders);
}

NamelessPtr to_levels(const TermPtr& t) {
  require_closed(t);
  std::vector<std::string> binders;
  return encode_levels(t, binders);
}

NamelessPtr to_indices_open(const TermPtr& t,
                            const std::vector<std::string>& free_order) {
  std::vector<std::string> binders(free_order.rbegin(), free_order.rend());
  return encode_indices(t, binders);
}

namespace {

TermPtr decode_indices(const NamelessPtr& t, std::uint64_t depth) {
  if (t->is_idx()) {
    if (t->idx().n >= depth)
      throw OpenTermError({"#" + std::to_string(t->idx().n)});
    return var("v" + std::to_string(depth - 1 - t->idx().n));
  }
  if (t->is_app())
    return app(decode_indices(t->app().fn, depth),
               decode_indices(t->app().arg, depth));
  return lam("v" + std::to_string(depth), decode_indices(t->lam().body, depth + 1));
}

}  // namespace

TermPtr from_indices(const NamelessPtr& t) { return decode_indices(t, 0); }

bool alpha_eq(const TermPtr& t1, const TermPtr& t2) {
  auto fv1 = free_vars(t1);
  auto fv2 = free_vars(t2);
  std::set<std::string> all(fv1.begin(), fv1.end());
  all.insert(fv2.begin(), fv2.end());
  std::vector<std::string> order(all.begin(), all.end());
  return nameless_eq(to_indices_open(t1, order), to_indices_open(t2, order));
}

}  // namespace amlab
