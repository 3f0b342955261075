#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "amlab/fresh.hpp"

namespace amlab {

class Term;
using TermPtr = std::shared_ptr<const Term>;

// Named lambda terms: variables, applications, abstractions.
// Structural equality is exact; it does not identify alpha-variants.
class Term {
 public:
  struct Var {
    std::string name;
  };
  struct App {
    TermPtr fn;
    TermPtr arg;
  };
  struct Lam {
    std::string binder;
    TermPtr body;
  };
  using Node = std::variant<Var, App, Lam>;

  explicit Term(Node node) : node_(std::move(node)) {}
  [[nodiscard]] const Node& node() const { return node_; }

  [[nodiscard]] bool is_var() const { return node_.index() == 0; }
  [[nodiscard]] bool is_app() const { return node_.index() == 1; }
  [[nodiscard]] bool is_lam() const { return node_.index() == 2; }
  [[nodiscard]] const Var& var() const { return std::get<Var>(node_); }
  [[nodiscard]] const App& app() const { return std::get<App>(node_); }
  [[nodiscard]] const Lam& lam() const { return std::get<Lam>(node_); }

 private:
  Node node_;
};

TermPtr var(std::string name);
TermPtr app(TermPtr fn, TermPtr arg);
TermPtr lam(std::string binder, TermPtr body);

bool term_eq(const TermPtr& a, const TermPtr& b);
std::size_t term_size(const TermPtr& t);

std::set<std::string> free_vars(const TermPtr& t);
std::set<std::string> bound_vars(const TermPtr& t);
bool is_closed(const TermPtr& t);

// Capture-agnostic substitution: the textbook three-clause definition.
// Never renames; may capture free variables of s.
TermPtr subst_naive(const TermPtr& t, const std::string& x, const TermPtr& s);

// Capture-avoiding substitution: binders of t that would capture a free
// variable of s are renamed with names drawn from the supply.
TermPtr subst_avoiding(const TermPtr& t, const std::string& x,
                       const TermPtr& s, FreshSupply& fresh);

// Returns a supply pre-seeded with every identifier occurring in the
// given terms, so drawn names are fresh for the whole run.
FreshSupply fresh_for(std::initializer_list<TermPtr> terms,
                      std::string base = "x");

// De Bruijn terms. One grammar serves both the index and the level
// interpretation; which one applies is fixed by the operation that
// produced the value.
class NamelessTerm;
using NamelessPtr = std::shared_ptr<const NamelessTerm>;

class NamelessTerm {
 public:
  struct Idx {
    std::uint64_t n;
  };
  struct App {
    NamelessPtr fn;
    NamelessPtr arg;
  };
  struct Lam {
    NamelessPtr body;
  };
  using Node = std::variant<Idx, App, Lam>;

  explicit NamelessTerm(Node node) : node_(std::move(node)) {}
  [[nodiscard]] const Node& node() const { return node_; }

  [[nodiscard]] bool is_idx() const { return node_.index() == 0; }
  [[nodiscard]] bool is_app() const { return node_.index() == 1; }
  [[nodiscard]] bool is_lam() const { return node_.index() == 2; }
  [[nodiscard]] const Idx& idx() const { return std::get<Idx>(node_); }
  [[nodiscard]] const App& app() const { return std::get<App>(node_); }
  [[nodiscard]] const Lam& lam() const { return std::get<Lam>(node_); }

 private:
  Node node_;
};

NamelessPtr nl_idx(std::uint64_t n);
NamelessPtr nl_app(NamelessPtr fn, NamelessPtr arg);
NamelessPtr nl_lam(NamelessPtr body);

bool nameless_eq(const NamelessPtr& a, const NamelessPtr& b);
std::size_t nameless_size(const NamelessPtr& t);

// Closed terms only; throws OpenTermError listing the free variables.
NamelessPtr to_indices(const TermPtr& t);
NamelessPtr to_levels(const TermPtr& t);

// Index encoding of a possibly open term: free variables are treated as
// if bound by implicit outer binders in the given order (innermost
// binder = last element). Used for alpha tests and to feed open terms
// to the strong de Bruijn machines.
NamelessPtr to_indices_open(const TermPtr& t,
                            const std::vector<std::string>& free_order);

// Named rendering of an index term; binders are named v0, v1, ... by
// depth. Free indices are rejected.
TermPtr from_indices(const NamelessPtr& t);

// True iff t1 and t2 are alpha-convertible. Free variables compare by
// name: both terms are closed over the union of their free variables in
// a fixed (sorted) order before comparing index translations.
bool alpha_eq(const TermPtr& t1, const TermPtr& t2);

// Concrete syntax. Abstraction is written `\x. t` or with a lambda;
// application is juxtaposition (left-associative); `\x y. t` coalesces
// binders; bare prelude names (I, K, S, omega, Omega, pair, c0..c9)
// expand to their definitions.
TermPtr parse(std::string_view src);

// Parse without prelude expansion.
TermPtr parse_raw(std::string_view src);

std::string print(const TermPtr& t);
std::string print(const NamelessPtr& t);

}  // namespace amlab
