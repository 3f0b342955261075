#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "amlab/list.hpp"
#include "amlab/trace.hpp"

namespace amlab::additive {

// Constants carry exact naturals so property tests never overflow.
using Nat = boost::multiprecision::cpp_int;

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Sums are constructors, not arithmetic: Plus(2, 2) != Const(4).
class Expr {
 public:
  struct Const {
    Nat n;
  };
  struct Plus {
    ExprPtr left;
    ExprPtr right;
  };
  using Node = std::variant<Const, Plus>;

  explicit Expr(Node node) : node_(std::move(node)) {}
  [[nodiscard]] const Node& node() const { return node_; }
  [[nodiscard]] bool is_const() const { return node_.index() == 0; }
  [[nodiscard]] bool is_plus() const { return node_.index() == 1; }
  [[nodiscard]] const Const& cst() const { return std::get<Const>(node_); }
  [[nodiscard]] const Plus& plus() const { return std::get<Plus>(node_); }

 private:
  Node node_;
};

ExprPtr cst(Nat n);
ExprPtr plus(ExprPtr left, ExprPtr right);
bool expr_eq(const ExprPtr& a, const ExprPtr& b);

// One-hole contexts over sums.
class Context;
using ContextPtr = std::shared_ptr<const Context>;

class Context {
 public:
  struct Hole {};
  struct PlusL {
    ContextPtr ctx;
    ExprPtr right;
  };
  struct PlusR {
    ExprPtr left;
    ContextPtr ctx;
  };
  using Node = std::variant<Hole, PlusL, PlusR>;

  explicit Context(Node node) : node_(std::move(node)) {}
  [[nodiscard]] const Node& node() const { return node_; }
  [[nodiscard]] bool is_hole() const { return node_.index() == 0; }
  [[nodiscard]] bool is_plus_l() const { return node_.index() == 1; }
  [[nodiscard]] bool is_plus_r() const { return node_.index() == 2; }
  [[nodiscard]] const PlusL& plus_l() const { return std::get<PlusL>(node_); }
  [[nodiscard]] const PlusR& plus_r() const { return std::get<PlusR>(node_); }

 private:
  Node node_;
};

ContextPtr hole();
ContextPtr plus_l(ContextPtr ctx, ExprPtr right);
ContextPtr plus_r(ExprPtr left, ContextPtr ctx);
bool context_eq(const ContextPtr& a, const ContextPtr& b);

ExprPtr plug(const ContextPtr& ctx, const ExprPtr& e);
// Plugs the inner context into the hole of the outer one.
ContextPtr plug_ctx(const ContextPtr& outer, const ContextPtr& inner);

std::uint64_t depth(const ExprPtr& e);

// Contraction of a sum of constants; nullopt when it does not apply.
std::optional<ExprPtr> contract_plus(const ExprPtr& e);

enum class EvalOrder { Left, Right };
enum class StepOrder { Left, Right, Any };

struct Redex {
  ContextPtr ctx;
  ExprPtr expr;
};

// Result of a single strategy step. `next` is absent on normal forms.
// For StepOrder::Any, `redexes` lists every contraction position; the
// chosen step is the left-to-right one.
struct StrategyStep {
  std::optional<ExprPtr> next;
  std::vector<Redex> redexes;
};

StrategyStep step_strategy(StepOrder order, const ExprPtr& e);

// The machine configuration: a focused expression, a stack of frames,
// and a direction tag. In Up mode the focus is always a constant.
enum class Mode { Down, Up };

// HolePlus carries the operand not yet evaluated, NumPlus the value of
// the operand already evaluated. For the left-to-right machine these
// read as (hole + e) and (n + hole); mirrored for right-to-left.
struct Frame {
  struct HolePlus {
    ExprPtr e;
  };
  struct NumPlus {
    Nat n;
  };
  std::variant<HolePlus, NumPlus> slot;

  friend bool operator==(const Frame& a, const Frame& b);
};

struct Config {
  Mode mode;
  ExprPtr focus;  // a Const whenever mode == Up
  List<Frame> stack;

  friend bool operator==(const Config& a, const Config& b);
};

Config load(const ExprPtr& e);

// One transition of the selected machine; nullopt at the terminal
// configuration. Exactly one rule matches every non-terminal
// configuration (checked; violations throw InvariantViolation).
std::optional<std::pair<Config, std::string>> machine_step(EvalOrder order,
                                                           const Config& k);

struct MachineRun {
  Nat result;
  Trace<Config> trace;
  RunStats stats;
};

MachineRun run_machine(EvalOrder order, const ExprPtr& e);

struct Decomposition {
  ExprPtr focus;
  ContextPtr ctx;
};

ContextPtr decode_stack(EvalOrder order, const List<Frame>& stack);
Decomposition decode(EvalOrder order, const Config& k);
ExprPtr recompose(const Decomposition& d);

std::uint64_t potential(const ExprPtr& e);
std::uint64_t potential(EvalOrder order, const List<Frame>& stack);
std::uint64_t potential(EvalOrder order, const Config& k);

// Meaning-then-reify normalizer: evaluates to a natural and wraps the
// result back up as a constant.
Nat eval(const ExprPtr& e);
ExprPtr reify(const Nat& n);
ExprPtr nbe_normalize(const ExprPtr& e);

// Concrete syntax: decimal literals, '+', parentheses. '+' does not
// associate; nesting requires parentheses.
ExprPtr parse_additive(std::string_view src);
std::string print(const ExprPtr& e);
std::string print(const ContextPtr& c);
std::string show_config(EvalOrder order, const Config& k);

}  // namespace amlab::additive
