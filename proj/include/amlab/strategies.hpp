#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "amlab/fresh.hpp"
#include "amlab/term.hpp"

namespace amlab::strategies {

enum class StrategyId { Cbn, Lcbv, Rcbv, NormalOrder, FullBeta };

StrategyId strategy_from_name(const std::string& name);
std::string strategy_name(StrategyId s);

// A context as a list of frames rooted at the hole. frames[0] is the
// frame nearest the hole.
struct Frame {
  enum class Kind { AppL, AppR, Under };
  Kind kind;
  TermPtr term;        // AppL: the argument; AppR: the function
  std::string binder;  // Under only
};
using LamContext = std::vector<Frame>;

TermPtr plug(const LamContext& ctx, const TermPtr& t);
bool context_eq(const LamContext& a, const LamContext& b);

// Context-grammar validators, one automaton per strategy nonterminal.
// Frames are consumed from the root end.
bool validates(StrategyId s, const LamContext& ctx);

// Beta-normal / neutral term grammar.
bool is_beta_normal(const TermPtr& t);
bool is_neutral(const TermPtr& t);

enum class NormalShape { Abs, Neutral };

struct NormalFormClass {
  enum class Kind { WeakHeadNF, CbvValue, BetaNF };
  Kind kind;
  std::optional<NormalShape> shape;  // BetaNF only
};

// Unrestricted beta-contraction of the top-level term.
std::optional<TermPtr> contract_beta(const TermPtr& t, FreshSupply& fresh);
// Contraction restricted to abstraction arguments (the call-by-value rule).
std::optional<TermPtr> contract_beta_lambda(const TermPtr& t,
                                            FreshSupply& fresh);

struct Decomposition {
  LamContext ctx;
  TermPtr redex;
};

// The unique strategy-legal decomposition, or the normal-form class when
// the strategy finds no redex. FullBeta decomposes leftmost-outermost.
std::variant<Decomposition, NormalFormClass> decompose(StrategyId s,
                                                       const TermPtr& t);

// Every beta-redex position under general contexts.
std::vector<Decomposition> decompose_all(const TermPtr& t);

// One strategy step: decompose, contract, replug.
std::variant<TermPtr, NormalFormClass> step(StrategyId s, const TermPtr& t,
                                            FreshSupply& fresh);

struct NormalizeResult {
  TermPtr term;  // normal form, or the last term when fuel ran out
  std::uint64_t steps = 0;
  bool exhausted = false;
};

NormalizeResult normalize(StrategyId s, const TermPtr& t, std::uint64_t fuel);

// Structural normal-form check, independent of decompose.
std::variant<NormalFormClass, std::monostate> classify_nf(StrategyId s,
                                                          const TermPtr& t);
bool is_nf(StrategyId s, const TermPtr& t);

struct Convertibility {
  bool convertible = false;
  bool exhausted = false;
};

// Normalize both sides in normal order and compare up to alpha.
Convertibility convertible(const TermPtr& t1, const TermPtr& t2,
                           std::uint64_t fuel);

}  // namespace amlab::strategies
