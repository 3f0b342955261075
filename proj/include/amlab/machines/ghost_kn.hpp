#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "amlab/list.hpp"
#include "amlab/machines/kn.hpp"
#include "amlab/term.hpp"
#include "amlab/trace.hpp"

namespace amlab::machines {

// Bisimilar variant of the KN machine carrying its stack-shape invariant
// explicitly: stacks follow the applicative/non-applicative grammar, the
// rebuilt terms are split into neutral and normal forms, and a coercion
// frame mediates between the two. Erasing the extra structure yields KN
// runs step for step, with rule (8a) erased.
struct GhostNf;
struct GhostNe;
using GhostNfPtr = std::shared_ptr<const GhostNf>;
using GhostNePtr = std::shared_ptr<const GhostNe>;

// Neutral terms: an index or a neutral applied to a normal form.
struct GhostNe {
  struct Idx {
    std::uint64_t n;
  };
  struct App {
    GhostNePtr fn;
    GhostNfPtr arg;
  };
  std::variant<Idx, App> v;
};

// Normal terms: an abstraction or a coerced neutral.
struct GhostNf {
  struct Lam {
    GhostNfPtr body;
  };
  struct Coe {
    GhostNePtr neutral;
  };
  std::variant<Lam, Coe> v;
};

GhostNePtr ghost_idx(std::uint64_t n);
GhostNePtr ghost_app(GhostNePtr fn, GhostNfPtr arg);
GhostNfPtr ghost_lam(GhostNfPtr body);
GhostNfPtr ghost_coe(GhostNePtr neutral);

bool ghost_ne_eq(const GhostNePtr& a, const GhostNePtr& b);
bool ghost_nf_eq(const GhostNfPtr& a, const GhostNfPtr& b);

// Drops the coercions.
NamelessPtr erase(const GhostNePtr& a);
NamelessPtr erase(const GhostNfPtr& n);

struct GhostFrame {
  struct Arg {
    KnClosure c;
  };
  struct CoeMarker {};  // the explicit neutral-to-normal coercion frame
  struct FunNeutral {
    GhostNePtr a;
  };
  struct LamMarker {};
  std::variant<Arg, CoeMarker, FunNeutral, LamMarker> v;

  friend bool operator==(const GhostFrame& a, const GhostFrame& b);
};

enum class GhostMode { Down, UpNeutral, UpNormal };

struct GhostConfig {
  GhostMode mode;
  KnClosure focus;    // Down
  GhostNePtr neutral; // UpNeutral
  GhostNfPtr normal;  // UpNormal
  List<GhostFrame> stack;
  std::uint64_t depth;
};

GhostConfig ghost_load(const NamelessPtr& t);
std::optional<std::pair<GhostConfig, std::string>> ghost_step(
    const GhostConfig& k);

// True when the stack derives from the grammar required by the mode:
// applicative for Down/UpNeutral, non-applicative for UpNormal.
bool ghost_stack_valid(const GhostConfig& k);

struct GhostRun {
  RunStatus status;
  GhostConfig final;
  Trace<GhostConfig> trace;
  RunStats stats;
};

GhostRun run_ghost(const NamelessPtr& t, std::uint64_t fuel,
                   bool record_trace = true, bool check_invariants = false);

// The KN configuration this ghost configuration erases to.
KnConfig erase(const GhostConfig& k);

std::string show(const GhostConfig& k);

}  // namespace amlab::machines
