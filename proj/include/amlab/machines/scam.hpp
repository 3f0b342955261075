#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>

#include "amlab/fresh.hpp"
#include "amlab/list.hpp"
#include "amlab/term.hpp"
#include "amlab/trace.hpp"

namespace amlab::machines {

// Strong call-by-value machine over crumbles: precompiled terms in
// administrative-normal-form style. A crumble is a sequence of bindings
// around the distinguished result variable; the head of the list is the
// binding the machine processes first.
extern const std::string kStar;

struct CrumbleBinding;
using Crumble = List<CrumbleBinding>;

struct Bite {
  struct VarB {
    std::string name;
  };
  struct AppB {
    std::string fn;
    std::string arg;
  };
  struct AbsB {
    std::string binder;
    Crumble body;
  };
  std::variant<VarB, AppB, AbsB> v;
};

struct CrumbleBinding {
  std::string name;
  Bite bite;
};

bool bite_eq(const Bite& a, const Bite& b);
bool crumble_eq(const Crumble& a, const Crumble& b);

// Free names of a crumble; the result variable counts as free until a
// binding introduces it.
std::set<std::string> crumble_free(const Crumble& c);

// ANF-style translation. Argument chains are bound before function
// chains, so the machine's first-binding-first traversal evaluates
// right to left.
Crumble crumble(const TermPtr& t, FreshSupply& fresh);
FreshSupply fresh_for_crumbling(const TermPtr& t);

// Substitutes every binding into its use sites.
TermPtr readback(const Crumble& c);

struct ScamFrame {
  struct EnvF {  // a binding already processed
    CrumbleBinding binding;
  };
  struct AbsF {  // normalizing inside an abstraction binding
    Crumble outer;
    std::string let_name;
    std::string param;
  };
  std::variant<EnvF, AbsF> v;
};

enum class ScamMode { Down, Up };

struct ScamConfig {
  ScamMode mode;
  Crumble focus;
  List<ScamFrame> stack;
};

ScamConfig scam_load(const Crumble& c);
std::optional<std::pair<ScamConfig, std::string>> scam_step(
    const ScamConfig& k, FreshSupply& fresh);

struct ScamRun {
  RunStatus status;
  ScamConfig final;
  Trace<ScamConfig> trace;
  RunStats stats;
};

// Crumbles the term and runs the machine on it.
ScamRun run_scam(const TermPtr& t, std::uint64_t fuel,
                 bool record_trace = true);

std::string show(const Crumble& c);
std::string show(const ScamConfig& k);

}  // namespace amlab::machines
