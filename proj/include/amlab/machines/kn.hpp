#pragma once

#include <optional>
#include <string>
#include <variant>

#include "amlab/list.hpp"
#include "amlab/term.hpp"
#include "amlab/trace.hpp"

namespace amlab::machines {

// Strong call-by-name (normal order) machine over de Bruijn indices.
// Closures extend the Krivine shape with abstract variables V(n) that
// stand for the parameters of abstractions entered without arguments.
struct KnClosure {
  struct TE {
    NamelessPtr code;
    List<KnClosure> env;
  };
  struct AbstractVar {
    std::uint64_t level;
  };
  std::variant<TE, AbstractVar> v;

  friend bool operator==(const KnClosure& a, const KnClosure& b);
};

using KnEnv = List<KnClosure>;

struct KnFrame {
  struct Arg {  // argument closure waiting for its function
    KnClosure c;
  };
  struct FunTerm {  // rebuilt function term waiting for its argument
    NamelessPtr t;
  };
  struct LamMarker {};  // binder entered without an argument
  std::variant<Arg, FunTerm, LamMarker> v;

  friend bool operator==(const KnFrame& a, const KnFrame& b);
};

enum class KnMode { Down, Up };

struct KnConfig {
  KnMode mode;
  KnClosure focus;   // Down
  NamelessPtr term;  // Up: the term rebuilt so far
  List<KnFrame> stack;
  std::uint64_t depth;  // equals the number of LamMarker frames on the stack

  friend bool operator==(const KnConfig& a, const KnConfig& b);
};

KnConfig kn_load(const NamelessPtr& t);

// Rule (2) fires only when the stack top is an argument frame; rule (3)
// otherwise. Exactly one rule matches every non-terminal configuration.
std::optional<std::pair<KnConfig, std::string>> kn_step(const KnConfig& k);

struct KnRun {
  RunStatus status;
  KnConfig final;
  Trace<KnConfig> trace;
  RunStats stats;
};

KnRun run_kn(const NamelessPtr& t, std::uint64_t fuel,
             bool record_trace = true, bool check_invariants = false);

std::string show(const KnConfig& k);

}  // namespace amlab::machines
