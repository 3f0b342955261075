#pragma once

#include <optional>
#include <string>
#include <utility>

#include "amlab/list.hpp"
#include "amlab/term.hpp"
#include "amlab/trace.hpp"

namespace amlab::machines {

// Call-by-name machine over de Bruijn index terms. The only contraction
// rule is (2); (1), (3) and (4) are overhead.
struct KrivineClosure {
  NamelessPtr code;
  List<KrivineClosure> env;

  friend bool operator==(const KrivineClosure& a, const KrivineClosure& b) {
    return nameless_eq(a.code, b.code) && a.env == b.env;
  }
};

using KrivineEnv = List<KrivineClosure>;

struct KrivineConfig {
  KrivineClosure focus;
  List<KrivineClosure> stack;  // every frame is an argument closure

  friend bool operator==(const KrivineConfig& a, const KrivineConfig& b) {
    return a.focus == b.focus && a.stack == b.stack;
  }
};

KrivineConfig krivine_load(const NamelessPtr& t);

// One transition; nullopt at the terminal shape (abstraction closure,
// empty stack). Open terms surface as UnboundVariableError.
std::optional<std::pair<KrivineConfig, std::string>> krivine_step(
    const KrivineConfig& k);

struct KrivineRun {
  RunStatus status;
  KrivineConfig final;
  Trace<KrivineConfig> trace;
  RunStats stats;
};

KrivineRun run_krivine(const NamelessPtr& t, std::uint64_t fuel,
                       bool record_trace = true);

// Expands the closure into the term it denotes (arguments re-applied to
// the code under its binders). Beta-convertible to the machine's input.
NamelessPtr krivine_readback(const KrivineClosure& c);

std::string show(const KrivineConfig& k);

}  // namespace amlab::machines
