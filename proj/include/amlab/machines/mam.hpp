#pragma once

#include <optional>
#include <string>
#include <variant>

#include "amlab/fresh.hpp"
#include "amlab/list.hpp"
#include "amlab/term.hpp"
#include "amlab/trace.hpp"

namespace amlab::machines {

// Strong call-by-name machine with useful sharing: a global store of
// labelled bindings replaces local environments, substitutions that
// cannot create redexes are suppressed, and every binder in a run has a
// globally unique name.
enum class MamLabel { Abs, Neu, Red };

std::string label_name(MamLabel l);

struct MamStoreEntry {
  std::string name;
  TermPtr term;
  MamLabel label;

  friend bool operator==(const MamStoreEntry& a, const MamStoreEntry& b) {
    return a.name == b.name && term_eq(a.term, b.term) && a.label == b.label;
  }
};

using MamStore = List<MamStoreEntry>;  // newest entry first

struct MamDumpFrame {
  struct LamF {  // under a binder
    std::string binder;
  };
  struct AppF {  // function rebuilt, argument in progress; stack parked
    TermPtr fn;
    List<TermPtr> saved_stack;
  };
  std::variant<LamF, AppF> v;

  friend bool operator==(const MamDumpFrame& a, const MamDumpFrame& b);
};

enum class MamMode { Down, Up };

struct MamConfig {
  MamMode mode;
  TermPtr focus;
  List<TermPtr> stack;  // argument frames
  List<MamDumpFrame> dump;
  MamStore store;
};

// The structural label classifier: red iff the term can still contain a
// redex given the labels stored for its variables, neu for normal
// neutral terms, abs for normal abstractions.
MamLabel mam_label(const TermPtr& t, const MamStore& store);

// Renames every binder to a fresh name; free variables are untouched.
TermPtr rename_binders(const TermPtr& t, FreshSupply& fresh);

MamConfig mam_load(const TermPtr& t, FreshSupply& fresh);
std::optional<std::pair<MamConfig, std::string>> mam_step(const MamConfig& k,
                                                          FreshSupply& fresh);

struct MamRun {
  RunStatus status;
  MamConfig final;
  Trace<MamConfig> trace;
  RunStats stats;
};

MamRun run_mam(const TermPtr& t, std::uint64_t fuel, bool record_trace = true,
               bool check_invariants = false);

// Substitutes store entries into the result term, newest first. The
// pair (final focus, store) is the machine's shared output.
TermPtr mam_unfold(const TermPtr& t, const MamStore& store);

std::string show(const MamConfig& k);

}  // namespace amlab::machines
