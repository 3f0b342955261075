#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "amlab/list.hpp"
#include "amlab/term.hpp"
#include "amlab/trace.hpp"

namespace amlab::machines {

// Left-to-right call-by-value machine over named terms. Rule (5) is the
// contraction rule.
struct CekValue;
using CekValuePtr = std::shared_ptr<const CekValue>;

struct CekBinding {
  std::string name;
  CekValuePtr value;

  friend bool operator==(const CekBinding& a, const CekBinding& b);
};

using CekEnv = List<CekBinding>;

struct CekValue {
  TermPtr code;  // always an abstraction
  CekEnv env;
};

bool cek_value_eq(const CekValuePtr& a, const CekValuePtr& b);

struct CekFrame {
  struct ArgPending {  // argument term waiting with its environment
    TermPtr term;
    CekEnv env;
  };
  struct FunDone {  // evaluated function waiting for its argument
    CekValuePtr value;
  };
  std::variant<ArgPending, FunDone> slot;

  friend bool operator==(const CekFrame& a, const CekFrame& b);
};

enum class CekMode { Down, Up };

struct CekConfig {
  CekMode mode;
  TermPtr code;  // Down
  CekEnv env;    // Down
  CekValuePtr value;  // Up
  List<CekFrame> stack;
};

CekConfig cek_load(const TermPtr& t);
std::optional<std::pair<CekConfig, std::string>> cek_step(const CekConfig& k);

struct CekRun {
  RunStatus status;
  CekConfig final;
  Trace<CekConfig> trace;
  RunStats stats;
};

CekRun run_cek(const TermPtr& t, std::uint64_t fuel, bool record_trace = true);

// Substitutes the environment back into the closure's code.
TermPtr cek_readback(const CekValuePtr& v);

std::string show(const CekConfig& k);

}  // namespace amlab::machines
