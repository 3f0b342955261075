#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "amlab/list.hpp"
#include "amlab/term.hpp"
#include "amlab/trace.hpp"

namespace amlab::machines {

// Right-to-left call-by-value machine: stack, environment, control,
// dump. Rule (2c1) is the contraction rule; (2d) schedules the argument
// before the function.
struct SecdValue;
using SecdValuePtr = std::shared_ptr<const SecdValue>;

struct SecdBinding {
  std::string name;
  SecdValuePtr value;

  friend bool operator==(const SecdBinding& a, const SecdBinding& b);
};

using SecdEnv = List<SecdBinding>;

struct SecdValue {
  TermPtr code;  // always an abstraction
  SecdEnv env;
};

bool secd_value_eq(const SecdValuePtr& a, const SecdValuePtr& b);

struct ControlItem {
  struct Ap {};
  std::variant<TermPtr, Ap> item;

  friend bool operator==(const ControlItem& a, const ControlItem& b);
};

using Control = List<ControlItem>;

struct SecdDumpFrame {
  List<SecdValuePtr> stack;
  SecdEnv env;
  Control control;

  friend bool operator==(const SecdDumpFrame& a, const SecdDumpFrame& b);
};

struct SecdConfig {
  List<SecdValuePtr> stack;
  SecdEnv env;
  Control control;
  List<SecdDumpFrame> dump;
};

SecdConfig secd_load(const TermPtr& t);
std::optional<std::pair<SecdConfig, std::string>> secd_step(
    const SecdConfig& k);

struct SecdRun {
  RunStatus status;
  SecdConfig final;
  Trace<SecdConfig> trace;
  RunStats stats;
};

SecdRun run_secd(const TermPtr& t, std::uint64_t fuel,
                 bool record_trace = true);

TermPtr secd_readback(const SecdValuePtr& v);

std::string show(const SecdConfig& k);

}  // namespace amlab::machines
