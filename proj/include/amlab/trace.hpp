#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace amlab {

// Firing counts per rule plus the designated contraction count. The
// total always equals the sum over per_rule.
struct RunStats {
  std::uint64_t total = 0;
  std::map<std::string, std::uint64_t> per_rule;
  std::uint64_t beta = 0;
  std::uint64_t fuel_used = 0;

  void count(const std::string& rule, bool is_beta) {
    ++total;
    ++per_rule[rule];
    if (is_beta) ++beta;
  }
};

enum class RunStatus { Halted, FuelExhausted };

// Rule-labelled configuration snapshots. steps[i].config is the
// configuration after firing steps[i].rule; the starting configuration
// is kept separately.
template <typename Config>
struct Trace {
  struct Step {
    std::string rule;
    Config config;
  };
  Config initial;
  std::vector<Step> steps;
};

}  // namespace amlab
