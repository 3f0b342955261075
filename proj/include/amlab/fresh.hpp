#pragma once

#include <set>
#include <string>

namespace amlab {

// Deterministic fresh-name generator: draws base0, base1, base2, ...
// skipping names recorded as in use. One supply per run; not shared
// across threads.
class FreshSupply {
 public:
  explicit FreshSupply(std::string base = "x") : base_(std::move(base)) {}

  void record_in_use(const std::string& name) { used_.insert(name); }

  template <typename Names>
  void record_all(const Names& names) {
    for (const auto& n : names) used_.insert(n);
  }

  std::string draw() {
    for (;;) {
      std::string candidate = base_ + std::to_string(counter_++);
      if (used_.insert(candidate).second) return candidate;
    }
  }

  [[nodiscard]] bool in_use(const std::string& name) const {
    return used_.count(name) != 0;
  }

 private:
  std::string base_;
  unsigned long counter_ = 0;
  std::set<std::string> used_;
};

}  // namespace amlab
