#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "psimoyal/ho_oracle.hpp"

namespace psimoyal {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteOptions {
  PhysParams params = PhysParams::harmonic();
  std::size_t n = 64;
  double half_width = 8.0;
  std::size_t random_points = 10000;
  std::uint64_t seed = 20240611;
};

/// End-to-end oscillator checks 1-7, run in-process. `on_result` is called as
/// each criterion finishes.
std::vector<CriterionResult> run_ho_suite(const SuiteOptions& opts,
                                          const std::function<void(const CriterionResult&)>& on_result = {});

/// Peak resident set of this process in bytes.
std::size_t peak_rss_bytes();

}  // namespace psimoyal
