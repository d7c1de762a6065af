#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "landau/phase.hpp"

namespace landau {

struct SuiteOptions {
  bool quick = false;  // small grids, for smoke runs
  std::uint64_t seed = 1;
  std::string trace_dir;  // when set, traces of the runs are written there as CSV
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::vector<std::pair<std::string, double>> metrics;
  std::string note;
  double seconds = 0.0;
};

constexpr int kCriterionCount = 10;

// ids 1..kCriterionCount; errors inside a check are reported as a failure with the message
CriterionResult run_criterion(int id, const SuiteOptions& opt);

// lambda0 of the dense eigensolve on an n = 16 box with spacing h (the gap depends on the
// spacing, hardly on the box once vmax >= 4); cached per (h, gamma)
double reference_lambda0(double h, double gamma);

}  // namespace landau
