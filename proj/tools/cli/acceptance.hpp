#pragma once

// The numbered acceptance criteria, runnable at full or reduced scale.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pintersect/arith.hpp"

namespace pintersect::cli {

enum class Level { Fast, Full };
std::string to_string(Level level);
Level parse_level(const std::string& s);

struct AcceptanceOptions {
  Level level = Level::Full;
  u64 seed = 20240601;
  unsigned threads = 1;
  std::vector<int> only;  // empty = all
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string summary;
  nlohmann::json measured;
  double seconds = 0;
};

constexpr int kCriterionCount = 13;

CriterionResult run_criterion(int id, const AcceptanceOptions& opts);

/// Runs the selected criteria in order, reporting each as it finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "[PASS] 3  Counting oracle: <summary> (1.2 s)"
std::string format_line(const CriterionResult& r);

nlohmann::json report(const AcceptanceOptions& opts, const std::vector<CriterionResult>& results);

}  // namespace pintersect::cli
