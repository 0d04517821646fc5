#pragma once

#include <optional>
#include <string>
#include <vector>

#include "apm/harness/json_io.hpp"

namespace apm {

struct CriterionResult {
  std::string id;  // "C1" .. "C8"
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteOptions {
  // replaces the iteration budget of the convergence runs
  std::optional<std::size_t> max_iters;
  // catalog file replacing the built-in registry
  std::optional<std::string> catalog_path;
};

struct SuiteResult {
  std::vector<CriterionResult> criteria;
  bool passed() const;
  Json to_json() const;
};

SuiteResult run_suite(const SuiteOptions& options = {});

}  // namespace apm
