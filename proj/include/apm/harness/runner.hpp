#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "apm/engine/apm.hpp"
#include "apm/harness/config.hpp"
#include "apm/structure/analysis.hpp"

namespace apm {

enum ExitCode : int {
  kExitConverged = 0,
  kExitConfig = 1,
  kExitNotConverged = 2,
  kExitSuiteFailed = 3,
  kExitPrecondition = 4,
  kExitNumeric = 5,
  kExitIo = 6,
};

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e);
int exit_code_for(TerminalStatus s);

struct ResolvedInstance {
  std::string id;
  std::vector<GeneratorDesc> generators;
  std::string default_start;
};

ResolvedInstance resolve_instance(const RunConfig& config,
                                  const std::vector<InstanceCatalogEntry>& entries = catalog());

struct RunOutcome {
  std::string instance;
  std::size_t truncation;
  std::shared_ptr<const Basis> basis;
  AnalysisReport analysis;
  std::string solver;  // "direct" or "decomposition"
  IterationTrace trace;
  Json report;
};

/// Analyzer, then solver (decomposition for pairwise-disjoint bases unless
/// overridden), then the report document. No files are written.
RunOutcome execute_run(const RunConfig& config);

/// execute_run plus trace.csv, plot.csv, report.json, analysis.json (and
/// snapshots.json on request) under config.out_dir. Returns the exit code;
/// failures are reported on `err`.
int cli_run(const RunConfig& config, std::ostream& err);

std::string tail_bound_note(const Basis& basis);

struct CompareResult {
  std::vector<double> max_deviation_per_step;  // index j-1
  double max_deviation = 0.0;
  std::size_t steps_direct = 0;
  std::size_t steps_decomposition = 0;
  bool pass = false;
};

constexpr double kCompareTol = 1e-12;

/// Runs run_apm and solve_by_decomposition with per-step snapshots and
/// compares every a_j, b_j entrywise. Throws PreconditionViolated unless the
/// basis is pairwise disjoint.
CompareResult compare_solvers(const ProblemInstance& instance);
/// Same, comparing the decomposition of `decomposed` with the direct run on
/// `direct` (two bases spanning the same subspace).
CompareResult compare_solvers(const ProblemInstance& direct, const ProblemInstance& decomposed);

Json compare_to_json(const CompareResult& r);

}  // namespace apm
