#pragma once

#include <optional>
#include <string>
#include <vector>

#include "apm/engine/apm.hpp"
#include "apm/harness/catalog.hpp"
#include "apm/harness/json_io.hpp"

namespace apm {

constexpr int kConfigSchemaVersion = 1;

enum class SolverChoice { Auto, Direct, Decomposition };

struct RunConfig {
  std::optional<std::string> instance;
  std::vector<GeneratorDesc> descriptors;  // inline basis when no instance id
  std::size_t truncation = kDefaultTruncation;
  std::string start;                       // start spec; empty: the instance default
  EngineOptions engine;
  SolverChoice solver = SolverChoice::Auto;
  std::string out_dir = ".";
  bool write_snapshots = false;
};

/// Keys: schema_version (required), instance | descriptors, truncation, start,
/// tol_residual, max_iters, snapshot_stride, stall_window, eps_supp, solver,
/// out_dir, write_snapshots. Anything else is a ConfigError.
RunConfig parse_run_config(const Json& j);
RunConfig load_run_config(const std::string& path);
Json run_config_to_json(const RunConfig& c);
void validate(const RunConfig& c);
SolverChoice parse_solver(const std::string& s);

/// e<k> | zero | random:<seed> | nonneg:<seed> | comma-separated entries.
/// random draws uniform [-1, 1), nonneg uniform [0, 1), from mt19937_64.
SeqVec parse_start(const std::string& spec, std::size_t n);

/// Uniform [0, 1) doubles from mt19937_64 seeded with `seed`.
std::vector<double> uniform_doubles(std::uint64_t seed, std::size_t count);

}  // namespace apm
