#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apm/projections/basis.hpp"

namespace apm {

struct EngineOptions {
  double tol_residual = 1e-10;
  std::size_t max_iters = 100000;
  double eps_supp = kDefaultEpsSupp;
  // Full a_j/b_j snapshots every `snapshot_stride` steps (0: start and final only).
  std::size_t snapshot_stride = 10;
  // Additionally snapshot every step j >= dense_from.
  std::size_t dense_from = static_cast<std::size_t>(-1);
  // Stalled when step_delta < stall_delta for stall_window consecutive steps
  // while the residual stays above tolerance (0 disables the check).
  std::size_t stall_window = 50;
  double stall_delta = 1e-15;
};

/// One feasibility run: A = span{basis}^perp, B = cone, start point b^0.
struct ProblemInstance {
  std::shared_ptr<const Basis> basis;
  SeqVec start;
  std::size_t truncation;
  EngineOptions options;

  /// Pads (or checks-and-truncates) `start` to the basis truncation.
  static ProblemInstance make(std::shared_ptr<const Basis> basis, const SeqVec& start,
                              EngineOptions options = {});
  void validate() const;
};

enum class TerminalStatus { Converged, MaxIters, Stalled };
std::string to_string(TerminalStatus s);

struct StepRecord {
  std::size_t j;
  double dist_to_A;             // ‖Q(b_j)‖
  double dist_to_B;             // ‖(a_j)^-‖
  double step_delta;            // ‖b_j - b_{j-1}‖
  double fejer_dist_to_origin;  // ‖b_j‖
  double norm_a;                // ‖a_j‖
  std::vector<double> q_coefficients;  // <b_{j-1}, v_i>

  double residual() const { return dist_to_A + dist_to_B + step_delta; }
};

// b_0 = start has no a-partner.
struct Snapshot {
  std::size_t j;
  std::optional<SeqVec> a;
  SeqVec b;
};

/// a_j = P_A(b_{j-1}), b_j = P_B(a_j), j = 1, 2, ...
struct IterationTrace {
  std::shared_ptr<const Basis> basis;
  std::vector<StepRecord> steps;
  std::vector<Snapshot> snapshots;  // increasing j, always includes 0 and the last step
  TerminalStatus terminal_status = TerminalStatus::MaxIters;
  SeqVec limit_estimate = SeqVec::zeros(1);
  std::size_t snapshot_stride = 0;

  std::size_t iterations() const { return steps.size(); }
  const Snapshot* snapshot(std::size_t j) const;
  double final_residual() const;
  /// True when snapshots exist for every step 0..iterations().
  bool has_every_snapshot() const { return snapshots.size() == steps.size() + 1; }
};

IterationTrace run_apm(const ProblemInstance& instance);

/// Single-vector iteration b_{j+1} = (b_j - <b_j, v> v)^+; same trace
/// contract as run_apm with N = 1. Requires ‖v‖ = 1 within 1e-10.
IterationTrace run_codim1(const SeqVec& v, const SeqVec& start, const EngineOptions& options = {});

/// Independent runs over a worker pool; output order matches input order.
std::vector<IterationTrace> run_apm_many(std::span<const ProblemInstance> instances,
                                         unsigned threads = 0);

/// Bookkeeping shared by every solver that produces an IterationTrace:
/// per-step diagnostics, snapshots, and the stopping rule.
class TraceRecorder {
 public:
  TraceRecorder(std::shared_ptr<const Basis> basis, std::span<const double> start,
                const EngineOptions& options);

  /// Records step j (a_j, b_j) given prev_coeffs = <b_{j-1}, v_i>.
  /// Returns true when the run must stop.
  bool record(std::span<const double> a, std::span<const double> b,
              std::span<const double> prev_coeffs);

  /// <b, v_i> and Q(b) for the most recent b (the start before any step).
  const std::vector<double>& coeffs() const { return coeffs_; }
  const std::vector<double>& q() const { return q_; }
  const std::vector<double>& last_b() const { return prev_b_; }

  IterationTrace finish();

 private:
  void snapshot(std::size_t j, std::span<const double> a, std::span<const double> b, bool with_a);

  IterationTrace trace_;
  EngineOptions options_;
  std::vector<double> prev_b_;
  std::vector<double> coeffs_;
  std::vector<double> q_;
  std::size_t small_steps_ = 0;
  bool finished_ = false;
};

}  // namespace apm
