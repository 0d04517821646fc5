#include "apm/engine/apm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "apm/errors.hpp"

namespace apm {

std::string to_string(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::Converged:
      return "Converged";
    case TerminalStatus::MaxIters:
      return "MaxIters";
    case TerminalStatus::Stalled:
      return "Stalled";
  }
  return "?";
}

ProblemInstance ProblemInstance::make(std::shared_ptr<const Basis> basis, const SeqVec& start,
                                      EngineOptions options) {
  if (!basis) throw Error("ProblemInstance: null basis");
  const std::size_t n = basis->truncation();
  for (std::size_t k = n; k < start.size(); ++k) {
    if (start.entries()[k] != 0.0) {
      throw ConfigError("ProblemInstance: start point has nonzero coordinates beyond the truncation");
    }
  }
  ProblemInstance p{std::move(basis), resized(start, n), n, options};
  p.validate();
  return p;
}

void ProblemInstance::validate() const {
  if (!basis) throw ConfigError("ProblemInstance: null basis");
  if (truncation == 0) throw ConfigError("ProblemInstance: truncation must be >= 1");
  if (basis->truncation() != truncation) throw ConfigError("ProblemInstance: basis truncation mismatch");
  if (start.size() != truncation) throw ConfigError("ProblemInstance: start truncation mismatch");
  for (const auto& v : basis->vectors()) {
    if (v.origin() && v.origin()->min_truncation() > truncation) {
      throw ConfigError("ProblemInstance: truncation below a finite-support basis vector");
    }
  }
  if (!(options.tol_residual >= 0.0) || !(options.eps_supp > 0.0)) {
    throw ConfigError("ProblemInstance: tolerances must be positive");
  }
  if (options.max_iters == 0) throw ConfigError("ProblemInstance: max_iters must be >= 1");
}

const Snapshot* IterationTrace::snapshot(std::size_t j) const {
  auto it = std::lower_bound(snapshots.begin(), snapshots.end(), j,
                             [](const Snapshot& s, std::size_t jj) { return s.j < jj; });
  if (it == snapshots.end() || it->j != j) return nullptr;
  return &*it;
}

double IterationTrace::final_residual() const {
  return steps.empty() ? 0.0 : steps.back().residual();
}

TraceRecorder::TraceRecorder(std::shared_ptr<const Basis> basis, std::span<const double> start,
                             const EngineOptions& options)
    : options_(options), prev_b_(start.begin(), start.end()) {
  trace_.basis = std::move(basis);
  trace_.snapshot_stride = options.snapshot_stride;
  q_apply(*trace_.basis, prev_b_, coeffs_, q_);
  trace_.snapshots.push_back(Snapshot{0, std::nullopt, SeqVec(prev_b_)});
}

void TraceRecorder::snapshot(std::size_t j, std::span<const double> a, std::span<const double> b,
                             bool with_a) {
  std::optional<SeqVec> av;
  if (with_a) av = SeqVec(std::vector<double>(a.begin(), a.end()));
  trace_.snapshots.push_back(Snapshot{j, std::move(av), SeqVec(std::vector<double>(b.begin(), b.end()))});
}

bool TraceRecorder::record(std::span<const double> a, std::span<const double> b,
                           std::span<const double> prev_coeffs) {
  if (finished_) throw Error("TraceRecorder: run already finished");
  const std::size_t n = prev_b_.size();
  double neg = 0.0, delta = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(a[k]) || !std::isfinite(b[k])) {
      throw NonFiniteIterate("non-finite iterate at step " + std::to_string(trace_.steps.size() + 1));
    }
    const double m = a[k] - b[k];
    neg += m * m;
    const double d = b[k] - prev_b_[k];
    delta += d * d;
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  q_apply(*trace_.basis, b, coeffs_, q_);
  StepRecord rec{trace_.steps.size() + 1,
                 norm(q_),
                 std::sqrt(neg),
                 std::sqrt(delta),
                 std::sqrt(nb),
                 std::sqrt(na),
                 std::vector<double>(prev_coeffs.begin(), prev_coeffs.end())};
  const double residual = rec.residual();
  const std::size_t j = rec.j;
  const double step_delta = rec.step_delta;
  trace_.steps.push_back(std::move(rec));
  std::copy(b.begin(), b.end(), prev_b_.begin());

  bool stop = false;
  if (residual <= options_.tol_residual) {
    trace_.terminal_status = TerminalStatus::Converged;
    stop = true;
  } else {
    small_steps_ = step_delta < options_.stall_delta ? small_steps_ + 1 : 0;
    if (options_.stall_window > 0 && small_steps_ >= options_.stall_window) {
      trace_.terminal_status = TerminalStatus::Stalled;
      stop = true;
    } else if (j >= options_.max_iters) {
      trace_.terminal_status = TerminalStatus::MaxIters;
      stop = true;
    }
  }
  if (stop || j >= options_.dense_from || (options_.snapshot_stride > 0 && j % options_.snapshot_stride == 0)) {
    snapshot(j, a, b, true);
  }
  finished_ = stop;
  return stop;
}

IterationTrace TraceRecorder::finish() {
  trace_.limit_estimate = SeqVec(prev_b_);
  finished_ = true;
  return std::move(trace_);
}

IterationTrace run_apm(const ProblemInstance& instance) {
  instance.validate();
  const Basis& basis = *instance.basis;
  const std::size_t n = instance.truncation;
  TraceRecorder rec(instance.basis, instance.start.entries(), instance.options);
  std::vector<double> a(n), b(n), prev_coeffs;
  for (;;) {
    const auto& bj = rec.last_b();
    const auto& q = rec.q();
    prev_coeffs = rec.coeffs();
    for (std::size_t k = 0; k < n; ++k) {
      a[k] = bj[k] - q[k];
      b[k] = std::max(a[k], 0.0);
    }
    (void)basis;
    if (rec.record(a, b, prev_coeffs)) break;
  }
  return rec.finish();
}

IterationTrace run_codim1(const SeqVec& v, const SeqVec& start, const EngineOptions& options) {
  if (std::abs(norm(v) - 1.0) > 1e-10) throw PreconditionViolated("run_codim1: ‖v‖ must be 1");
  auto basis = std::make_shared<const Basis>(Basis::from_orthonormal({v}));
  const ProblemInstance instance = ProblemInstance::make(basis, start, options);
  const std::size_t n = instance.truncation;
  const auto ve = (*basis)[0].entries();
  TraceRecorder rec(basis, instance.start.entries(), options);
  std::vector<double> a(n), b(n);
  for (;;) {
    const auto& bj = rec.last_b();
    const double c = dot(bj, ve);
    for (std::size_t k = 0; k < n; ++k) {
      a[k] = bj[k] - (0.0 + c * ve[k]);
      b[k] = std::max(a[k], 0.0);
    }
    const double coeff[1] = {c};
    if (rec.record(a, b, coeff)) break;
  }
  return rec.finish();
}

std::vector<IterationTrace> run_apm_many(std::span<const ProblemInstance> instances, unsigned threads) {
  std::vector<std::optional<IterationTrace>> slots(instances.size());
  std::vector<std::exception_ptr> errors(instances.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(instances.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < instances.size(); i = next++) {
      try {
        slots[i] = run_apm(instances[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<IterationTrace> out;
  out.reserve(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

}  // namespace apm
