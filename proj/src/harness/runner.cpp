#include "apm/harness/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "apm/engine/trace_io.hpp"
#include "apm/errors.hpp"
#include "apm/harness/json_io.hpp"
#include "apm/structure/decomposition.hpp"

namespace apm {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const PreconditionViolated*>(&e) || dynamic_cast<const Unsupported*>(&e) ||
      dynamic_cast<const NotFeasiblePoint*>(&e)) {
    return kExitPrecondition;
  }
  if (dynamic_cast<const NonFiniteIterate*>(&e)) return kExitNumeric;
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  return kExitConfig;
}

int exit_code_for(TerminalStatus s) { return s == TerminalStatus::Converged ? kExitConverged : kExitNotConverged; }

ResolvedInstance resolve_instance(const RunConfig& config, const std::vector<InstanceCatalogEntry>& entries) {
  validate(config);
  if (config.instance) {
    const auto& e = find_entry(entries, *config.instance);
    return {e.id, e.generators, e.default_start};
  }
  return {"inline", config.descriptors, "e1"};
}

std::string tail_bound_note(const Basis& basis) {
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "basis evaluated at truncation %zu; largest dropped-tail norm bound %.3g; "
                "residuals below this bound reflect the truncated problem only",
                basis.truncation(), basis.max_tail_bound());
  return buf;
}

RunOutcome execute_run(const RunConfig& config) {
  const ResolvedInstance inst = resolve_instance(config);
  const std::size_t n = config.truncation;
  auto basis = build_basis(inst.generators, n);
  const SeqVec start = parse_start(config.start.empty() ? inst.default_start : config.start, n);
  const ProblemInstance problem = ProblemInstance::make(basis, start, config.engine);
  AnalysisReport analysis = analyze(*basis, 0, config.engine.eps_supp);

  bool decompose = false;
  switch (config.solver) {
    case SolverChoice::Auto:
      decompose = analysis.disjoint.holds;
      break;
    case SolverChoice::Direct:
      break;
    case SolverChoice::Decomposition:
      decompose = true;
      break;
  }
  IterationTrace trace = decompose ? solve_by_decomposition(problem) : run_apm(problem);

  Json report;
  report["instance"] = inst.id;
  report["truncation"] = n;
  report["verdicts"] = verdicts_to_json(analysis.verdicts);
  report["terminal_status"] = to_string(trace.terminal_status);
  report["iterations"] = trace.iterations();
  report["final_residual"] = trace.final_residual();
  report["tail_bound_note"] = tail_bound_note(*basis);
  return {inst.id, n, basis, std::move(analysis), decompose ? "decomposition" : "direct", std::move(trace),
          std::move(report)};
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  out << content;
  if (!out) throw IoError("write failed for " + p.string());
}

}  // namespace

int cli_run(const RunConfig& config, std::ostream& err) {
  try {
    const RunOutcome r = execute_run(config);
    const std::filesystem::path dir(config.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    std::ostringstream trace, plot, snaps;
    write_trace_csv(trace, r.trace);
    write_plot_csv(plot, r.trace);
    write_file(dir / "trace.csv", trace.str());
    write_file(dir / "plot.csv", plot.str());
    write_file(dir / "report.json", r.report.dump(2) + "\n");
    Json analysis = analysis_to_json(r.analysis);
    analysis["solver"] = r.solver;
    write_file(dir / "analysis.json", analysis.dump(2) + "\n");
    if (config.write_snapshots) {
      write_snapshots_json(snaps, r.trace);
      write_file(dir / "snapshots.json", snaps.str());
    }
    if (r.trace.terminal_status != TerminalStatus::Converged) {
      err << "run stopped with status " << to_string(r.trace.terminal_status) << " after " << r.trace.iterations()
          << " iterations (residual " << r.trace.final_residual() << ")\n";
    }
    return exit_code_for(r.trace.terminal_status);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

CompareResult compare_solvers(const ProblemInstance& instance) { return compare_solvers(instance, instance); }

CompareResult compare_solvers(const ProblemInstance& direct, const ProblemInstance& decomposed) {
  ProblemInstance d = direct, s = decomposed;
  d.options.snapshot_stride = 1;
  s.options.snapshot_stride = 1;
  const IterationTrace td = run_apm(d);
  const IterationTrace ts = solve_by_decomposition(s);
  CompareResult r;
  r.steps_direct = td.iterations();
  r.steps_decomposition = ts.iterations();
  const std::size_t steps = std::min(r.steps_direct, r.steps_decomposition);
  for (std::size_t j = 1; j <= steps; ++j) {
    const Snapshot& x = td.snapshots[j];
    const Snapshot& y = ts.snapshots[j];
    const double dev = std::max(max_abs_diff(x.b, y.b), max_abs_diff(*x.a, *y.a));
    r.max_deviation_per_step.push_back(dev);
    r.max_deviation = std::max(r.max_deviation, dev);
  }
  r.pass = r.steps_direct == r.steps_decomposition && r.max_deviation <= kCompareTol;
  return r;
}

Json compare_to_json(const CompareResult& r) {
  Json j;
  j["pass"] = r.pass;
  j["tolerance"] = kCompareTol;
  j["max_deviation"] = r.max_deviation;
  j["steps_direct"] = r.steps_direct;
  j["steps_decomposition"] = r.steps_decomposition;
  j["max_deviation_per_step"] = r.max_deviation_per_step;
  return j;
}

}  // namespace apm
