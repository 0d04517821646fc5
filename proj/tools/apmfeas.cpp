#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "apm/errors.hpp"
#include "apm/harness/acceptance.hpp"
#include "apm/harness/runner.hpp"

namespace {

using namespace apm;

struct RunArgs {
  std::string instance, config, start, out, solver;
  std::size_t truncation = 0, max_iters = 0, stride = 0;
  double tol = -1.0;
  bool snapshots = false;
  bool have_stride = false;
  bool truncation_flag = false;
};

int do_run(const RunArgs& a) {
  RunConfig c;
  try {
    if (!a.config.empty()) {
      c = load_run_config(a.config);
    } else if (!a.instance.empty()) {
      c.instance = a.instance;
    } else {
      throw ConfigError("run: need --instance or --config");
    }
    if (!a.instance.empty() && !a.config.empty()) {
      c.instance = a.instance;
      c.descriptors.clear();
    }
    if (a.truncation_flag) c.truncation = a.truncation;
    if (!a.start.empty()) c.start = a.start;
    if (a.tol >= 0.0) c.engine.tol_residual = a.tol;
    if (a.max_iters > 0) c.engine.max_iters = a.max_iters;
    if (a.have_stride) c.engine.snapshot_stride = a.stride;
    if (!a.out.empty()) c.out_dir = a.out;
    if (a.snapshots) c.write_snapshots = true;
    if (!a.solver.empty()) c.solver = parse_solver(a.solver);
    validate(c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return cli_run(c, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Alternating projections between a finite-codimension subspace and the nonnegative cone of l2"};
  app.require_subcommand(1);

  RunArgs ra;
  bool truncation_set = false;
  auto* run = app.add_subcommand("run", "run the iteration on a catalog instance or a config file");
  run->add_option("--instance", ra.instance, "catalog instance id");
  run->add_option("--config", ra.config, "RunConfig JSON file");
  run->add_option("--start", ra.start, "e<k> | zero | random:<seed> | nonneg:<seed> | comma list");
  run->add_option("--truncation", ra.truncation, "number of coordinates kept")->each([&](const std::string&) {
    truncation_set = true;
  });
  run->add_option("--tol", ra.tol, "residual tolerance");
  run->add_option("--max-iters", ra.max_iters, "iteration budget");
  run->add_option("--snapshot-stride", ra.stride, "full iterate every K steps (0: start and end only)")
      ->each([&](const std::string&) { ra.have_stride = true; });
  run->add_option("--solver", ra.solver, "auto | direct | decomposition");
  run->add_option("--out", ra.out, "output directory");
  run->add_flag("--snapshots", ra.snapshots, "also write snapshots.json");

  std::string an_instance, an_out;
  std::size_t an_trunc = kDefaultTruncation;
  auto* ana = app.add_subcommand("analyze", "structural analysis of an instance");
  ana->add_option("--instance", an_instance, "catalog instance id")->required();
  ana->add_option("--truncation", an_trunc, "number of coordinates kept");
  ana->add_option("--out", an_out, "write JSON here instead of stdout");

  std::string cmp_instance, cmp_start;
  std::size_t cmp_trunc = kDefaultTruncation, cmp_steps = 1000;
  auto* cmp = app.add_subcommand("compare", "direct iteration against the support decomposition");
  cmp->add_option("--instance", cmp_instance, "catalog instance id")->required();
  cmp->add_option("--truncation", cmp_trunc, "number of coordinates kept");
  cmp->add_option("--start", cmp_start, "start spec (default: the instance default)");
  cmp->add_option("--steps", cmp_steps, "largest number of steps compared");

  std::string suite_out, suite_catalog;
  std::size_t suite_iters = 0;
  auto* suite = app.add_subcommand("suite", "acceptance suite");
  suite->add_option("--out", suite_out, "write the JSON summary here");
  suite->add_option("--max-iters", suite_iters, "override the iteration budget of the convergence runs");
  suite->add_option("--catalog", suite_catalog, "catalog JSON file replacing the built-in registry");

  std::string cat_out;
  auto* cat = app.add_subcommand("catalog", "print the built-in instance registry as JSON");
  cat->add_option("--out", cat_out, "write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) {
      ra.truncation_flag = truncation_set;
      return do_run(ra);
    }
    if (*ana) {
      RunConfig c;
      c.instance = an_instance;
      c.truncation = an_trunc;
      validate(c);
      const auto inst = resolve_instance(c);
      const auto basis = build_basis(inst.generators, an_trunc);
      Json j;
      j["instance"] = inst.id;
      j["truncation"] = an_trunc;
      j["analysis"] = analysis_to_json(analyze(*basis));
      const std::string text = j.dump(2) + "\n";
      if (an_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(an_out, std::ios::binary);
        if (!(out << text)) throw IoError("cannot write " + an_out);
      }
      return kExitConverged;
    }
    if (*cmp) {
      RunConfig c;
      c.instance = cmp_instance;
      c.truncation = cmp_trunc;
      validate(c);
      const auto inst = resolve_instance(c);
      const auto basis = build_basis(inst.generators, cmp_trunc);
      EngineOptions o;
      o.max_iters = cmp_steps;
      const SeqVec start = parse_start(cmp_start.empty() ? inst.default_start : cmp_start, cmp_trunc);
      const CompareResult r = compare_solvers(ProblemInstance::make(basis, start, o));
      Json j = compare_to_json(r);
      j["instance"] = inst.id;
      j["truncation"] = cmp_trunc;
      std::cout << j.dump(2) << '\n';
      return r.pass ? kExitConverged : kExitSuiteFailed;
    }
    if (*cat) {
      Json j;
      j["schema_version"] = 1;
      Json entries = Json::array();
      for (const auto& e : catalog()) entries.push_back(catalog_entry_to_json(e));
      j["entries"] = std::move(entries);
      const std::string text = j.dump(2) + "\n";
      if (cat_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(cat_out, std::ios::binary);
        if (!(out << text)) throw IoError("cannot write " + cat_out);
      }
      return kExitConverged;
    }
    if (*suite) {
      SuiteOptions so;
      if (suite_iters > 0) so.max_iters = suite_iters;
      if (!suite_catalog.empty()) so.catalog_path = suite_catalog;
      const SuiteResult r = run_suite(so);
      for (const auto& c : r.criteria) {
        std::cout << c.id << ' ' << (c.passed ? "PASS" : "FAIL") << "  " << c.title << "  (" << c.seconds
                  << " s)  " << c.detail << '\n';
      }
      if (!suite_out.empty()) {
        std::ofstream out(suite_out, std::ios::binary);
        if (!(out << r.to_json().dump(2) << '\n')) throw IoError("cannot write " + suite_out);
      }
      if (!r.passed()) {
        for (const auto& c : r.criteria) {
          if (!c.passed) std::cerr << "failed: " << c.id << " (" << c.title << ")\n";
        }
        return kExitSuiteFailed;
      }
      return kExitConverged;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitConfig;
}
