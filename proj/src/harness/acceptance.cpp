#include "apm/harness/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "apm/engine/monitors.hpp"
#include "apm/errors.hpp"
#include "apm/harness/catalog.hpp"
#include "apm/harness/config.hpp"
#include "apm/harness/runner.hpp"
#include "apm/structure/rotation.hpp"

namespace apm {

bool SuiteResult::passed() const {
  for (const auto& c : criteria) {
    if (!c.passed) return false;
  }
  return !criteria.empty();
}

Json SuiteResult::to_json() const {
  Json j;
  j["passed"] = passed();
  Json a = Json::array();
  for (const auto& c : criteria) {
    a.push_back({{"id", c.id}, {"title", c.title}, {"passed", c.passed}, {"detail", c.detail}, {"seconds", c.seconds}});
  }
  j["criteria"] = std::move(a);
  return j;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Collects failures; a criterion passes when none were recorded.
struct Checker {
  std::ostringstream fails;
  std::size_t count = 0;
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (count++ < 6) fails << (count > 1 ? "; " : "") << what;
  }
};

constexpr std::uint64_t kSeed = 20240601;

struct Ctx {
  const SuiteOptions& opt;
  std::vector<InstanceCatalogEntry> entries;
  const InstanceCatalogEntry& get(const std::string& id) const { return find_entry(entries, id); }
};

ProblemInstance make_problem(std::shared_ptr<const Basis> basis, const std::string& start, EngineOptions o) {
  const SeqVec s = parse_start(start, basis->truncation());
  return ProblemInstance::make(std::move(basis), s, o);
}

// C1: norms and inner products of the raw generators at n = 10^4.
void c1(const Ctx& ctx, Checker& ck, double& seconds) {
  const auto t0 = Clock::now();
  const std::size_t n = 10000;
  for (const char* id : {"remark-3.2-harmonic", "remark-4.2-signed"}) {
    const auto& e = ctx.get(id);
    std::vector<SeqVec> vs;
    for (const auto& g : e.generators) vs.push_back(evaluate_generator(g, n));
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const double n2 = dot(vs[i].entries(), vs[i].entries());
      const double t = vs[i].tail_bound();
      ck.expect(std::abs(n2 - 1.0) <= t * t + 1e-12,
                std::string(id) + " v" + std::to_string(i + 1) + ": |norm^2 - 1| = " + fmt("%.3g", std::abs(n2 - 1.0)) +
                    " exceeds tail^2 = " + fmt("%.3g", t * t));
      for (std::size_t j = i + 1; j < vs.size(); ++j) {
        const double ip = dot(vs[i].entries(), vs[j].entries());
        ck.expect(std::abs(ip) <= 1e-10, std::string(id) + " <v" + std::to_string(i + 1) + ",v" +
                                             std::to_string(j + 1) + "> = " + fmt("%.3g", ip));
      }
    }
  }
  seconds = seconds_since(t0);
  ck.expect(seconds < 1.0, "runtime " + fmt("%.3f", seconds) + " s >= 1 s");
}

// C2: decomposition reproduces the direct iterates.
void c2(const Ctx& ctx, Checker& ck, double& seconds) {
  const auto t0 = Clock::now();
  const std::size_t n = 256;
  EngineOptions o;
  o.tol_residual = 0.0;
  o.max_iters = 200;
  o.stall_window = 0;
  const std::string nonneg = "nonneg:" + std::to_string(kSeed);
  double worst = 0.0;
  auto record = [&](const std::string& label, const CompareResult& r) {
    worst = std::max(worst, r.max_deviation);
    ck.expect(r.pass && r.steps_direct == 200, label + ": deviation " + fmt("%.3g", r.max_deviation) + " over " +
                                                   std::to_string(r.steps_direct) + " steps");
  };
  {
    auto basis = build_basis(ctx.get("remark-3.2-harmonic"), n);
    record("remark-3.2-harmonic", compare_solvers(make_problem(basis, "e4", o)));
  }
  {
    auto basis = build_basis(ctx.get("disjoint-triple"), n);
    record("disjoint-triple", compare_solvers(make_problem(basis, nonneg, o)));
  }
  for (double alpha : {0.25, 0.5, 0.75}) {
    const auto entry = alpha == 0.5 ? ctx.get("remark-3.4-geometric") : geometric_pair_entry(alpha);
    auto basis = build_basis(entry, n);
    auto rot = find_disjoint_rotation(*basis);
    if (!rot) {
      ck.expect(false, entry.id + ": no disjoint rotation");
      continue;
    }
    auto rotated = std::make_shared<const Basis>(rot->basis);
    record(entry.id, compare_solvers(make_problem(basis, nonneg, o), make_problem(rotated, nonneg, o)));
  }
  seconds = seconds_since(t0);
  ck.expect(seconds < 10.0, "runtime " + fmt("%.3f", seconds) + " s >= 10 s");
  if (ck.count == 0) ck.fails << "max deviation " << fmt("%.3g", worst);
}

bool theorem_covered(const Basis& basis) {
  if (check_pairwise_disjoint(basis).holds) return true;
  if (check_finite_intersection_signed(basis).decision == Decision::Holds) return true;
  return basis.size() == 2 && find_disjoint_rotation(basis).has_value();
}

// C3 + C4: convergence from four starts, Fejér monotonicity of every run.
void c3c4(const Ctx& ctx, Checker& ck3, double& sec3, Checker& ck4, double& sec4) {
  const std::size_t n = kDefaultTruncation;
  EngineOptions o;
  o.tol_residual = 1e-8;
  o.max_iters = ctx.opt.max_iters.value_or(100000);
  o.snapshot_stride = 100;
  const std::vector<std::string> starts = {"e1", "e3", "e4", "nonneg:" + std::to_string(kSeed)};
  std::size_t runs = 0, worst_iters = 0, fejer_pairs = 0;
  sec3 = sec4 = 0.0;
  for (const auto& e : ctx.entries) {
    auto basis = build_basis(e, n);
    if (!theorem_covered(*basis)) continue;
    for (const auto& s : starts) {
      const auto t0 = Clock::now();
      const IterationTrace tr = run_apm(make_problem(basis, s, o));
      sec3 += seconds_since(t0);
      ++runs;
      worst_iters = std::max(worst_iters, tr.iterations());
      ck3.expect(tr.terminal_status == TerminalStatus::Converged && tr.final_residual() <= 1e-8,
                 e.id + " from " + s + ": " + to_string(tr.terminal_status) + " after " +
                     std::to_string(tr.iterations()) + " steps, residual " + fmt("%.3g", tr.final_residual()));
      const auto t1 = Clock::now();
      const FejerReport fr = check_fejer(tr, SeqVec::zeros(n));
      sec4 += seconds_since(t1);
      fejer_pairs += fr.pairs_checked;
      ck4.expect(fr.holds() && fr.used_step_norms,
                 e.id + " from " + s + ": " + std::to_string(fr.violations.size()) + " Fejér violations");
    }
  }
  ck3.expect(runs > 0, "no covered catalog instance");
  ck3.expect(sec3 < 60.0, "runtime " + fmt("%.3f", sec3) + " s >= 60 s");
  if (ck3.count == 0) ck3.fails << runs << " runs, at most " << worst_iters << " iterations";
  if (ck4.count == 0) ck4.fails << fejer_pairs << " monotonicity comparisons";
}

// C5: checker facts on the worked examples.
void c5(const Ctx& ctx, Checker& ck, double& seconds) {
  const auto t0 = Clock::now();
  const std::size_t n = kDefaultTruncation;
  const auto b32 = build_basis(ctx.get("remark-3.2-harmonic"), n);
  const auto b42 = build_basis(ctx.get("remark-4.2-signed"), n);
  const auto b34 = build_basis(ctx.get("remark-3.4-geometric"), n);
  const auto b35 = build_basis(ctx.get("remark-3.5-general"), n);

  const BB1Result r32 = check_bb_condition1(*b32);
  ck.expect(!r32.holds && r32.has_witness(4), "remark-3.2: Q(e4) not among the BB1 witnesses");
  const BB1Result r42 = check_bb_condition1(*b42);
  ck.expect(!r42.holds && r42.has_witness(3), "remark-4.2: Q(e3) not among the BB1 witnesses");

  const BB2Result c42 = check_bb_condition2_codim2(*b42);
  ck.expect(c42.status == BB2Status::Fails && c42.certificate.has_value(), "remark-4.2: BB2 did not fail with a certificate");
  if (c42.certificate) {
    const SeqVec& x = c42.certificate->vector;
    const SeqVec xn = (1.0 / norm(x)) * x;
    const double dev = max_abs_diff(xn, (*b42)[0]);
    ck.expect(dev <= 1e-10, "remark-4.2: certificate differs from v1 by " + fmt("%.3g", dev));
  }

  ck.expect(check_pairwise_disjoint(*b32).holds, "remark-3.2 not disjoint");
  ck.expect(!check_pairwise_disjoint(*b42).holds, "remark-4.2 reported disjoint");
  ck.expect(!check_pairwise_disjoint(*b34).holds, "remark-3.4 (unrotated) reported disjoint");
  ck.expect(!check_pairwise_disjoint(*b35).holds, "remark-3.5 (unrotated) reported disjoint");
  for (const auto& [label, b] : {std::pair{"remark-3.4", b34}, std::pair{"remark-3.5", b35}}) {
    const auto rot = find_disjoint_rotation(*b);
    ck.expect(rot && check_pairwise_disjoint(rot->basis).holds, std::string(label) + " rotated basis not disjoint");
  }
  seconds = seconds_since(t0);
}

// C6: rotation finder metrics.
void c6(const Ctx& ctx, Checker& ck, double& seconds) {
  const auto t0 = Clock::now();
  const std::size_t n = kDefaultTruncation;
  double worst_q = 0.0, worst_res = 0.0;
  for (const char* id : {"remark-3.4-geometric", "remark-3.5-general"}) {
    const auto basis = build_basis(ctx.get(id), n);
    const auto rot = find_disjoint_rotation(*basis);
    if (!rot) {
      ck.expect(false, std::string(id) + ": no rotation found");
      continue;
    }
    ck.expect(check_pairwise_disjoint(rot->basis).holds, std::string(id) + ": rotated supports overlap");
    const double res = orthonormality_residual(rot->basis.vectors());
    worst_res = std::max(worst_res, res);
    ck.expect(res <= 1e-9, std::string(id) + ": orthonormality residual " + fmt("%.3g", res));
    for (std::size_t t = 0; t < 100; ++t) {
      auto u = uniform_doubles(kSeed + t, n);
      for (auto& x : u) x = 2 * x - 1;
      const SeqVec x(std::move(u));
      const double d = norm(q_operator(*basis, x) - q_operator(rot->basis, x));
      worst_q = std::max(worst_q, d);
    }
    ck.expect(worst_q <= 1e-9, std::string(id) + ": Q disagreement " + fmt("%.3g", worst_q));
  }
  seconds = seconds_since(t0);
  if (ck.count == 0) ck.fails << "residual " << fmt("%.3g", worst_res) << ", Q deviation " << fmt("%.3g", worst_q);
}

// C7: projection operator properties on random vectors.
void c7(const Ctx& ctx, Checker& ck, double& seconds) {
  const auto t0 = Clock::now();
  const std::size_t n = 128, total = 10000;
  std::vector<std::shared_ptr<const Basis>> bases;
  std::vector<std::vector<double>> dense;  // I - V V^T, row-major
  for (const auto& e : ctx.entries) {
    bool fits = true;
    for (const auto& g : e.generators) fits = fits && g.min_truncation() <= n;
    if (!fits) continue;
    auto b = build_basis(e, n);
    std::vector<double> m(n * n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        double s = r == c ? 1.0 : 0.0;
        for (const auto& v : b->vectors()) s -= v.entries()[r] * v.entries()[c];
        m[r * n + c] = s;
      }
    }
    bases.push_back(std::move(b));
    dense.push_back(std::move(m));
  }
  ck.expect(!bases.empty(), "no catalog basis fits truncation 128");
  double worst = 0.0;
  std::vector<double> prev;
  for (std::size_t t = 0; t < total && !bases.empty(); ++t) {
    const std::size_t which = t % bases.size();
    const Basis& b = *bases[which];
    auto u = uniform_doubles(kSeed * 31 + t, n);
    for (auto& x : u) x = 2 * x - 1;
    const SeqVec x(u);
    const SeqVec pa = project_subspace(b, x);
    const SeqVec pb = project_cone(x);
    const SeqVec q = q_operator(b, x);
    worst = std::max(worst, max_abs_diff(project_subspace(b, pa), pa));
    worst = std::max(worst, max_abs_diff(project_cone(pb), pb));
    const double x2 = dot(x.entries(), x.entries());
    worst = std::max(worst, std::abs(x2 - dot(pa.entries(), pa.entries()) - dot(q.entries(), q.entries())));
    const auto& m = dense[which];
    double dd = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < n; ++c) s += m[r * n + c] * u[c];
      dd = std::max(dd, std::abs(s - pa.entries()[r]));
    }
    worst = std::max(worst, dd);
    if (!prev.empty()) {
      const SeqVec y(prev);
      const SeqVec d = pb - project_cone(y);
      const double lhs = dot(d.entries(), d.entries());
      const double rhs = dot(d.entries(), (x - y).entries());
      worst = std::max(worst, lhs - rhs);
    }
    prev = std::move(u);
  }
  ck.expect(worst <= 1e-10, "largest property violation " + fmt("%.3g", worst));
  seconds = seconds_since(t0);
  ck.expect(seconds < 5.0, "runtime " + fmt("%.3f", seconds) + " s >= 5 s");
  if (ck.count == 0) ck.fails << total << " vectors, largest deviation " << fmt("%.3g", worst);
}

// C8: partition of the signed pair and the behavior on its common support.
void c8(const Ctx& ctx, Checker& ck, double& seconds) {
  const auto t0 = Clock::now();
  const std::size_t n = kDefaultTruncation;
  const auto& entry = ctx.get("remark-4.2-signed");
  const auto basis = build_basis(entry, n);
  const PartitionVIZNP p = partition_vizinp(*basis);
  ck.expect(p.symbolic, "partition not symbolic");
  ck.expect(p.I == IndexSet::finite({1, 2}), "I = " + p.I.pattern_name());
  ck.expect(p.P.complement().is_finite(), "P not cofinite: " + p.P.pattern_name());
  ck.expect(p.N.empty() && p.V.empty() && p.Z.empty(), "N, V, Z not all empty");

  // fixed horizon: no early stop, every step stored over the last 100
  EngineOptions o;
  o.tol_residual = 0.0;
  o.stall_window = 0;
  o.max_iters = ctx.opt.max_iters.value_or(10000);
  o.snapshot_stride = 0;
  const std::string start = entry.default_start.empty() ? "e3" : entry.default_start;
  const std::size_t steps = run_apm(make_problem(basis, start, o)).iterations();
  // the run may hit an exact fixed point before the horizon; rerun with the window placed on its end
  o.dense_from = steps > 100 ? steps - 100 : 1;
  const IterationTrace tr = run_apm(make_problem(basis, start, o));
  ck.expect(tr.iterations() == steps, "rerun is not deterministic");
  ck.expect(steps >= 100, "only " + std::to_string(steps) + " steps recorded");
  const MonotoneReport mono = check_componentwise_monotone(tr, p.V);
  ck.expect(mono.monotone(), "not monotone on V");
  double worst = 0.0;
  std::size_t pairs = 0;
  const auto idx = p.I.members_up_to(n);
  for (std::size_t i = 1; i < tr.snapshots.size(); ++i) {
    const auto& a = tr.snapshots[i - 1];
    const auto& b = tr.snapshots[i];
    if (b.j != a.j + 1) continue;
    ++pairs;
    for (std::size_t k : idx) worst = std::max(worst, std::abs(b.b.coord(k) - a.b.coord(k)));
  }
  ck.expect(pairs >= 99, "only " + std::to_string(pairs) + " consecutive steps in the final window");
  ck.expect(worst < 1e-10, "Cauchy increment on I over the final steps " + fmt("%.3g", worst));
  const CaseReport cr = classify_case(tr, p.signed_index, p.P);
  seconds = seconds_since(t0);
  if (ck.count == 0) {
    ck.fails << "I = " << p.I.pattern_name() << ", P = " << p.P.pattern_name() << ", " << steps
             << " steps, final increment on I " << fmt("%.3g", worst) << ", " << to_string(cr.kind);
  }
}

CriterionResult finish(const char* id, const char* title, Checker& ck, double seconds) {
  CriterionResult r{id, title, ck.count == 0, ck.fails.str(), seconds};
  if (ck.count > 6) r.detail += "; ... (" + std::to_string(ck.count) + " failures)";
  return r;
}

CriterionResult guarded(const char* id, const char* title, const std::function<void(Checker&, double&)>& body) {
  Checker ck;
  double seconds = 0.0;
  try {
    body(ck, seconds);
  } catch (const std::exception& e) {
    ck.expect(false, std::string("exception: ") + e.what());
  }
  return finish(id, title, ck, seconds);
}

}  // namespace

SuiteResult run_suite(const SuiteOptions& options) {
  Ctx ctx{options, options.catalog_path ? load_catalog_file(*options.catalog_path) : catalog()};
  SuiteResult out;
  out.criteria.push_back(guarded("C1", "normalization of the generator vectors",
                                 [&](Checker& ck, double& s) { c1(ctx, ck, s); }));
  out.criteria.push_back(guarded("C2", "decomposition reproduces the direct iteration",
                                 [&](Checker& ck, double& s) { c2(ctx, ck, s); }));
  Checker ck3, ck4;
  double s3 = 0.0, s4 = 0.0;
  try {
    c3c4(ctx, ck3, s3, ck4, s4);
  } catch (const std::exception& e) {
    ck3.expect(false, std::string("exception: ") + e.what());
    ck4.expect(false, std::string("exception: ") + e.what());
  }
  out.criteria.push_back(finish("C3", "convergence of covered instances", ck3, s3));
  out.criteria.push_back(finish("C4", "Fejér monotonicity with y = 0", ck4, s4));
  out.criteria.push_back(guarded("C5", "structural checker facts", [&](Checker& ck, double& s) { c5(ctx, ck, s); }));
  out.criteria.push_back(guarded("C6", "disjoint rotation finder", [&](Checker& ck, double& s) { c6(ctx, ck, s); }));
  out.criteria.push_back(guarded("C7", "projection operator properties", [&](Checker& ck, double& s) { c7(ctx, ck, s); }));
  out.criteria.push_back(guarded("C8", "partition of the signed pair", [&](Checker& ck, double& s) { c8(ctx, ck, s); }));
  return out;
}

}  // namespace apm
