#include <cmath>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "apm/engine/apm.hpp"
#include "apm/engine/monitors.hpp"
#include "apm/engine/trace_io.hpp"
#include "apm/errors.hpp"
#include "apm/harness/catalog.hpp"

using namespace apm;

namespace {

std::shared_ptr<const Basis> single(std::vector<double> v) {
  return std::make_shared<const Basis>(Basis::from_orthonormal({SeqVec(std::move(v))}));
}

EngineOptions every_step(std::size_t iters) {
  EngineOptions o;
  o.snapshot_stride = 1;
  o.max_iters = iters;
  return o;
}

}  // namespace

TEST_CASE("a feasible start is a fixed point") {
  const auto b = build_basis(find_entry("remark-3.2-harmonic"), 64);
  const auto t = run_apm(ProblemInstance::make(b, SeqVec::zeros(64)));
  CHECK(t.terminal_status == TerminalStatus::Converged);
  CHECK(t.iterations() == 1);
  CHECK(norm(t.limit_estimate) == 0.0);
}

TEST_CASE("codimension one with v = (1,1)/sqrt2 halves e1 every step") {
  const double r = 1.0 / std::sqrt(2.0);
  const auto b = single({r, r});
  // b_{j+1} = (b_j - <b_j,v> v)^+: with b_j = t e1, a = (t/2, -t/2), b_{j+1} = (t/2) e1
  const auto t = run_apm(ProblemInstance::make(b, SeqVec::unit(2, 1), every_step(40)));
  double expect = 1.0;
  for (std::size_t j = 1; j < t.snapshots.size(); ++j) {
    expect *= 0.5;
    CHECK(t.snapshots[j].b.coord(1) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(t.snapshots[j].b.coord(2) == 0.0);
  }
  const auto c = run_codim1(SeqVec({r, r}), SeqVec::unit(2, 1), every_step(40));
  CHECK(c.iterations() == t.iterations());
}

TEST_CASE("run_codim1 reproduces run_apm with one vector bit for bit") {
  const std::size_t n = 300;
  const auto b = build_basis(find_entry("codim1-cone"), n);
  for (const char* s : {"e1", "e5"}) {
    SeqVec start = SeqVec::unit(n, s[1] - '0');
    EngineOptions o = every_step(3000);
    const auto x = run_apm(ProblemInstance::make(b, start, o));
    const auto y = run_codim1((*b)[0], start, o);
    REQUIRE(x.iterations() == y.iterations());
    CHECK(x.terminal_status == y.terminal_status);
    for (std::size_t j = 0; j < x.steps.size(); ++j) {
      REQUIRE(x.steps[j].dist_to_A == y.steps[j].dist_to_A);
      REQUIRE(x.steps[j].step_delta == y.steps[j].step_delta);
      REQUIRE(x.steps[j].q_coefficients == y.steps[j].q_coefficients);
    }
    for (std::size_t j = 0; j < x.snapshots.size(); ++j) {
      REQUIRE(max_abs_diff(x.snapshots[j].b, y.snapshots[j].b) == 0.0);
    }
  }
}

TEST_CASE("run_codim1 edge cases") {
  const auto e = run_codim1(SeqVec({1.0, 0.0}), SeqVec({0.0, 1.0}));
  CHECK(e.terminal_status == TerminalStatus::Converged);
  CHECK(max_abs_diff(e.limit_estimate, SeqVec({0.0, 1.0})) == 0.0);
  CHECK_THROWS_AS(run_codim1(SeqVec({1.0, 1.0}), SeqVec({0.0, 1.0})), PreconditionViolated);

  // non-negative v: the iterates decrease entrywise
  const std::size_t n = 128;
  const auto b = build_basis(find_entry("codim1-cone"), n);
  const auto t = run_codim1((*b)[0], SeqVec(std::vector<double>(n, 0.5)), every_step(500));
  CHECK(check_componentwise_monotone(t, IndexSet::all()).monotone());
}

TEST_CASE("trace bookkeeping") {
  const std::size_t n = 200;
  const auto b = build_basis(find_entry("remark-3.2-harmonic"), n);
  EngineOptions o;
  o.snapshot_stride = 7;
  const auto t = run_apm(ProblemInstance::make(b, SeqVec::unit(n, 4), o));
  CHECK(t.terminal_status == TerminalStatus::Converged);
  CHECK(t.final_residual() <= 1e-10);
  for (std::size_t j = 0; j < t.steps.size(); ++j) {
    CHECK(t.steps[j].j == j + 1);
    CHECK(t.steps[j].q_coefficients.size() == 2);
  }
  CHECK(t.snapshots.front().j == 0);
  CHECK_FALSE(t.snapshots.front().a.has_value());
  CHECK(t.snapshots.back().j == t.iterations());
  for (const auto& s : t.snapshots) {
    CHECK((s.j % 7 == 0 || s.j == t.iterations()));
    for (double x : s.b.entries()) CHECK(x >= 0.0);
    if (s.a) CHECK(norm(q_operator(*b, *s.a)) <= 1e-10 * norm(*s.a) + 1e-12);
  }
  CHECK(max_abs_diff(t.limit_estimate, t.snapshots.back().b) == 0.0);

  EngineOptions z;
  z.snapshot_stride = 0;
  const auto u = run_apm(ProblemInstance::make(b, SeqVec::unit(n, 4), z));
  CHECK(u.snapshots.size() == 2);

  EngineOptions d;
  d.snapshot_stride = 0;
  d.max_iters = 50;
  d.dense_from = 41;
  d.tol_residual = 0.0;
  d.stall_window = 0;
  const auto w = run_apm(ProblemInstance::make(b, SeqVec::unit(n, 4), d));
  CHECK(w.terminal_status == TerminalStatus::MaxIters);
  CHECK(w.snapshots.size() == 11);
}

TEST_CASE("shift-free consistency under doubled truncation") {
  // geometric tails below 1e-14 at both truncations
  const auto& e = find_entry("remark-4.2-signed");
  const auto b1 = build_basis(e, 128), b2 = build_basis(e, 256);
  const auto t1 = run_apm(ProblemInstance::make(b1, SeqVec::unit(128, 3)));
  const auto t2 = run_apm(ProblemInstance::make(b2, SeqVec::unit(256, 3)));
  REQUIRE(t1.iterations() == t2.iterations());
  for (std::size_t j = 0; j < t1.steps.size(); ++j) {
    CHECK(std::abs(t1.steps[j].residual() - t2.steps[j].residual()) <= 1e-10);
  }
}

TEST_CASE("stopping rules") {
  // direction almost orthogonal to e2: progress of 1e-18 per step
  const double t = 1e-9;
  const auto b = single({std::cos(t), std::sin(t)});
  EngineOptions o;
  o.tol_residual = 1e-12;
  const auto s = run_apm(ProblemInstance::make(b, SeqVec::unit(2, 2), o));
  CHECK(s.terminal_status == TerminalStatus::Stalled);
  CHECK(s.iterations() == 50);
  o.stall_window = 0;
  o.max_iters = 80;
  const auto m = run_apm(ProblemInstance::make(b, SeqVec::unit(2, 2), o));
  CHECK(m.terminal_status == TerminalStatus::MaxIters);
  CHECK(m.iterations() == 80);
}

TEST_CASE("blow-up is reported") {
  const double r = 1.0 / std::sqrt(2.0);
  const auto b = single({r, r});
  CHECK_THROWS_AS(run_apm(ProblemInstance::make(b, SeqVec({1.7e308, 1.7e308}))), NonFiniteIterate);
}

TEST_CASE("instance validation") {
  const auto b = build_basis(find_entry("disjoint-triple"), 16);
  CHECK_THROWS_AS(ProblemInstance::make(b, SeqVec(std::vector<double>(20, 1.0))), ConfigError);
  EngineOptions o;
  o.max_iters = 0;
  CHECK_THROWS_AS(ProblemInstance::make(b, SeqVec::zeros(16), o), ConfigError);
  const auto p = ProblemInstance::make(b, SeqVec::zeros(3));
  CHECK(p.start.size() == 16);
}

TEST_CASE("parallel map keeps input order") {
  std::vector<ProblemInstance> xs;
  const auto b = build_basis(find_entry("remark-4.2-signed"), 128);
  for (std::size_t k = 1; k <= 9; ++k) xs.push_back(ProblemInstance::make(b, SeqVec::unit(128, k)));
  const auto many = run_apm_many(xs, 4);
  REQUIRE(many.size() == xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto one = run_apm(xs[i]);
    CHECK(one.iterations() == many[i].iterations());
    CHECK(max_abs_diff(one.limit_estimate, many[i].limit_estimate) == 0.0);
  }
}

TEST_CASE("Fejér monitor") {
  const std::size_t n = 200;
  const auto b = build_basis(find_entry("remark-3.2-harmonic"), n);
  EngineOptions o;
  o.snapshot_stride = 1;
  const auto t = run_apm(ProblemInstance::make(b, SeqVec::unit(n, 4), o));
  const auto z = check_fejer(t, SeqVec::zeros(n));
  CHECK(z.holds());
  CHECK(z.used_step_norms);
  const auto l = check_fejer(t, t.limit_estimate);
  CHECK(l.holds());
  CHECK_FALSE(l.used_step_norms);
  CHECK_THROWS_AS(check_fejer(t, SeqVec::unit(n, 1)), NotFeasiblePoint);
}

TEST_CASE("componentwise monotonicity on the signed pair") {
  const std::size_t n = 128;
  const auto b = build_basis(find_entry("remark-4.2-signed"), n);
  EngineOptions o;
  o.snapshot_stride = 1;
  const auto t = run_apm(ProblemInstance::make(b, SeqVec::unit(n, 3), o));
  // V = supp v1 \ supp v2 is empty
  CHECK(check_componentwise_monotone(t, IndexSet()).monotone());
  const auto p = check_componentwise_monotone(t, IndexSet::from(3));
  CHECK(p.pair_monotone.size() == t.snapshots.size() - 1);
  if (p.first_violation) {
    const auto& v = *p.first_violation;
    const auto* from = t.snapshot(v.j_from);
    const auto* to = t.snapshot(v.j_to);
    REQUIRE(from);
    REQUIRE(to);
    CHECK(to->b.coord(v.index) > from->b.coord(v.index) + 1e-12);
  }
}

namespace {

// smallest k with q_j + ... + q_{j+k} >= 0, summed directly
std::optional<std::size_t> brute_crossing(const std::vector<double>& q, std::size_t j) {
  long double s = 0.0L;
  for (std::size_t k = 0; j + k < q.size(); ++k) {
    s += q[j + k];
    if (s >= 0.0L) return k;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("two-case classification against direct window sums") {
  const std::size_t n = 128;
  const auto b = build_basis(find_entry("remark-4.2-signed"), n);
  for (const char* s : {"e3", "e1", "e2"}) {
    EngineOptions o;
    o.snapshot_stride = 1;
    o.max_iters = 10000;
    const auto start = SeqVec::unit(n, s[1] - '0');
    const auto t = run_apm(ProblemInstance::make(b, start, o));
    const CaseReport r = classify_case(t, 1, IndexSet::from(3));
    REQUIRE(r.q.size() == t.iterations() + 1 - r.first_index);
    CHECK(r.first_index == 0);
    for (std::size_t j = 0; j < r.q.size(); ++j) {
      const std::size_t step = r.first_index + j;
      const double direct = step < t.steps.size() ? t.steps[step].q_coefficients[1]
                                                  : dot(t.limit_estimate.entries(), (*b)[1].entries());
      REQUIRE(r.q[j] == direct);
    }
    for (std::size_t j = 0; j < r.crossing_offsets.size(); ++j) {
      const auto k = brute_crossing(r.q, j);
      REQUIRE(k.has_value());
      REQUIRE(*k == r.crossing_offsets[j]);
    }
    if (r.kind == CaseKind::Case1) {
      REQUIRE(r.case1_start.has_value());
      CHECK_FALSE(brute_crossing(r.q, *r.case1_start - r.first_index).has_value());
    }
    CHECK(r.decrease_violations == 0);
    const std::string note = std::string("start ") + s + ": " + to_string(r.kind) + " after " + std::to_string(t.iterations()) + " steps";
    MESSAGE(note);
  }
}

TEST_CASE("two-case classification edge cases") {
  const std::size_t n = 64;
  const auto b = build_basis(find_entry("remark-4.2-signed"), n);
  const auto t0 = run_apm(ProblemInstance::make(b, SeqVec::zeros(n)));
  const auto r0 = classify_case(t0, 1, IndexSet::from(3));
  CHECK(r0.kind == CaseKind::Case2);
  for (auto k : r0.crossing_offsets) CHECK(k == 0);

  // a start outside the cone skips the q of b^0
  const auto tn = run_apm(ProblemInstance::make(b, SeqVec({-1.0, 0.0, 1.0})));
  CHECK(classify_case(tn, 1, IndexSet::from(3)).first_index == 1);
}

TEST_CASE("trace export formats") {
  const auto b = build_basis(find_entry("remark-4.2-signed"), 32);
  EngineOptions o;
  o.snapshot_stride = 5;
  const auto t = run_apm(ProblemInstance::make(b, SeqVec::unit(32, 3), o));
  std::ostringstream csv, plot, snaps;
  write_trace_csv(csv, t);
  write_plot_csv(plot, t);
  write_snapshots_json(snaps, t);
  std::istringstream in(csv.str());
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "j,dist_to_A,dist_to_B,step_delta,norm_b,q_coeff_1,q_coeff_2");
  CHECK(std::count(first.begin(), first.end(), ',') == 6);
  CHECK(first.rfind("1,", 0) == 0);
  // 17 significant digits round-trip
  const std::string cell = format_double(0.1);
  CHECK(cell == "0.10000000000000001");
  CHECK(std::stod(cell) == 0.1);
  CHECK(plot.str().rfind("j,log10_residual\n", 0) == 0);
  const auto j = nlohmann::json::parse(snaps.str());
  CHECK(j["snapshot_stride"] == 5);
  CHECK(j["snapshots"][0]["a"].is_null());
  CHECK(j["snapshots"].size() == t.snapshots.size());
  CHECK(j["snapshots"][1]["b"].size() == 32);
}
