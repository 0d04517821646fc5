#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"

#include "apm/errors.hpp"
#include "apm/harness/catalog.hpp"
#include "apm/structure/analysis.hpp"
#include "apm/structure/decomposition.hpp"
#include "apm/structure/rotation.hpp"

using namespace apm;

namespace {

std::shared_ptr<const Basis> from_lists(const std::vector<std::vector<double>>& lists) {
  std::vector<GeneratorDesc> g;
  for (const auto& l : lists) g.push_back(finite_list(l));
  std::size_t n = 0;
  for (const auto& l : lists) n = std::max(n, l.size());
  return build_basis(g, n);
}

// largest over a theta grid of the smallest entry of cos(t) v1 + sin(t) v2
double grid_best_min_entry(const Basis& b, double step) {
  double best = -1e300;
  for (double t = 0.0; t < 2 * std::numbers::pi; t += step) {
    const SeqVec x = std::cos(t) * b[0] + std::sin(t) * b[1];
    double m = 1e300;
    for (double e : x.entries()) m = std::min(m, e);
    best = std::max(best, m);
  }
  return best;
}

std::set<std::size_t> brute_bb1(const Basis& b, std::size_t up_to) {
  std::set<std::size_t> out;
  for (std::size_t k = 1; k <= up_to; ++k) {
    const SeqVec q = q_operator(b, SeqVec::unit(b.truncation(), k));
    for (double e : q.entries()) {
      if (e < -kNegativeEntryTol) {
        out.insert(k);
        break;
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("pairwise disjointness") {
  CHECK(check_pairwise_disjoint(*build_basis(find_entry("remark-3.2-harmonic"), 256)).holds);
  CHECK(check_pairwise_disjoint(*build_basis(find_entry("disjoint-triple"), 16)).holds);
  const auto r = check_pairwise_disjoint(*build_basis(find_entry("remark-4.2-signed"), 256));
  CHECK_FALSE(r.holds);
  REQUIRE(r.overlaps.size() == 1);
  CHECK(r.overlaps[0].overlap == IndexSet::finite({1, 2}));
  CHECK_FALSE(check_pairwise_disjoint(*build_basis(find_entry("remark-3.4-geometric"), 256)).holds);
}

TEST_CASE("finite intersection with an eventually signed vector") {
  const auto r = check_finite_intersection_signed(*build_basis(find_entry("remark-4.2-signed"), 256));
  CHECK(r.decision == Decision::Holds);
  CHECK(r.signed_index == 1);
  CHECK(r.sign == 1);
  CHECK(r.onset == 3);
  const auto t = check_finite_intersection_signed(*build_basis(find_entry("signed-triple"), 256));
  CHECK(t.decision == Decision::Holds);
  CHECK(t.signed_index == 2);
  CHECK(t.onset == 5);
  // the harmonic pair has no vector of one eventual sign besides v1, and v2 alternates
  const auto h = check_finite_intersection_signed(*build_basis(find_entry("remark-3.2-harmonic"), 256));
  CHECK(h.decision == Decision::Fails);
  // both vectors sign-changing with infinite overlap
  const auto g = check_finite_intersection_signed(*build_basis(find_entry("remark-3.4-geometric"), 256));
  CHECK(g.decision != Decision::Holds);
}

TEST_CASE("BB1 witnesses on the worked examples") {
  const auto b32 = build_basis(find_entry("remark-3.2-harmonic"), 1024);
  const auto r32 = check_bb_condition1(*b32);
  CHECK_FALSE(r32.holds);
  CHECK(r32.has_witness(4));
  const auto b42 = build_basis(find_entry("remark-4.2-signed"), 1024);
  const auto r42 = check_bb_condition1(*b42);
  CHECK_FALSE(r42.holds);
  CHECK(r42.has_witness(3));
  // Q(e3) = (1/2) sqrt(3/7) v2 has the entry -(1/2)(3/7) at index 2
  for (const auto& w : r42.witnesses) {
    if (w.k == 3) {
      CHECK(w.index == 2);
      CHECK(w.value == doctest::Approx(-1.5 / 7.0).epsilon(1e-12));
    }
  }
  for (const auto* b : {b32.get(), b42.get()}) {
    const auto r = check_bb_condition1(*b, 120);
    const auto brute = brute_bb1(*b, 120);
    std::set<std::size_t> got;
    for (const auto& w : r.witnesses) {
      if (w.k <= 120) got.insert(w.k);
    }
    CHECK(got == brute);
  }
}

TEST_CASE("BB1 holds for cone bases and rotatable pairs") {
  const auto s = check_bb_condition1(*build_basis(find_entry("standard-basis-pair"), 32));
  CHECK(s.holds);
  CHECK(s.analytic);
  const auto g = check_bb_condition1(*build_basis(find_entry("remark-3.4-geometric"), 256));
  CHECK(g.holds);
  CHECK(g.via_rotation);
  CHECK(check_bb_condition1(*build_basis(find_entry("remark-3.5-general"), 256)).holds);
  CHECK(brute_bb1(*build_basis(find_entry("remark-3.5-general"), 64), 64).empty());
}

TEST_CASE("BB2 on the signed pair gives the cone vector") {
  const auto b = build_basis(find_entry("remark-4.2-signed"), 512);
  const auto r = check_bb_condition2_codim2(*b);
  CHECK(r.status == BB2Status::Fails);
  REQUIRE(r.certificate);
  const SeqVec& x = r.certificate->vector;
  CHECK(max_abs_diff((1.0 / norm(x)) * x, (*b)[0]) <= 1e-10);
  CHECK(r.certificate->symbolic_verified);
  CHECK(check_bb_condition2_codim2(*build_basis(find_entry("disjoint-triple"), 16)).status == BB2Status::Unsupported);
}

TEST_CASE("BB2 against a theta grid") {
  // alternating pairs: only the zero combination is non-negative
  const auto h = from_lists({{1, -1, 0, 0}, {0, 0, 1, -1}});
  const auto rh = check_bb_condition2_codim2(*h);
  CHECK(rh.status == BB2Status::Holds);
  CHECK_FALSE(rh.certificate.has_value());
  CHECK(grid_best_min_entry(*h, 1e-4) < 0.0);

  std::mt19937_64 g(17);
  std::normal_distribution<double> d;
  int holds = 0, fails = 0;
  for (int t = 0; t < 60; ++t) {
    std::vector<double> a(6), c(6);
    for (auto& x : a) x = d(g);
    for (auto& x : c) x = d(g);
    const auto b = from_lists({a, c});
    const auto r = check_bb_condition2_codim2(*b);
    REQUIRE(r.status != BB2Status::Unsupported);
    const double best = grid_best_min_entry(*b, 1e-4);
    if (r.status == BB2Status::Holds) {
      ++holds;
      CHECK(best < 1e-9);
    } else {
      ++fails;
      REQUIRE(r.certificate);
      double m = 1e300;
      for (double e : r.certificate->vector.entries()) m = std::min(m, e);
      CHECK(m >= -1e-12);
      CHECK(norm(r.certificate->vector) > 0.5);
      CHECK(best > -1e-3);
    }
    if (best > 1e-6) CHECK(r.status == BB2Status::Fails);
  }
  CHECK(holds > 0);
  CHECK(fails > 0);
}

TEST_CASE("partition of the signed pair") {
  const auto p = partition_vizinp(*build_basis(find_entry("remark-4.2-signed"), 256));
  CHECK(p.symbolic);
  CHECK(p.I == IndexSet::finite({1, 2}));
  CHECK(p.P == IndexSet::from(3));
  CHECK(p.N.empty());
  CHECK(p.V.empty());
  CHECK(p.Z.empty());
  CHECK(p.cone_index == 0);
  CHECK(p.signed_index == 1);
  const auto t = partition_vizinp(*build_basis(find_entry("standard-basis-pair"), 16));
  CHECK(t.Z == IndexSet::from(3));
}

TEST_CASE("disjoint rotations") {
  for (double alpha : {0.25, 0.5, 0.75}) {
    const auto b = build_basis(geometric_pair_entry(alpha), 256);
    const auto rot = find_disjoint_rotation(*b);
    REQUIRE(rot);
    // (cos, sin) proportional to (1, alpha)
    CHECK(std::abs(rot->cos_theta * alpha - rot->sin_theta) <= 1e-12);
    CHECK(rot->cos_theta > 0.0);
    const auto& w = rot->basis;
    CHECK(check_pairwise_disjoint(w).holds);
    CHECK(support(w[0]) == IndexSet::odd());
    CHECK(support(w[1]) == IndexSet::even());
    CHECK(w.ortho_residual() <= 1e-12);
    for (std::size_t k = 1; k <= 40; ++k) {
      const SeqVec x = SeqVec::unit(256, k);
      CHECK(max_abs_diff(q_operator(*b, x), q_operator(w, x)) <= 1e-12);
    }
  }
  const auto b35 = build_basis(find_entry("remark-3.5-general"), 256);
  const auto r35 = find_disjoint_rotation(*b35);
  REQUIRE(r35);
  CHECK(std::abs(r35->cos_theta) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(std::abs(r35->sin_theta) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(check_pairwise_disjoint(r35->basis).holds);

  const auto id = find_disjoint_rotation(*build_basis(find_entry("remark-3.2-harmonic"), 128));
  REQUIRE(id);
  CHECK(std::abs(id->sin_theta) <= 1e-15);
  CHECK_FALSE(find_disjoint_rotation(*build_basis(find_entry("remark-4.2-signed"), 128)).has_value());
}

TEST_CASE("decomposition matches the direct iteration") {
  auto compare = [](const ProblemInstance& p) {
    const auto d = run_apm(p);
    const auto s = solve_by_decomposition(p);
    REQUIRE(d.iterations() == s.iterations());
    CHECK(d.terminal_status == s.terminal_status);
    REQUIRE(d.snapshots.size() == s.snapshots.size());
    for (std::size_t j = 0; j < d.snapshots.size(); ++j) {
      REQUIRE(d.snapshots[j].j == s.snapshots[j].j);
      REQUIRE(max_abs_diff(d.snapshots[j].b, s.snapshots[j].b) <= 1e-12);
    }
    for (std::size_t j = 0; j < d.steps.size(); ++j) {
      REQUIRE(std::abs(d.steps[j].dist_to_A - s.steps[j].dist_to_A) <= 1e-12);
    }
  };
  EngineOptions o;
  o.snapshot_stride = 1;
  o.max_iters = 400;
  const auto b32 = build_basis(find_entry("remark-3.2-harmonic"), 200);
  compare(ProblemInstance::make(b32, SeqVec::unit(200, 4), o));
  const auto b3 = build_basis(find_entry("disjoint-triple"), 24);
  compare(ProblemInstance::make(b3, SeqVec::unit(24, 9), o));
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    std::vector<double> x(24);
    for (auto& e : x) e = u(g);
    compare(ProblemInstance::make(b3, SeqVec(x), o));
  }
  CHECK_THROWS_AS(solve_by_decomposition(ProblemInstance::make(build_basis(find_entry("remark-4.2-signed"), 32),
                                                               SeqVec::unit(32, 3))),
                  PreconditionViolated);
}

TEST_CASE("analyzer verdicts on every catalog entry") {
  for (const auto& e : catalog()) {
    CAPTURE(e.id);
    const auto r = analyze(*build_basis(e, 512));
    for (Verdict v : e.expected_verdicts) CHECK(r.has(v));
    CHECK(std::is_sorted(r.verdicts.begin(), r.verdicts.end()));
    CHECK(r.facts.size() == e.generators.size());
  }
  for (Verdict v : {Verdict::PairwiseDisjoint, Verdict::FiniteIntersectionSigned, Verdict::BB1_QPreservesCone,
                    Verdict::BB2_SpanMeetsConeTrivially, Verdict::Unknown}) {
    CHECK(verdict_from_string(to_string(v)) == v);
  }
  CHECK_FALSE(verdict_from_string("nope").has_value());
}
