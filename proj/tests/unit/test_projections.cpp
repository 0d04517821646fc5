#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "apm/errors.hpp"
#include "apm/harness/catalog.hpp"
#include "apm/projections/basis.hpp"

using namespace apm;

namespace {

std::vector<double> random_vec(std::mt19937_64& g, std::size_t n, double lo = -1.0) {
  std::uniform_real_distribution<double> d(lo, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(g);
  return v;
}

// (I - V V^T) x from an explicit matrix
std::vector<double> dense_pa(const Basis& b, const std::vector<double>& x) {
  const std::size_t n = b.truncation();
  std::vector<double> m(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      double s = r == c ? 1.0 : 0.0;
      for (const auto& v : b.vectors()) s -= v.entries()[r] * v.entries()[c];
      m[r * n + c] = s;
    }
  }
  std::vector<double> y(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) y[r] += m[r * n + c] * x[c];
  }
  return y;
}

}  // namespace

TEST_CASE("orthonormalization examples") {
  SUBCASE("e1, e1 + e2 gives e1, e2") {
    const std::vector<SeqVec> raw = {SeqVec({1.0, 0.0}), SeqVec({1.0, 1.0})};
    const Basis b = orthonormalize(raw);
    CHECK(max_abs_diff(b[0], SeqVec({1.0, 0.0})) <= 1e-15);
    CHECK(max_abs_diff(b[1], SeqVec({0.0, 1.0})) <= 1e-15);
  }
  SUBCASE("dependent family") {
    const std::vector<SeqVec> raw = {SeqVec({1.0, 0.0}), SeqVec({2.0, 0.0})};
    CHECK_THROWS_AS(orthonormalize(raw), DependentFamily);
  }
  SUBCASE("an already orthonormal disjoint pair is unchanged") {
    const std::size_t n = 200;
    const auto& e = find_entry("remark-3.2-harmonic");
    std::vector<SeqVec> raw;
    for (const auto& g : e.generators) {
      const SeqVec v = evaluate_generator(g, n);
      raw.push_back((1.0 / norm(v)) * v);  // unit at this truncation
    }
    const Basis b = orthonormalize(raw);
    for (std::size_t i = 0; i < 2; ++i) CHECK(max_abs_diff(b[i], raw[i]) <= 1e-12);
    CHECK(b.ortho_residual() <= 1e-12);
  }
  SUBCASE("mismatched truncations are rejected") {
    CHECK_THROWS(Basis::from_orthonormal({SeqVec({1.0}), SeqVec({0.0, 1.0})}));
  }
  SUBCASE("origins follow the combination") {
    const auto b = build_basis(find_entry("remark-4.2-signed"), 64);
    for (const auto& v : b->vectors()) {
      REQUIRE(v.origin());
      for (std::size_t k = 1; k <= 64; ++k) CHECK(v.origin()->value_at(k) == doctest::Approx(v.coord(k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("Q on the signed pair at index 3") {
  const auto b = build_basis(find_entry("remark-4.2-signed"), 512);
  const SeqVec q = q_operator(*b, SeqVec::unit(512, 3));
  const SeqVec expect = (0.5 * std::sqrt(3.0 / 7.0)) * (*b)[1];
  CHECK(max_abs_diff(q, expect) <= 1e-14);
  CHECK(max_abs_diff(q_operator(*b, (*b)[0]), (*b)[0]) <= 1e-15);
  // x orthogonal to both vectors
  std::vector<double> x(512, 0.0);
  x[0] = 1.0;
  x[1] = -1.0;  // orthogonal to v1; <x, v2> = 2 sqrt(3/7), so remove it
  SeqVec y = SeqVec(x) - (dot(x, (*b)[1].entries()) * (*b)[1]);
  CHECK(norm(q_operator(*b, y)) <= 1e-14);
}

TEST_CASE("P_A on the harmonic pair against a dense matrix") {
  const std::size_t n = 200;
  const auto b = build_basis(find_entry("remark-3.2-harmonic"), n);
  const SeqVec e4 = SeqVec::unit(n, 4);
  const SeqVec pa = project_subspace(*b, e4);
  const auto dense = dense_pa(*b, std::vector<double>(e4.entries().begin(), e4.entries().end()));
  CHECK(max_abs_diff(pa, SeqVec(dense)) <= 1e-14);
  // Q(e4) = <e4, v2> v2 with <e4, v2> the normalized fourth entry
  CHECK(max_abs_diff(pa, e4 - ((*b)[1].coord(4)) * (*b)[1]) <= 1e-15);
}

TEST_CASE("Q(e4) on the harmonic pair approaches the analytic constant") {
  const std::size_t n = 200000;
  const auto b = build_basis(find_entry("remark-3.2-harmonic"), n);
  const double c = -std::sqrt(6.0) / (2 * std::numbers::pi);
  CHECK((*b)[1].coord(4) == doctest::Approx(c).epsilon(1e-5));
}

TEST_CASE("projection properties on random vectors") {
  std::mt19937_64 g(5);
  for (const char* id : {"remark-3.2-harmonic", "remark-4.2-signed", "signed-triple"}) {
    const auto b = build_basis(find_entry(id), 96);
    for (int t = 0; t < 200; ++t) {
      const SeqVec x(random_vec(g, 96));
      const SeqVec y(random_vec(g, 96));
      const SeqVec pa = project_subspace(*b, x);
      const SeqVec q = q_operator(*b, x);
      CHECK(max_abs_diff(project_subspace(*b, pa), pa) <= 1e-12);
      CHECK(max_abs_diff(q_operator(*b, q), q) <= 1e-12);
      for (const auto& v : b->vectors()) CHECK(std::abs(dot(pa.entries(), v.entries())) <= 1e-10);
      CHECK(std::abs(dot(x.entries(), x.entries()) - dot(pa.entries(), pa.entries()) - dot(q.entries(), q.entries())) <= 1e-10);
      const SeqVec px = project_cone(x), py = project_cone(y);
      CHECK(max_abs_diff(project_cone(px), px) == 0.0);
      const SeqVec d = px - py;
      CHECK(dot(d.entries(), d.entries()) <= dot(d.entries(), (x - y).entries()) + 1e-12);
    }
  }
}

TEST_CASE("cone projection is the nearest cone point") {
  CHECK(max_abs_diff(project_cone(SeqVec({-1.0, 2.0})), SeqVec({0.0, 2.0})) == 0.0);
  const SeqVec in({0.0, 3.0, 1.0});
  CHECK(max_abs_diff(project_cone(in), in) == 0.0);
  std::mt19937_64 g(9);
  for (int t = 0; t < 20; ++t) {
    const SeqVec x(random_vec(g, 50));
    const double best = norm(x - project_cone(x));
    for (int s = 0; s < 1000; ++s) {
      const SeqVec c(random_vec(g, 50, 0.0));
      REQUIRE(best <= norm(x - c) + 1e-15);
    }
  }
}
