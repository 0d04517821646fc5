#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "doctest.h"

#include "apm/errors.hpp"
#include "apm/l2core/generator.hpp"
#include "apm/l2core/index_set.hpp"
#include "apm/l2core/seq_vec.hpp"
#include "apm/l2core/symbolic.hpp"

using namespace apm;

namespace {

constexpr std::size_t kHorizon = 240;

// membership oracle over 1..kHorizon
using Bits = std::vector<bool>;

Bits bits_of(const std::function<bool(std::size_t)>& pred) {
  Bits b(kHorizon + 1, false);
  for (std::size_t k = 1; k <= kHorizon; ++k) b[k] = pred(k);
  return b;
}

struct Sample {
  IndexSet set;
  Bits bits;
};

Sample random_sample(std::mt19937_64& g) {
  switch (g() % 5) {
    case 0: {
      std::vector<std::size_t> idx;
      for (int t = 0; t < 6; ++t) idx.push_back(1 + g() % 40);
      Bits b = bits_of([&](std::size_t k) { return std::find(idx.begin(), idx.end(), k) != idx.end(); });
      return {IndexSet::finite(idx), b};
    }
    case 1:
      return {IndexSet::odd(), bits_of([](std::size_t k) { return k % 2 == 1; })};
    case 2: {
      const std::size_t f = 1 + g() % 30;
      return {IndexSet::from(f), bits_of([f](std::size_t k) { return k >= f; })};
    }
    case 3: {
      const std::size_t f = 1 + g() % 30;
      const std::uint8_t m = static_cast<std::uint8_t>(g() % 16);
      return {IndexSet::periodic(f, m), bits_of([f, m](std::size_t k) { return k >= f && ((m >> (k % 4)) & 1); })};
    }
    default: {
      const std::size_t a = 1 + g() % 30, b = a + g() % 20;
      return {IndexSet::range(a, b), bits_of([a, b](std::size_t k) { return k >= a && k <= b; })};
    }
  }
}

void check_same(const IndexSet& s, const Bits& b) {
  for (std::size_t k = 1; k <= kHorizon; ++k) REQUIRE(s.contains(k) == b[k]);
}

}  // namespace

TEST_CASE("index set algebra agrees with a membership oracle") {
  std::mt19937_64 g(11);
  for (int round = 0; round < 400; ++round) {
    const Sample x = random_sample(g), y = random_sample(g);
    check_same(x.set, x.bits);
    Bits u(kHorizon + 1), i(kHorizon + 1), m(kHorizon + 1), c(kHorizon + 1);
    for (std::size_t k = 1; k <= kHorizon; ++k) {
      u[k] = x.bits[k] || y.bits[k];
      i[k] = x.bits[k] && y.bits[k];
      m[k] = x.bits[k] && !y.bits[k];
      c[k] = !x.bits[k];
    }
    check_same(x.set.unite(y.set), u);
    check_same(x.set.intersect(y.set), i);
    check_same(x.set.minus(y.set), m);
    check_same(x.set.complement(), c);
    CHECK(x.set.complement().complement() == x.set);
  }
}

TEST_CASE("index set canonical form") {
  CHECK(IndexSet::odd().unite(IndexSet::even()) == IndexSet::all());
  CHECK(IndexSet::from(1) == IndexSet::all());
  CHECK(IndexSet::odd().intersect(IndexSet::even()).empty());
  CHECK(IndexSet::periodic(1, IndexSet::kOddMask) == IndexSet::odd());
  CHECK(IndexSet::range(3, 7) == IndexSet::finite({7, 3, 4, 5, 6, 5}));
  CHECK(IndexSet::finite({1, 2}).complement() == IndexSet::from(3));
  CHECK(IndexSet::range(5, 4).empty());
  CHECK(IndexSet::finite({4, 9}).max_element() == 9u);
  CHECK_FALSE(IndexSet::odd().max_element().has_value());
  CHECK(IndexSet::from(3).min_element() == 3u);
  CHECK(IndexSet::odd().count_up_to(10) == 5);
  CHECK(IndexSet::even().members_up_to(7) == std::vector<std::size_t>{2, 4, 6});
}

TEST_CASE("index set pattern names") {
  CHECK(IndexSet::all().pattern_name() == "All");
  CHECK(IndexSet::odd().pattern_name() == "AllOdd");
  CHECK(IndexSet::even().pattern_name() == "AllEven");
  CHECK(IndexSet::from(3).pattern_name() == "CofiniteComplement({1,2})");
  CHECK(IndexSet::finite({1, 2}).pattern_name() == "{1,2}");
  CHECK(IndexSet().pattern_name() == "{}");
}

TEST_CASE("generator values follow the slot layout") {
  const auto h = harmonic(Parity::Odd, SignPattern::Positive);
  CHECK(h.value_at(1) == 1.0);
  CHECK(h.value_at(2) == 0.0);
  CHECK(h.value_at(5) == doctest::Approx(1.0 / 3));
  const auto ha = harmonic(Parity::Even, SignPattern::Alternating, 2.0);
  CHECK(ha.value_at(2) == 2.0);
  CHECK(ha.value_at(4) == doctest::Approx(-1.0));
  CHECK(ha.value_at(6) == doctest::Approx(2.0 / 3));
  const auto g = geometric(0.5, Parity::All, SignPattern::Positive, 1.0, 2);
  CHECK(g.value_at(2) == 0.0);
  CHECK(g.value_at(3) == 0.5);
  CHECK(g.value_at(5) == 0.125);
  const auto neg = geometric(-0.5, Parity::Even, SignPattern::Negative);
  CHECK(neg.value_at(2) == 0.5);
  CHECK(neg.value_at(4) == -0.25);
  const auto s = scaled_sum({1.0, -2.0}, {unit_vector(1), unit_vector(3)}, 3.0);
  CHECK(s.value_at(1) == 3.0);
  CHECK(s.value_at(3) == -6.0);
  CHECK(s.min_truncation() == 3);
  CHECK_THROWS_AS(geometric(1.0, Parity::All, SignPattern::Positive), ConfigError);
  CHECK_THROWS_AS(finite_list({1.0}, -1.0), ConfigError);
}

TEST_CASE("slot helpers invert each other") {
  for (Parity p : {Parity::All, Parity::Odd, Parity::Even}) {
    for (std::size_t off : {0u, 1u, 3u}) {
      for (std::size_t m = 1; m < 50; ++m) {
        const std::size_t k = slot_index(off, p, m);
        CHECK(slot_at(off, p, k) == m);
        CHECK(slots_up_to(off, p, k) == m);
      }
    }
  }
}

TEST_CASE("tail bounds dominate directly summed tails") {
  // direct sums over 10^7 terms past the truncation, plus the analytic remainder beyond
  SUBCASE("harmonic") {
    for (std::size_t n : {10u, 101u, 1000u}) {
      const auto h = harmonic(Parity::Odd, SignPattern::Alternating);
      long double s = 0.0L;
      const std::size_t m0 = slots_up_to(0, Parity::Odd, n);
      const std::size_t terms = 10000000;
      for (std::size_t m = m0 + 1; m <= m0 + terms; ++m) s += 1.0L / (static_cast<long double>(m) * m);
      const double actual_upper = std::sqrt(static_cast<double>(s) + 1.0 / static_cast<double>(m0 + terms));
      const double bound = tail_bound_of(h, n);
      CHECK(bound >= std::sqrt(static_cast<double>(s)));
      CHECK(bound >= actual_upper * (1 - 1e-12));
      CHECK(bound <= 1.5 * actual_upper);
    }
  }
  SUBCASE("geometric") {
    for (double r : {0.25, 0.5, -0.75}) {
      const auto g = geometric(r, Parity::Even, SignPattern::Positive, 2.0);
      const std::size_t n = 20;
      long double s = 0.0L;
      for (std::size_t k = n + 1; k <= n + 10000000; ++k) {
        const double v = g.value_at(k);
        s += static_cast<long double>(v) * v;
      }
      CHECK(tail_bound_of(g, n) >= std::sqrt(static_cast<double>(s)) * (1 - 1e-12));
      CHECK(tail_bound_of(g, n) <= std::sqrt(static_cast<double>(s)) * (1 + 1e-9));
    }
  }
  SUBCASE("finite lists have no tail past their support") {
    CHECK(tail_bound_of(finite_list({1, 2, 3}), 3) == 0.0);
    CHECK(tail_bound_of(finite_list({1, 2, 3}), 2) == doctest::Approx(3.0));
  }
}

TEST_CASE("evaluation is deterministic across truncations") {
  const auto g = scaled_sum({1.0, 0.3}, {harmonic(Parity::Even, SignPattern::Alternating),
                                         geometric(0.9, Parity::All, SignPattern::Positive)});
  const SeqVec a = evaluate_generator(g, 100);
  const SeqVec b = evaluate_generator(g, 350);
  for (std::size_t k = 0; k < 100; ++k) REQUIRE(a.entries()[k] == b.entries()[k]);
  CHECK(a.tail_bound() >= b.tail_bound());
  CHECK(a.origin() != nullptr);
}

TEST_CASE("sequence vector arithmetic") {
  const SeqVec x({1.0, -2.0, 0.0, 3.0});
  CHECK(positive_part(x).entries()[1] == 0.0);
  CHECK(negative_part(x).entries()[1] == 2.0);
  CHECK(max_abs_diff(positive_part(x) - negative_part(x), x) == 0.0);
  CHECK(max_abs_diff(modulus(x), positive_part(x) + negative_part(x)) == 0.0);
  CHECK(norm(x) == doctest::Approx(std::sqrt(14.0)));
  CHECK(support(x) == IndexSet::finite({1, 2, 4}));
  CHECK(restrict(x, IndexSet::even()).entries()[3] == 3.0);
  CHECK(restrict(x, IndexSet::even()).entries()[0] == 0.0);
  CHECK(SeqVec::unit(5, 2).coord(2) == 1.0);
  CHECK(resized(x, 2).size() == 2);
  CHECK_THROWS_AS(SeqVec({1.0, std::nan("")}), NonFiniteIterate);

  const SeqVec h = evaluate_generator(harmonic(Parity::All, SignPattern::Positive), 100);
  const InnerProduct ip = inner(h, h);
  CHECK(ip.error_bound == doctest::Approx(h.tail_bound() * h.tail_bound()));
  // sum 1/k^2 = pi^2/6
  CHECK(std::abs(ip.value - std::numbers::pi * std::numbers::pi / 6) <= ip.error_bound);
}

TEST_CASE("symbolic profiles of the interleaved families") {
  const double c = std::sqrt(6.0) / std::numbers::pi;
  const auto v1 = harmonic(Parity::Odd, SignPattern::Positive, c);
  const auto v2 = harmonic(Parity::Even, SignPattern::Alternating, c);
  const auto p1 = symbolic_profile(v1);
  CHECK(p1.support == IndexSet::odd());
  CHECK(p1.in_cone());
  const auto p2 = symbolic_profile(v2);
  CHECK(p2.support == IndexSet::even());
  CHECK(p2.positive == IndexSet::periodic(1, 0b0100));
  CHECK(p2.negative == IndexSet::periodic(1, 0b0001));
  CHECK_FALSE(eventual_sign(v2).has_value());

  // (1, -1, 1/2, 1/4, ...) scaled
  const auto w = scaled_sum({1.0, 1.0}, {finite_list({1.0, -1.0}), geometric(0.5, Parity::All, SignPattern::Positive, 1.0, 2)},
                            std::sqrt(3.0 / 7.0));
  const auto pw = symbolic_profile(w);
  CHECK(pw.support == IndexSet::all());
  CHECK(pw.negative == IndexSet::finite({2}));
  const auto ev = eventual_sign(w);
  REQUIRE(ev.has_value());
  CHECK(ev->sign == 1);
  CHECK(ev->onset == 3);
}

TEST_CASE("symbolic cancellation of rotated combinations") {
  for (double alpha : {0.25, 0.5, -0.6}) {
    const double c = std::sqrt(1 - alpha * alpha) / std::abs(alpha);
    const auto v1 = geometric(alpha, Parity::All, SignPattern::Positive, c);
    const auto v2 = scaled_sum({1.0, 1.0 / alpha}, {geometric(alpha * alpha, Parity::Odd, SignPattern::Positive),
                                                     geometric(alpha * alpha, Parity::Even, SignPattern::Negative)},
                               c);
    const auto w1 = symbolic_profile(scaled_sum({1.0, alpha}, {v1, v2}));
    const auto w2 = symbolic_profile(scaled_sum({-alpha, 1.0}, {v1, v2}));
    CHECK(w1.support == IndexSet::odd());
    CHECK(w2.support == IndexSet::even());
    if (alpha > 0) {
      CHECK(w1.in_cone());
      CHECK(w2.in_negative_cone());
    }
  }
  const auto x = geometric(0.3, Parity::All, SignPattern::Alternating);
  CHECK(symbolic_profile(scaled_sum({1.0, -1.0}, {x, x})).support.empty());
}

TEST_CASE("symbolic profile matches entry signs") {
  const std::vector<GeneratorDesc> gens = {
      harmonic(Parity::All, SignPattern::Alternating, 1.0, 3),
      geometric(-0.7, Parity::Odd, SignPattern::Positive),
      scaled_sum({1.0, -0.5}, {geometric(0.5, Parity::All, SignPattern::Positive),
                               geometric(0.25, Parity::Even, SignPattern::Positive)}),
      scaled_sum({2.0, -1.0}, {geometric(0.81, Parity::Odd, SignPattern::Positive),
                               geometric(0.9, Parity::All, SignPattern::Positive)}),
      scaled_sum({1.0, -3.0}, {harmonic(Parity::All, SignPattern::Positive),
                               harmonic(Parity::Even, SignPattern::Positive)}),
      scaled_sum({1.0, 1.0}, {finite_list({0.0, -3.0, 1.0}), harmonic(Parity::Odd, SignPattern::Negative)}),
  };
  for (const auto& g : gens) {
    const auto p = symbolic_profile(g);
    if (!p.signs_resolved) continue;
    for (std::size_t k = 1; k <= 3000; ++k) {
      const double v = g.value_at(k);
      if (std::abs(v) < 1e-250) continue;
      INFO("family ", g.family_name(), " index ", k, " value ", v);
      REQUIRE(p.positive.contains(k) == (v > 0));
      REQUIRE(p.negative.contains(k) == (v < 0));
    }
  }
}
