#include "apm/harness/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "apm/errors.hpp"

namespace apm {

InstanceCatalogEntry remark_harmonic_entry() {
  const double c = std::sqrt(6.0) / std::numbers::pi;
  return {"remark-3.2-harmonic",
          "disjoint pair: harmonic entries on odd indices, alternating harmonic entries on even indices",
          {harmonic(Parity::Odd, SignPattern::Positive, c), harmonic(Parity::Even, SignPattern::Alternating, c)},
          "e4",
          "worked example: disjoint harmonic pair",
          {Verdict::PairwiseDisjoint}};
}

InstanceCatalogEntry geometric_pair_entry(double alpha) {
  const double c = std::sqrt(1.0 - alpha * alpha) / std::abs(alpha);
  const double a2 = alpha * alpha;
  // v2: alpha^(2m) at odd index 2m-1, -alpha^(2m-1) at even index 2m
  GeneratorDesc v2 = scaled_sum({1.0, 1.0 / alpha},
                                {geometric(a2, Parity::Odd, SignPattern::Positive),
                                 geometric(a2, Parity::Even, SignPattern::Negative)},
                                c);
  std::string id = "remark-3.4-geometric";
  if (alpha != 0.5) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "remark-3.4-geometric:alpha=%g", alpha);
    id = buf;
  }
  return {id,
          "overlapping geometric pair that rotates to a disjoint pair",
          {geometric(alpha, Parity::All, SignPattern::Positive, c), std::move(v2)},
          "e1",
          "worked example: rotatable geometric pair",
          {Verdict::BB1_QPreservesCone}};
}

InstanceCatalogEntry general_pair_entry(double alpha1, double alpha2, double r) {
  // entries 2m-1, 2m carry c_{m-1} (alpha1, alpha2) and c_{m-1} (alpha2, -alpha1), c_j = r^j
  const double norm = std::sqrt(1.0 - r * r) / std::hypot(alpha1, alpha2);
  const auto odd = geometric(r, Parity::Odd, SignPattern::Positive);
  const auto even = geometric(r, Parity::Even, SignPattern::Positive);
  std::string id = "remark-3.5-general";
  if (alpha1 != 0.6 || alpha2 != 0.8 || r != 0.5) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "remark-3.5-general:a1=%g,a2=%g,c=%g", alpha1, alpha2, r);
    id = buf;
  }
  return {id,
          "paired blocks (a1, a2), (a2, -a1) scaled by a geometric sequence",
          {scaled_sum({alpha1 / r, alpha2 / r}, {odd, even}, norm),
           scaled_sum({alpha2 / r, -alpha1 / r}, {odd, even}, norm)},
          "e1",
          "worked example: rotatable block pair",
          {Verdict::BB1_QPreservesCone}};
}

InstanceCatalogEntry signed_pair_entry() {
  return {"remark-4.2-signed",
          "cone vector on {1,2} and a vector positive from index 3",
          {finite_list({1.0, 1.0}, 1.0 / std::sqrt(2.0)),
           scaled_sum({1.0, 1.0},
                      {finite_list({1.0, -1.0}), geometric(0.5, Parity::All, SignPattern::Positive, 1.0, 2)},
                      std::sqrt(3.0 / 7.0))},
          "e3",
          "worked example: signed overlapping pair",
          {Verdict::FiniteIntersectionSigned}};
}

namespace {

std::vector<InstanceCatalogEntry> make_catalog() {
  std::vector<InstanceCatalogEntry> out;
  out.push_back(remark_harmonic_entry());
  out.push_back(geometric_pair_entry(0.5));
  out.push_back(general_pair_entry(0.6, 0.8, 0.5));
  out.push_back(signed_pair_entry());
  out.push_back({"standard-basis-pair",
                 "e1 and e2",
                 {unit_vector(1), unit_vector(2)},
                 "e3",
                 "synthetic",
                 {Verdict::PairwiseDisjoint, Verdict::FiniteIntersectionSigned, Verdict::BB1_QPreservesCone}});
  out.push_back({"codim1-cone",
                 "single positive geometric vector",
                 {geometric(0.5, Parity::All, SignPattern::Positive, std::sqrt(3.0))},
                 "e1",
                 "synthetic",
                 {Verdict::PairwiseDisjoint, Verdict::FiniteIntersectionSigned, Verdict::BB1_QPreservesCone}});
  out.push_back({"disjoint-triple",
                 "three disjoint finitely supported vectors with mixed signs",
                 {finite_list({1.0, 0.0, 0.0, -1.0}, 1.0 / std::sqrt(2.0)),
                  finite_list({0.0, 1.0, 0.0, 0.0, -2.0, 1.0}, 1.0 / std::sqrt(6.0)),
                  finite_list({0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0}, 1.0 / std::sqrt(2.0))},
                 "nonneg:7",
                 "synthetic",
                 {Verdict::PairwiseDisjoint}});
  out.push_back({"signed-triple",
                 "two cone vectors and one vector positive from index 5",
                 {finite_list({1.0, 1.0}, 1.0 / std::sqrt(2.0)),
                  finite_list({0.0, 0.0, 1.0, 1.0}, 1.0 / std::sqrt(2.0)),
                  scaled_sum({1.0, 1.0},
                             {finite_list({1.0, -1.0, 1.0, -1.0}),
                              geometric(0.5, Parity::All, SignPattern::Positive, 1.0, 4)},
                             std::sqrt(3.0 / 13.0))},
                 "e5",
                 "synthetic",
                 {Verdict::FiniteIntersectionSigned}});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

}  // namespace

const std::vector<InstanceCatalogEntry>& catalog() {
  static const std::vector<InstanceCatalogEntry> entries = make_catalog();
  return entries;
}

const InstanceCatalogEntry& find_entry(const std::vector<InstanceCatalogEntry>& entries, const std::string& id) {
  for (const auto& e : entries) {
    if (e.id == id) return e;
  }
  throw NotFound("unknown instance id: " + id);
}

const InstanceCatalogEntry& find_entry(const std::string& id) { return find_entry(catalog(), id); }

std::shared_ptr<const Basis> build_basis(const std::vector<GeneratorDesc>& generators, std::size_t n) {
  if (generators.empty()) throw ConfigError("instance has no basis vectors");
  if (n == 0) throw ConfigError("truncation must be >= 1");
  std::vector<SeqVec> raw;
  for (const auto& g : generators) {
    if (g.min_truncation() > n) {
      throw ConfigError("truncation " + std::to_string(n) + " is below a listed entry at index " +
                        std::to_string(g.min_truncation()));
    }
    raw.push_back(evaluate_generator(g, n));
  }
  return std::make_shared<const Basis>(orthonormalize(raw));
}

std::shared_ptr<const Basis> build_basis(const InstanceCatalogEntry& entry, std::size_t n) {
  return build_basis(entry.generators, n);
}

}  // namespace apm
