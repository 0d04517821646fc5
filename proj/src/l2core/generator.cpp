#include "apm/l2core/generator.hpp"

#include <cmath>
#include <numbers>

#include "apm/errors.hpp"

namespace apm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate(const GeneratorDesc::Family& family) {
  std::visit(overloaded{
                 [](const FiniteList& f) {
                   for (double v : f.values) {
                     if (!std::isfinite(v)) throw ConfigError("finite_list: non-finite value");
                   }
                 },
                 [](const InterleavedHarmonic&) {},
                 [](const InterleavedGeometric& g) {
                   if (!std::isfinite(g.ratio) || g.ratio == 0.0 || std::abs(g.ratio) >= 1.0) {
                     throw ConfigError("interleaved_geometric: ratio must lie in (-1,1)\\{0}");
                   }
                 },
                 [](const ScaledSum& s) {
                   if (s.coeffs.size() != s.parts.size()) {
                     throw ConfigError("scaled_sum: coeffs/parts size mismatch");
                   }
                   if (s.parts.empty()) throw ConfigError("scaled_sum: no terms");
                   for (double c : s.coeffs) {
                     if (!std::isfinite(c)) throw ConfigError("scaled_sum: non-finite coefficient");
                   }
                 },
             },
             family);
}

}  // namespace

std::size_t slot_index(std::size_t offset, Parity parity, std::size_t m) {
  switch (parity) {
    case Parity::All:
      return offset + m;
    case Parity::Odd:
      return offset + 2 * m - 1;
    case Parity::Even:
      return offset + 2 * m;
  }
  return 0;
}

std::size_t slot_at(std::size_t offset, Parity parity, std::size_t k) {
  if (k <= offset) return 0;
  const std::size_t d = k - offset;
  switch (parity) {
    case Parity::All:
      return d;
    case Parity::Odd:
      return (d % 2 == 1) ? (d + 1) / 2 : 0;
    case Parity::Even:
      return (d % 2 == 0) ? d / 2 : 0;
  }
  return 0;
}

std::size_t slots_up_to(std::size_t offset, Parity parity, std::size_t n) {
  if (n <= offset) return 0;
  const std::size_t d = n - offset;
  switch (parity) {
    case Parity::All:
      return d;
    case Parity::Odd:
      return (d + 1) / 2;
    case Parity::Even:
      return d / 2;
  }
  return 0;
}

double slot_sign(SignPattern signs, std::size_t m) {
  switch (signs) {
    case SignPattern::Positive:
      return 1.0;
    case SignPattern::Negative:
      return -1.0;
    case SignPattern::Alternating:
      return (m % 2 == 1) ? 1.0 : -1.0;
  }
  return 1.0;
}

std::string to_string(Parity p) {
  switch (p) {
    case Parity::All:
      return "all";
    case Parity::Odd:
      return "odd";
    case Parity::Even:
      return "even";
  }
  return "?";
}

std::string to_string(SignPattern s) {
  switch (s) {
    case SignPattern::Positive:
      return "positive";
    case SignPattern::Negative:
      return "negative";
    case SignPattern::Alternating:
      return "alternating";
  }
  return "?";
}

GeneratorDesc::GeneratorDesc(Family family, double normalization)
    : family_(std::move(family)), normalization_(normalization) {
  if (!std::isfinite(normalization_) || normalization_ <= 0.0) {
    throw ConfigError("generator normalization must be a positive finite number");
  }
  validate(family_);
}

double GeneratorDesc::value_at(std::size_t k) const {
  if (k == 0) throw Error("generator indices are 1-based");
  const double raw = std::visit(
      overloaded{
          [k](const FiniteList& f) { return k <= f.values.size() ? f.values[k - 1] : 0.0; },
          [k](const InterleavedHarmonic& h) {
            const std::size_t m = slot_at(h.offset, h.parity, k);
            return m == 0 ? 0.0 : slot_sign(h.signs, m) / static_cast<double>(m);
          },
          [k](const InterleavedGeometric& g) {
            const std::size_t m = slot_at(g.offset, g.parity, k);
            return m == 0 ? 0.0 : slot_sign(g.signs, m) * std::pow(g.ratio, static_cast<double>(m));
          },
          [k](const ScaledSum& s) {
            double acc = 0.0;
            for (std::size_t i = 0; i < s.parts.size(); ++i) acc += s.coeffs[i] * s.parts[i].value_at(k);
            return acc;
          },
      },
      family_);
  return normalization_ * raw;
}

std::size_t GeneratorDesc::min_truncation() const {
  return std::visit(overloaded{
                        [](const FiniteList& f) { return std::max<std::size_t>(f.values.size(), 1); },
                        [](const InterleavedHarmonic&) { return std::size_t{1}; },
                        [](const InterleavedGeometric&) { return std::size_t{1}; },
                        [](const ScaledSum& s) {
                          std::size_t n = 1;
                          for (const auto& p : s.parts) n = std::max(n, p.min_truncation());
                          return n;
                        },
                    },
                    family_);
}

GeneratorDesc GeneratorDesc::scaled(double factor) const {
  return GeneratorDesc(family_, normalization_ * factor);
}

std::string GeneratorDesc::family_name() const {
  return std::visit(overloaded{
                        [](const FiniteList&) { return std::string("finite_list"); },
                        [](const InterleavedHarmonic&) { return std::string("interleaved_harmonic"); },
                        [](const InterleavedGeometric&) { return std::string("interleaved_geometric"); },
                        [](const ScaledSum&) { return std::string("scaled_sum"); },
                    },
                    family_);
}

double tail_bound_of(const GeneratorDesc& desc, std::size_t n) {
  if (n == 0) throw Error("tail_bound_of: truncation must be >= 1");
  const double raw = std::visit(
      overloaded{
          [n](const FiniteList& f) {
            double s = 0.0;
            for (std::size_t k = n + 1; k <= f.values.size(); ++k) s += f.values[k - 1] * f.values[k - 1];
            return std::sqrt(s);
          },
          [n](const InterleavedHarmonic& h) {
            // sum_{m > M} 1/m^2 <= 1/M; for M = 0 the whole series pi^2/6.
            const std::size_t slots = slots_up_to(h.offset, h.parity, n);
            if (slots == 0) return std::numbers::pi / std::sqrt(6.0);
            return 1.0 / std::sqrt(static_cast<double>(slots));
          },
          [n](const InterleavedGeometric& g) {
            // sum_{m > M} r^{2m} = r^{2(M+1)} / (1 - r^2)
            const std::size_t slots = slots_up_to(g.offset, g.parity, n);
            const double r = std::abs(g.ratio);
            return std::pow(r, static_cast<double>(slots + 1)) / std::sqrt(1.0 - r * r);
          },
          [n](const ScaledSum& s) {
            double acc = 0.0;
            for (std::size_t i = 0; i < s.parts.size(); ++i) {
              acc += std::abs(s.coeffs[i]) * tail_bound_of(s.parts[i], n);
            }
            return acc;
          },
      },
      desc.family());
  return desc.normalization() * raw;
}

GeneratorDesc finite_list(std::vector<double> values, double normalization) {
  return GeneratorDesc(FiniteList{std::move(values)}, normalization);
}

GeneratorDesc unit_vector(std::size_t k) {
  if (k == 0) throw Error("unit_vector: indices are 1-based");
  std::vector<double> v(k, 0.0);
  v[k - 1] = 1.0;
  return finite_list(std::move(v));
}

GeneratorDesc harmonic(Parity parity, SignPattern signs, double normalization, std::size_t offset) {
  return GeneratorDesc(InterleavedHarmonic{offset, parity, signs}, normalization);
}

GeneratorDesc geometric(double ratio, Parity parity, SignPattern signs, double normalization,
                        std::size_t offset) {
  return GeneratorDesc(InterleavedGeometric{ratio, offset, parity, signs}, normalization);
}

GeneratorDesc scaled_sum(std::vector<double> coeffs, std::vector<GeneratorDesc> parts,
                         double normalization) {
  return GeneratorDesc(ScaledSum{std::move(coeffs), std::move(parts)}, normalization);
}

}  // namespace apm
