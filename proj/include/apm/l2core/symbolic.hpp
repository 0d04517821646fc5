#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "apm/l2core/generator.hpp"
#include "apm/l2core/index_set.hpp"

namespace apm {

// One closed-form term of a residue class tail.
//   Geometric: value(k) = coeff * ratio^((k - k0) / 4), ratio in (0, 1)
//   Harmonic:  value(k) = coeff / (k + shift)
// where k0 is the first index of the class at or above the threshold.
struct CanonicalTerm {
  enum class Kind { Geometric, Harmonic };
  Kind kind;
  double coeff;
  double param;
};

enum class ClassSign { Zero, Positive, Negative, Unknown };

/// A generator rewritten as explicit values below `threshold` and, for every
/// residue class k mod 4 at or above it, a merged list of closed-form terms
/// whose sum keeps one sign over the whole class (or is marked Unknown).
struct CanonicalForm {
  std::size_t threshold = 1;
  std::vector<double> prefix;  // prefix[k-1] = value at k, k < threshold
  std::array<std::vector<CanonicalTerm>, 4> tails;
  std::array<ClassSign, 4> class_sign{};

  double value_at(std::size_t k) const;
};

// Relative size below which a merged coefficient or prefix value counts as an
// exact cancellation.
inline constexpr double kCancellationTol = 1e-10;

CanonicalForm canonicalize(const GeneratorDesc& desc);

/// Exact support and sign data of a generator.
struct SymbolicProfile {
  IndexSet support;
  IndexSet positive;
  IndexSet negative;
  // False when some tail class has a sign the analyzer cannot decide.
  bool signs_resolved = true;

  // Membership of the vector in the cone / the negative cone.
  bool in_cone() const { return signs_resolved && negative.empty(); }
  bool in_negative_cone() const { return signs_resolved && positive.empty(); }
};

SymbolicProfile symbolic_profile(const GeneratorDesc& desc);

/// Eventual sign: every nonzero entry at index >= onset has sign `sign`
/// (+1 / -1). Nullopt when the tail mixes signs or a sign is undecidable.
struct EventualSign {
  int sign;
  std::size_t onset;
};

std::optional<EventualSign> eventual_sign(const GeneratorDesc& desc);

}  // namespace apm
