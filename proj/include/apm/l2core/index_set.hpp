#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace apm {

/// A subset of the positive integers {1, 2, 3, ...}.
///
/// Membership of indices below `threshold()` is listed explicitly. From
/// `threshold()` on, membership depends only on k mod 4 and is given by
/// `residue_mask()` (bit r set <=> every k >= threshold with k % 4 == r is a
/// member). Finite sets, the odd/even patterns of interleaved sequences,
/// cofinite sets and all their boolean combinations are represented exactly,
/// and the representation is canonical (smallest threshold), so structural
/// equality is set equality.
class IndexSet {
 public:
  static constexpr std::uint8_t kOddMask = 0b1010;
  static constexpr std::uint8_t kEvenMask = 0b0101;
  static constexpr std::uint8_t kAllMask = 0b1111;

  IndexSet() = default;

  static IndexSet finite(std::vector<std::size_t> indices);
  static IndexSet all();
  static IndexSet odd();
  static IndexSet even();
  /// {first, first + 1, ...}
  static IndexSet from(std::size_t first);
  /// {k >= first : bit (k % 4) of mask is set}
  static IndexSet periodic(std::size_t first, std::uint8_t residue_mask);
  /// {first, ..., last}; empty when last < first.
  static IndexSet range(std::size_t first, std::size_t last);

  bool contains(std::size_t k) const;
  bool empty() const { return mask_ == 0 && explicit_.empty(); }
  bool is_finite() const { return mask_ == 0; }

  std::size_t threshold() const { return threshold_; }
  std::uint8_t residue_mask() const { return mask_; }
  const std::vector<std::size_t>& explicit_members() const { return explicit_; }

  std::vector<std::size_t> members_up_to(std::size_t n) const;
  std::size_t count_up_to(std::size_t n) const;
  std::optional<std::size_t> min_element() const;
  /// Largest member; nullopt for empty or infinite sets.
  std::optional<std::size_t> max_element() const;

  IndexSet unite(const IndexSet& other) const;
  IndexSet intersect(const IndexSet& other) const;
  IndexSet minus(const IndexSet& other) const;
  IndexSet complement() const;

  /// Short human-readable form: "AllOdd", "AllEven", "All",
  /// "CofiniteComplement({1,2})", "{1,2}", or the generic periodic form.
  std::string pattern_name() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  IndexSet(std::vector<std::size_t> explicit_members, std::size_t threshold,
           std::uint8_t mask);
  void normalize();

  template <class Op>
  static IndexSet combine(const IndexSet& a, const IndexSet& b, Op op);

  std::vector<std::size_t> explicit_;
  std::size_t threshold_ = 1;
  std::uint8_t mask_ = 0;
};

}  // namespace apm
