#include "apm/l2core/index_set.hpp"

#include <algorithm>
#include <sstream>

#include "apm/errors.hpp"

namespace apm {

namespace {

bool mask_has(std::uint8_t mask, std::size_t k) { return (mask >> (k % 4)) & 1u; }

std::string list_string(const std::vector<std::size_t>& v) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  os << '}';
  return os.str();
}

}  // namespace

IndexSet::IndexSet(std::vector<std::size_t> explicit_members, std::size_t threshold,
                   std::uint8_t mask)
    : explicit_(std::move(explicit_members)), threshold_(threshold), mask_(mask & kAllMask) {
  normalize();
}

void IndexSet::normalize() {
  std::sort(explicit_.begin(), explicit_.end());
  explicit_.erase(std::unique(explicit_.begin(), explicit_.end()), explicit_.end());
  if (!explicit_.empty() && explicit_.front() == 0) {
    throw Error("IndexSet: indices are 1-based");
  }
  if (threshold_ < 1) threshold_ = 1;
  // Members at or above the threshold are governed by the mask.
  while (!explicit_.empty() && explicit_.back() >= threshold_) explicit_.pop_back();
  // Pull the threshold down while the explicit part agrees with the pattern.
  while (threshold_ > 1) {
    const std::size_t k = threshold_ - 1;
    const bool listed = !explicit_.empty() && explicit_.back() == k;
    if (listed != mask_has(mask_, k)) break;
    if (listed) explicit_.pop_back();
    --threshold_;
  }
}

IndexSet IndexSet::finite(std::vector<std::size_t> indices) {
  std::size_t t = 1;
  for (auto k : indices) t = std::max(t, k + 1);
  return IndexSet(std::move(indices), t, 0);
}

IndexSet IndexSet::all() { return IndexSet({}, 1, kAllMask); }
IndexSet IndexSet::odd() { return IndexSet({}, 1, kOddMask); }
IndexSet IndexSet::even() { return IndexSet({}, 1, kEvenMask); }
IndexSet IndexSet::from(std::size_t first) { return IndexSet({}, std::max<std::size_t>(first, 1), kAllMask); }

IndexSet IndexSet::periodic(std::size_t first, std::uint8_t residue_mask) {
  return IndexSet({}, std::max<std::size_t>(first, 1), residue_mask);
}

IndexSet IndexSet::range(std::size_t first, std::size_t last) {
  std::vector<std::size_t> v;
  for (std::size_t k = std::max<std::size_t>(first, 1); k <= last; ++k) v.push_back(k);
  return finite(std::move(v));
}

bool IndexSet::contains(std::size_t k) const {
  if (k == 0) return false;
  if (k >= threshold_) return mask_has(mask_, k);
  return std::binary_search(explicit_.begin(), explicit_.end(), k);
}

std::vector<std::size_t> IndexSet::members_up_to(std::size_t n) const {
  std::vector<std::size_t> out;
  for (auto k : explicit_) {
    if (k > n) return out;
    out.push_back(k);
  }
  for (std::size_t k = threshold_; k <= n; ++k) {
    if (mask_has(mask_, k)) out.push_back(k);
  }
  return out;
}

std::size_t IndexSet::count_up_to(std::size_t n) const { return members_up_to(n).size(); }

std::optional<std::size_t> IndexSet::min_element() const {
  if (!explicit_.empty()) return explicit_.front();
  if (mask_ == 0) return std::nullopt;
  for (std::size_t k = threshold_;; ++k) {
    if (mask_has(mask_, k)) return k;
  }
}

std::optional<std::size_t> IndexSet::max_element() const {
  if (mask_ != 0 || explicit_.empty()) return std::nullopt;
  return explicit_.back();
}

template <class Op>
IndexSet IndexSet::combine(const IndexSet& a, const IndexSet& b, Op op) {
  const std::size_t t = std::max(a.threshold_, b.threshold_);
  std::vector<std::size_t> members;
  for (std::size_t k = 1; k < t; ++k) {
    if (op(a.contains(k), b.contains(k))) members.push_back(k);
  }
  std::uint8_t mask = 0;
  for (unsigned r = 0; r < 4; ++r) {
    if (op(((a.mask_ >> r) & 1u) != 0, ((b.mask_ >> r) & 1u) != 0)) mask |= std::uint8_t(1u << r);
  }
  return IndexSet(std::move(members), t, mask);
}

IndexSet IndexSet::unite(const IndexSet& other) const {
  return combine(*this, other, [](bool x, bool y) { return x || y; });
}

IndexSet IndexSet::intersect(const IndexSet& other) const {
  return combine(*this, other, [](bool x, bool y) { return x && y; });
}

IndexSet IndexSet::minus(const IndexSet& other) const {
  return combine(*this, other, [](bool x, bool y) { return x && !y; });
}

IndexSet IndexSet::complement() const { return all().minus(*this); }

std::string IndexSet::pattern_name() const {
  if (mask_ == 0) return list_string(explicit_);
  if (*this == all()) return "All";
  if (*this == odd()) return "AllOdd";
  if (*this == even()) return "AllEven";
  if (mask_ == kAllMask) {
    return "CofiniteComplement(" + list_string(complement().explicit_) + ")";
  }
  std::ostringstream os;
  os << list_string(explicit_) << " + {k >= " << threshold_ << " : k mod 4 in {";
  bool first = true;
  for (unsigned r = 0; r < 4; ++r) {
    if ((mask_ >> r) & 1u) {
      if (!first) os << ',';
      os << r;
      first = false;
    }
  }
  os << "}}";
  return os.str();
}

}  // namespace apm
