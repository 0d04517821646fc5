#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "apm/engine/apm.hpp"
#include "apm/l2core/index_set.hpp"

namespace apm {

constexpr double kMonitorSlack = 1e-12;
constexpr double kFeasibleTol = 1e-10;

struct FejerViolation {
  std::size_t j_from;
  std::size_t j_to;
  char sequence;  // 'a' or 'b'
  double increase;
};

struct FejerReport {
  std::size_t pairs_checked = 0;
  bool used_step_norms = false;
  std::vector<FejerViolation> violations;
  bool holds() const { return violations.empty(); }
};

/// ‖b_j - y‖ and ‖a_j - y‖ non-increasing over recorded snapshots (and over
/// every step when y = 0). Throws NotFeasiblePoint unless y lies in A ∩ B.
FejerReport check_fejer(const IterationTrace& trace, const SeqVec& y, double slack = kMonitorSlack);

struct MonotoneViolation {
  std::size_t j_from;
  std::size_t j_to;
  std::size_t index;  // 1-based coordinate
  double increase;
};

struct MonotoneReport {
  // one flag per consecutive snapshot pair
  std::vector<bool> pair_monotone;
  std::optional<MonotoneViolation> first_violation;
  bool monotone() const { return !first_violation.has_value(); }
};

/// Consecutive b-snapshots non-increasing on S ∩ [1, n].
MonotoneReport check_componentwise_monotone(const IterationTrace& trace, const IndexSet& s,
                                            double slack = kMonitorSlack);

enum class CaseKind { Case1, Case2, Inconclusive };
const char* to_string(CaseKind k);

/// Window analysis of q_j = <b^j, v_s> for a two-vector instance.
struct CaseReport {
  CaseKind kind = CaseKind::Inconclusive;
  std::size_t first_index = 0;            // j of the first q recorded (0 or 1)
  std::vector<double> q;                  // q[t] = <b^{first_index + t}, v_s>
  std::vector<long double> prefix;        // prefix[t] = sum_{u < t} q[u]
  // Case 2: per window start j (as offset t), smallest k >= 0 with
  // q_j + ... + q_{j+k} >= 0.
  std::vector<std::size_t> crossing_offsets;
  // Case 1: window start whose partial sums stay negative through the horizon.
  std::optional<std::size_t> case1_start;
  std::size_t horizon = 0;               // last j available
  std::size_t decrease_checks = 0;
  std::size_t decrease_violations = 0;
};

CaseReport classify_case(const IterationTrace& trace, std::size_t signed_index, const IndexSet& p);

}  // namespace apm
