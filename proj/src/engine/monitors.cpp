#include "apm/engine/monitors.hpp"

#include <cmath>

#include "apm/errors.hpp"

namespace apm {

namespace {

double dist(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - (k < y.size() ? y[k] : 0.0);
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

FejerReport check_fejer(const IterationTrace& trace, const SeqVec& y, double slack) {
  const Basis& basis = *trace.basis;
  const std::size_t n = basis.truncation();
  for (std::size_t k = n; k < y.size(); ++k) {
    if (y.entries()[k] != 0.0) throw NotFeasiblePoint("check_fejer: y has coordinates beyond the truncation");
  }
  const SeqVec yp = resized(y, n);
  const double dq = norm(q_operator(basis, yp));
  const double dneg = norm(negative_part(yp));
  if (dq > kFeasibleTol || dneg > kFeasibleTol) {
    throw NotFeasiblePoint("check_fejer: y is not in the intersection (‖Q y‖ = " + std::to_string(dq) +
                           ", ‖y^-‖ = " + std::to_string(dneg) + ")");
  }
  FejerReport rep;
  const auto ye = yp.entries();
  const Snapshot* prev_b = nullptr;
  const Snapshot* prev_a = nullptr;
  for (const auto& s : trace.snapshots) {
    if (prev_b) {
      const double inc = dist(s.b.entries(), ye) - dist(prev_b->b.entries(), ye);
      ++rep.pairs_checked;
      if (inc > slack) rep.violations.push_back({prev_b->j, s.j, 'b', inc});
    }
    prev_b = &s;
    if (s.a) {
      if (prev_a) {
        const double inc = dist(s.a->entries(), ye) - dist(prev_a->a->entries(), ye);
        ++rep.pairs_checked;
        if (inc > slack) rep.violations.push_back({prev_a->j, s.j, 'a', inc});
      }
      prev_a = &s;
    }
  }
  bool y_zero = true;
  for (double v : ye) y_zero = y_zero && v == 0.0;
  if (y_zero) {
    rep.used_step_norms = true;
    double last_b = norm(trace.snapshots.front().b);
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
      const auto& st = trace.steps[i];
      ++rep.pairs_checked;
      if (st.fejer_dist_to_origin - last_b > slack) {
        rep.violations.push_back({st.j - 1, st.j, 'b', st.fejer_dist_to_origin - last_b});
      }
      if (i > 0) {
        const double inc = st.norm_a - trace.steps[i - 1].norm_a;
        ++rep.pairs_checked;
        if (inc > slack) rep.violations.push_back({st.j - 1, st.j, 'a', inc});
      }
      last_b = st.fejer_dist_to_origin;
    }
  }
  return rep;
}

MonotoneReport check_componentwise_monotone(const IterationTrace& trace, const IndexSet& s, double slack) {
  MonotoneReport rep;
  const std::size_t n = trace.basis->truncation();
  const auto idx = s.members_up_to(n);
  for (std::size_t i = 1; i < trace.snapshots.size(); ++i) {
    const auto& from = trace.snapshots[i - 1];
    const auto& to = trace.snapshots[i];
    bool ok = true;
    for (std::size_t k : idx) {
      const double inc = to.b.coord(k) - from.b.coord(k);
      if (inc > slack) {
        ok = false;
        if (!rep.first_violation) rep.first_violation = MonotoneViolation{from.j, to.j, k, inc};
        break;
      }
    }
    rep.pair_monotone.push_back(ok);
  }
  return rep;
}

const char* to_string(CaseKind k) {
  switch (k) {
    case CaseKind::Case1:
      return "Case1";
    case CaseKind::Case2:
      return "Case2";
    case CaseKind::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

CaseReport classify_case(const IterationTrace& trace, std::size_t signed_index, const IndexSet& p) {
  const Basis& basis = *trace.basis;
  if (signed_index >= basis.size()) throw Error("classify_case: signed index out of range");
  CaseReport rep;
  const auto& start = trace.snapshots.front().b;
  bool start_in_cone = true;
  for (double x : start.entries()) start_in_cone = start_in_cone && x >= 0.0;
  rep.first_index = start_in_cone ? 0 : 1;
  // steps[i].q_coefficients holds <b^{i}, v>; the last b comes from the limit.
  for (std::size_t i = rep.first_index; i < trace.steps.size(); ++i) {
    rep.q.push_back(trace.steps[i].q_coefficients[signed_index]);
  }
  if (!trace.steps.empty()) rep.q.push_back(dot(trace.limit_estimate.entries(), basis[signed_index].entries()));
  rep.horizon = trace.steps.size();

  const std::size_t len = rep.q.size();
  rep.prefix.assign(len + 1, 0.0L);
  for (std::size_t t = 0; t < len; ++t) rep.prefix[t + 1] = rep.prefix[t] + static_cast<long double>(rep.q[t]);

  // next index m > t with prefix[m] >= prefix[t]
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> next(len + 1, kNone);
  std::vector<std::size_t> stack;
  for (std::size_t t = len + 1; t-- > 0;) {
    while (!stack.empty() && rep.prefix[stack.back()] < rep.prefix[t]) stack.pop_back();
    if (!stack.empty()) next[t] = stack.back();
    stack.push_back(t);
  }
  std::optional<std::size_t> uncrossed;
  for (std::size_t t = 0; t < len; ++t) {
    if (next[t] == kNone) {
      uncrossed = t;
      break;
    }
    rep.crossing_offsets.push_back(next[t] - t - 1);
  }
  if (len == 0) {
    rep.kind = CaseKind::Inconclusive;
  } else if (!uncrossed) {
    rep.kind = CaseKind::Case2;
  } else if (trace.terminal_status == TerminalStatus::Converged) {
    rep.kind = CaseKind::Case1;
    rep.case1_start = rep.first_index + *uncrossed;
  } else {
    rep.kind = CaseKind::Inconclusive;
  }

  // Along a crossing window the P-coordinates cannot grow: b^{j+k+1}_P <= b^j_P.
  if (trace.has_every_snapshot()) {
    const auto idx = p.members_up_to(basis.truncation());
    for (std::size_t t = 0; t < rep.crossing_offsets.size(); ++t) {
      const std::size_t j = rep.first_index + t;
      const std::size_t j2 = j + rep.crossing_offsets[t] + 1;
      if (j2 >= trace.snapshots.size()) continue;
      const auto& from = trace.snapshots[j].b;
      const auto& to = trace.snapshots[j2].b;
      ++rep.decrease_checks;
      for (std::size_t k : idx) {
        if (to.coord(k) > from.coord(k) + kMonitorSlack) {
          ++rep.decrease_violations;
          break;
        }
      }
    }
  }
  return rep;
}

}  // namespace apm
