#include "apm/structure/decomposition.hpp"

#include <algorithm>

#include "apm/errors.hpp"
#include "apm/structure/analysis.hpp"

namespace apm {

namespace {

// Single-vector iteration restricted to the support of its vector.
struct Part {
  std::vector<std::size_t> idx;  // 0-based coordinates
  std::vector<double> v;
  std::vector<double> b;
};

}  // namespace

IterationTrace solve_by_decomposition(const ProblemInstance& instance) {
  instance.validate();
  const Basis& basis = *instance.basis;
  const std::size_t n = instance.truncation;
  const DisjointResult dj = check_pairwise_disjoint(basis, instance.options.eps_supp);
  if (!dj.holds) throw PreconditionViolated("solve_by_decomposition: basis vectors are not pairwise disjoint");

  const auto start = instance.start.entries();
  std::vector<int> owner(n, -1);
  std::vector<Part> parts(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto v = basis[i].entries();
    for (std::size_t k : support(basis[i], instance.options.eps_supp).members_up_to(n)) {
      owner[k - 1] = static_cast<int>(i);
      parts[i].idx.push_back(k - 1);
      parts[i].v.push_back(v[k - 1]);
      parts[i].b.push_back(start[k - 1]);
    }
  }
  std::vector<std::size_t> zidx;
  for (std::size_t k = 0; k < n; ++k) {
    if (owner[k] < 0) zidx.push_back(k);
  }

  TraceRecorder rec(instance.basis, start, instance.options);
  std::vector<double> a(n), b(n), coeffs(basis.size());
  for (;;) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      Part& p = parts[i];
      double c = 0.0;
      for (std::size_t t = 0; t < p.idx.size(); ++t) c += p.b[t] * p.v[t];
      coeffs[i] = c;
      for (std::size_t t = 0; t < p.idx.size(); ++t) {
        const double at = p.b[t] - c * p.v[t];
        p.b[t] = std::max(at, 0.0);
        a[p.idx[t]] = at;
        b[p.idx[t]] = p.b[t];
      }
    }
    // untouched by Q: one positive-part step, then constant
    const auto& last = rec.last_b();
    for (std::size_t k : zidx) {
      a[k] = last[k];
      b[k] = std::max(a[k], 0.0);
    }
    if (rec.record(a, b, coeffs)) break;
  }
  return rec.finish();
}

}  // namespace apm
