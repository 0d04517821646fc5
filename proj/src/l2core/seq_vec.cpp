#include "apm/l2core/seq_vec.hpp"

#include <algorithm>
#include <cmath>

#include "apm/errors.hpp"
#include "apm/l2core/symbolic.hpp"

namespace apm {

SeqVec::SeqVec(std::vector<double> entries, double tail_bound,
               std::shared_ptr<const GeneratorDesc> origin)
    : entries_(std::move(entries)), tail_bound_(tail_bound), origin_(std::move(origin)) {
  if (entries_.empty()) throw Error("SeqVec: truncation length must be >= 1");
  for (double v : entries_) {
    if (!std::isfinite(v)) throw NonFiniteIterate("SeqVec: non-finite entry");
  }
  if (!std::isfinite(tail_bound_) || tail_bound_ < 0.0) throw Error("SeqVec: tail bound must be finite and >= 0");
}

SeqVec SeqVec::zeros(std::size_t n) { return SeqVec(std::vector<double>(n, 0.0)); }

SeqVec SeqVec::unit(std::size_t n, std::size_t k) {
  if (k == 0 || k > n) throw Error("SeqVec::unit: index out of range");
  std::vector<double> v(n, 0.0);
  v[k - 1] = 1.0;
  return SeqVec(std::move(v));
}

SeqVec SeqVec::with_origin(std::shared_ptr<const GeneratorDesc> origin) const {
  return SeqVec(entries_, tail_bound_, std::move(origin));
}

SeqVec evaluate_generator(const GeneratorDesc& desc, std::size_t n) {
  if (n == 0) throw Error("evaluate_generator: truncation must be >= 1");
  std::vector<double> v(n);
  for (std::size_t k = 1; k <= n; ++k) v[k - 1] = desc.value_at(k);
  return SeqVec(std::move(v), tail_bound_of(desc, n), std::make_shared<const GeneratorDesc>(desc));
}

double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += x[k] * y[k];
  return s;
}

double norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

InnerProduct inner(const SeqVec& x, const SeqVec& y) {
  const double value = dot(x.entries(), y.entries());
  // Coordinates past both truncations: Cauchy-Schwarz on the two tails.
  // Coordinates present in only one vector pair up with the other's tail.
  double err = x.tail_bound() * y.tail_bound();
  const auto& longer = x.size() >= y.size() ? x : y;
  const auto& shorter = x.size() >= y.size() ? y : x;
  if (longer.size() > shorter.size()) {
    const auto extra = longer.entries().subspan(shorter.size());
    err += norm(extra) * shorter.tail_bound();
  }
  return {value, err};
}

double norm(const SeqVec& x) { return norm(x.entries()); }

IndexSet support(const SeqVec& x, double eps_supp) {
  if (x.origin()) return symbolic_profile(*x.origin()).support;
  std::vector<std::size_t> idx;
  const auto e = x.entries();
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (std::abs(e[k]) > eps_supp) idx.push_back(k + 1);
  }
  return IndexSet::finite(std::move(idx));
}

SeqVec positive_part(const SeqVec& x) {
  std::vector<double> v(x.entries().begin(), x.entries().end());
  for (auto& e : v) e = std::max(e, 0.0);
  return SeqVec(std::move(v), x.tail_bound());
}

SeqVec negative_part(const SeqVec& x) {
  std::vector<double> v(x.entries().begin(), x.entries().end());
  for (auto& e : v) e = std::max(-e, 0.0);
  return SeqVec(std::move(v), x.tail_bound());
}

SeqVec modulus(const SeqVec& x) {
  std::vector<double> v(x.entries().begin(), x.entries().end());
  for (auto& e : v) e = std::max(e, 0.0) + std::max(-e, 0.0);
  return SeqVec(std::move(v), x.tail_bound());
}

SeqVec restrict(const SeqVec& x, const IndexSet& s) {
  std::vector<double> v(x.entries().begin(), x.entries().end());
  for (std::size_t k = 1; k <= v.size(); ++k) {
    if (!s.contains(k)) v[k - 1] = 0.0;
  }
  return SeqVec(std::move(v), x.tail_bound());
}

namespace {

template <class Op>
SeqVec zip(const SeqVec& x, const SeqVec& y, Op op) {
  const std::size_t n = std::max(x.size(), y.size());
  std::vector<double> v(n);
  for (std::size_t k = 1; k <= n; ++k) v[k - 1] = op(x.coord(k), y.coord(k));
  return SeqVec(std::move(v), x.tail_bound() + y.tail_bound());
}

}  // namespace

SeqVec operator+(const SeqVec& x, const SeqVec& y) {
  return zip(x, y, [](double a, double b) { return a + b; });
}

SeqVec operator-(const SeqVec& x, const SeqVec& y) {
  return zip(x, y, [](double a, double b) { return a - b; });
}

SeqVec operator-(const SeqVec& x) { return -1.0 * x; }

SeqVec operator*(double a, const SeqVec& x) {
  std::vector<double> v(x.entries().begin(), x.entries().end());
  for (auto& e : v) e *= a;
  return SeqVec(std::move(v), std::abs(a) * x.tail_bound());
}

double max_abs_diff(const SeqVec& x, const SeqVec& y) {
  const std::size_t n = std::max(x.size(), y.size());
  double m = 0.0;
  for (std::size_t k = 1; k <= n; ++k) m = std::max(m, std::abs(x.coord(k) - y.coord(k)));
  return m;
}

SeqVec resized(const SeqVec& x, std::size_t n) {
  if (n == 0) throw Error("resized: truncation must be >= 1");
  std::vector<double> v(n, 0.0);
  const std::size_t keep = std::min(n, x.size());
  std::copy_n(x.entries().begin(), keep, v.begin());
  double tail = x.tail_bound();
  if (x.size() > n) tail += norm(x.entries().subspan(n));
  return SeqVec(std::move(v), tail, x.origin());
}

}  // namespace apm
