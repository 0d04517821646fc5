#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "apm/l2core/generator.hpp"
#include "apm/l2core/index_set.hpp"

namespace apm {

inline constexpr double kDefaultEpsSupp = 1e-12;

/// Truncated element of l2(N): the first size() coordinates plus a certified
/// bound on the l2 norm of everything that was cut off.
///
/// Values are immutable. Coordinates are 1-based in `coord()` and 0-based in
/// `entries()`. `origin()` is the closed-form description the vector was
/// evaluated from, when there is one; it is what `support()` and the
/// structural analyzers consult for exact patterns.
class SeqVec {
 public:
  explicit SeqVec(std::vector<double> entries, double tail_bound = 0.0,
                  std::shared_ptr<const GeneratorDesc> origin = nullptr);

  static SeqVec zeros(std::size_t n);
  /// e_k at truncation n (1-based k <= n).
  static SeqVec unit(std::size_t n, std::size_t k);

  std::size_t size() const { return entries_.size(); }
  std::span<const double> entries() const { return entries_; }
  double coord(std::size_t k) const { return k >= 1 && k <= entries_.size() ? entries_[k - 1] : 0.0; }
  double tail_bound() const { return tail_bound_; }
  const std::shared_ptr<const GeneratorDesc>& origin() const { return origin_; }

  /// Copy with the origin replaced (entries and tail bound untouched).
  SeqVec with_origin(std::shared_ptr<const GeneratorDesc> origin) const;

 private:
  std::vector<double> entries_;
  double tail_bound_;
  std::shared_ptr<const GeneratorDesc> origin_;
};

struct InnerProduct {
  double value;
  // Bound on |<x, y>_{l2} - value| from the discarded coordinates.
  double error_bound;
};

SeqVec evaluate_generator(const GeneratorDesc& desc, std::size_t n);

/// Truncated inner product; the shorter vector is zero-padded.
InnerProduct inner(const SeqVec& x, const SeqVec& y);
double dot(std::span<const double> x, std::span<const double> y);
double norm(const SeqVec& x);
double norm(std::span<const double> x);

/// Indices with |x_k| > eps_supp; the exact symbolic pattern when x carries an origin.
IndexSet support(const SeqVec& x, double eps_supp = kDefaultEpsSupp);

SeqVec positive_part(const SeqVec& x);
SeqVec negative_part(const SeqVec& x);
/// |x| = x^+ + (-x)^+
SeqVec modulus(const SeqVec& x);
/// Coordinates of x on S, zero elsewhere.
SeqVec restrict(const SeqVec& x, const IndexSet& s);

// Arithmetic drops the origin; zero padding to the longer operand.
SeqVec operator+(const SeqVec& x, const SeqVec& y);
SeqVec operator-(const SeqVec& x, const SeqVec& y);
SeqVec operator-(const SeqVec& x);
SeqVec operator*(double a, const SeqVec& x);

/// max_k |x_k - y_k| over the zero-padded union of coordinates.
double max_abs_diff(const SeqVec& x, const SeqVec& y);

/// Copy truncated or zero-padded to n coordinates (tail bound grows by the
/// norm of dropped coordinates).
SeqVec resized(const SeqVec& x, std::size_t n);

}  // namespace apm
