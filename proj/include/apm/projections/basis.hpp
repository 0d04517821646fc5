#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "apm/l2core/seq_vec.hpp"

namespace apm {

inline constexpr double kDefaultOrthoTol = 1e-10;

/// Orthonormal family {v_1, ..., v_N} at a common truncation, with the
/// measured orthonormality residual
///   max( max_{i != j} |<v_i, v_j>|, max_i |‖v_i‖ - 1| ).
class Basis {
 public:
  /// Wraps vectors that are already orthonormal; throws if the residual
  /// exceeds tol or the truncations differ.
  static Basis from_orthonormal(std::vector<SeqVec> vectors, double tol = kDefaultOrthoTol);

  std::size_t size() const { return vectors_.size(); }
  std::size_t truncation() const { return vectors_.front().size(); }
  const SeqVec& operator[](std::size_t i) const { return vectors_[i]; }
  const std::vector<SeqVec>& vectors() const { return vectors_; }
  double ortho_residual() const { return ortho_residual_; }
  /// Largest tail bound among the vectors.
  double max_tail_bound() const;

 private:
  Basis(std::vector<SeqVec> vectors, double residual)
      : vectors_(std::move(vectors)), ortho_residual_(residual) {}

  std::vector<SeqVec> vectors_;
  double ortho_residual_;
};

double orthonormality_residual(std::span<const SeqVec> vectors);

/// Modified Gram-Schmidt with one re-orthogonalization pass when the first
/// pass misses `tol`. When every input carries an origin, each output carries
/// the matching combination of origins. Throws DependentFamily when a pivot
/// norm falls below tol times the input norm.
Basis orthonormalize(std::span<const SeqVec> raw, double tol = kDefaultOrthoTol);

/// Q(x) = sum_i <x, v_i> v_i
SeqVec q_operator(const Basis& basis, const SeqVec& x);
/// P_A(x) = x - Q(x), A = span{v_i}^perp
SeqVec project_subspace(const Basis& basis, const SeqVec& x);
/// P_B(x) = x^+, B the cone of coordinatewise non-negative sequences
SeqVec project_cone(const SeqVec& x);

// In-place kernels shared with the iteration engine. `coeffs` receives
// <x, v_i>; `q` receives Q(x) (both resized as needed).
void q_apply(const Basis& basis, std::span<const double> x, std::vector<double>& coeffs,
             std::vector<double>& q);

}  // namespace apm
