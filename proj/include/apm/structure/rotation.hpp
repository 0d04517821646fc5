#pragma once

#include <optional>

#include "apm/projections/basis.hpp"

namespace apm {

constexpr double kAngleClusterTol = 1e-9;

struct Rotation {
  double cos_theta;
  double sin_theta;
  // w1 = s1 (c v1 + s v2), w2 = s2 (-s v1 + c v2), s_i = ±1
  double sign1;
  double sign2;
  Basis basis;
};

/// Rotation of a two-vector basis onto one with disjoint supports, when the
/// per-index directions of (v1_k, v2_k) form two orthogonal clusters mod pi.
std::optional<Rotation> find_disjoint_rotation(const Basis& basis, double tol = kAngleClusterTol);

}  // namespace apm
