#include "apm/structure/rotation.hpp"

#include <cmath>
#include <numbers>

#include "apm/errors.hpp"

namespace apm {

namespace {

constexpr double kPi = std::numbers::pi;
// Below this magnitude the direction of (v1_k, v2_k) is dominated by rounding.
constexpr double kTinyEntry = 1e-250;

double mod_pi(double a) {
  a = std::fmod(a, kPi);
  return a < 0 ? a + kPi : a;
}

double dist_mod_pi(double a, double b) {
  const double d = mod_pi(a - b);
  return std::min(d, kPi - d);
}

}  // namespace

std::optional<Rotation> find_disjoint_rotation(const Basis& basis, double tol) {
  if (basis.size() != 2) throw PreconditionViolated("find_disjoint_rotation needs exactly two vectors");
  const auto v1 = basis[0].entries();
  const auto v2 = basis[1].entries();
  const std::size_t n = v1.size();

  std::vector<double> centers;
  std::optional<std::size_t> first;
  for (std::size_t k = 0; k < n; ++k) {
    const double mag = std::max(std::abs(v1[k]), std::abs(v2[k]));
    if (mag < kTinyEntry) continue;
    if (!first) first = k;
    const double a = mod_pi(std::atan2(v2[k], v1[k]));
    bool placed = false;
    for (double c : centers) placed = placed || dist_mod_pi(a, c) <= tol;
    if (!placed) {
      if (centers.size() == 2) return std::nullopt;
      centers.push_back(a);
    }
  }
  if (centers.size() != 2 || std::abs(dist_mod_pi(centers[0], centers[1]) - kPi / 2) > tol) return std::nullopt;

  const double theta = std::atan2(v2[*first], v1[*first]);
  const double c = std::cos(theta), s = std::sin(theta);
  std::vector<double> w1(n, 0.0), w2(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (v1[k] == 0.0 && v2[k] == 0.0) continue;
    const double a = mod_pi(std::atan2(v2[k], v1[k]));
    if (dist_mod_pi(a, centers[0]) <= dist_mod_pi(a, centers[1])) {
      w1[k] = c * v1[k] + s * v2[k];
    } else {
      w2[k] = -s * v1[k] + c * v2[k];
    }
  }
  double sign2 = 1.0;
  for (double x : w2) {
    if (x != 0.0) {
      sign2 = x > 0 ? 1.0 : -1.0;
      break;
    }
  }
  if (sign2 < 0) {
    for (double& x : w2) x = -x;
  }

  const double tail = std::abs(c) * basis[0].tail_bound() + std::abs(s) * basis[1].tail_bound();
  const double tail2 = std::abs(s) * basis[0].tail_bound() + std::abs(c) * basis[1].tail_bound();
  std::shared_ptr<const GeneratorDesc> o1, o2;
  if (basis[0].origin() && basis[1].origin()) {
    const GeneratorDesc& g1 = *basis[0].origin();
    const GeneratorDesc& g2 = *basis[1].origin();
    o1 = std::make_shared<const GeneratorDesc>(scaled_sum({c, s}, {g1, g2}));
    o2 = std::make_shared<const GeneratorDesc>(scaled_sum({-s * sign2, c * sign2}, {g1, g2}));
  }
  try {
    Basis rotated = Basis::from_orthonormal({SeqVec(std::move(w1), tail, o1), SeqVec(std::move(w2), tail2, o2)},
                                            kAngleClusterTol);
    return Rotation{c, s, 1.0, sign2, std::move(rotated)};
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace apm
