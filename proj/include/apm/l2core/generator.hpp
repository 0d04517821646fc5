#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace apm {

// Which indices a progression family occupies, after `offset` leading zeros.
enum class Parity { All, Odd, Even };

// Sign of the m-th slot: constant, or (-1)^(m+1) for Alternating.
enum class SignPattern { Positive, Negative, Alternating };

class GeneratorDesc;

// values[k-1] at index k; zero beyond values.size().
struct FiniteList {
  std::vector<double> values;
};

// Slot m (m >= 1) holds sign(m) / m.
struct InterleavedHarmonic {
  std::size_t offset = 0;
  Parity parity = Parity::All;
  SignPattern signs = SignPattern::Positive;
};

// Slot m (m >= 1) holds sign(m) * ratio^m, with ratio in (-1, 1) \ {0}.
struct InterleavedGeometric {
  double ratio = 0.5;
  std::size_t offset = 0;
  Parity parity = Parity::All;
  SignPattern signs = SignPattern::Positive;
};

// sum_i coeffs[i] * parts[i]
struct ScaledSum {
  std::vector<double> coeffs;
  std::vector<GeneratorDesc> parts;
};

/// Closed-form description of an element of l2(N).
///
/// Slot m of a progression family sits at index
///   offset + m           (Parity::All)
///   offset + 2m - 1      (Parity::Odd)
///   offset + 2m          (Parity::Even)
/// and every value is multiplied by the positive `normalization`.
class GeneratorDesc {
 public:
  using Family = std::variant<FiniteList, InterleavedHarmonic, InterleavedGeometric, ScaledSum>;

  explicit GeneratorDesc(Family family, double normalization = 1.0);

  const Family& family() const { return family_; }
  double normalization() const { return normalization_; }

  /// Exact closed-form value at the 1-based index k.
  double value_at(std::size_t k) const;

  /// Smallest truncation holding every explicitly listed entry.
  std::size_t min_truncation() const;

  /// Same vector scaled by a positive factor.
  GeneratorDesc scaled(double factor) const;

  std::string family_name() const;

 private:
  Family family_;
  double normalization_;
};

/// Index of slot m (m >= 1) of a progression family.
std::size_t slot_index(std::size_t offset, Parity parity, std::size_t m);
/// Slot number sitting at index k, or 0 if k is not on the progression.
std::size_t slot_at(std::size_t offset, Parity parity, std::size_t k);
/// Number of slots whose index is <= n.
std::size_t slots_up_to(std::size_t offset, Parity parity, std::size_t n);
double slot_sign(SignPattern signs, std::size_t m);

std::string to_string(Parity p);
std::string to_string(SignPattern s);

/// Certified overestimate of (sum_{k > n} x_k^2)^(1/2).
double tail_bound_of(const GeneratorDesc& desc, std::size_t n);

// Convenience constructors for the common shapes.
GeneratorDesc finite_list(std::vector<double> values, double normalization = 1.0);
GeneratorDesc unit_vector(std::size_t k);
GeneratorDesc harmonic(Parity parity, SignPattern signs, double normalization = 1.0,
                       std::size_t offset = 0);
GeneratorDesc geometric(double ratio, Parity parity, SignPattern signs,
                        double normalization = 1.0, std::size_t offset = 0);
GeneratorDesc scaled_sum(std::vector<double> coeffs, std::vector<GeneratorDesc> parts,
                         double normalization = 1.0);

}  // namespace apm
