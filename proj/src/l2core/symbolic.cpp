#include "apm/l2core/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "apm/errors.hpp"

namespace apm {

namespace {

// A progression or finite-list piece of a flattened generator, carrying the
// accumulated scale of every enclosing ScaledSum and normalization.
struct Atom {
  enum class Kind { Finite, Harmonic, Geometric };
  Kind kind;
  double scale;
  std::vector<double> values;  // Finite
  double ratio = 0.0;          // Geometric
  std::size_t offset = 0;
  Parity parity = Parity::All;
  SignPattern signs = SignPattern::Positive;

  std::size_t first_index() const {
    if (kind == Kind::Finite) return 1;
    return slot_index(offset, parity, 1);
  }

  std::size_t end_index() const {  // one past the last explicit entry
    return kind == Kind::Finite ? values.size() + 1 : first_index();
  }

  double value_at(std::size_t k) const {
    if (kind == Kind::Finite) return k <= values.size() ? scale * values[k - 1] : 0.0;
    const std::size_t m = slot_at(offset, parity, k);
    if (m == 0) return 0.0;
    const double s = slot_sign(signs, m);
    if (kind == Kind::Harmonic) return scale * s / static_cast<double>(m);
    return scale * s * std::pow(ratio, static_cast<double>(m));
  }
};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void flatten(const GeneratorDesc& d, double scale, std::vector<Atom>& out) {
  const double s = scale * d.normalization();
  std::visit(overloaded{
                 [&](const FiniteList& f) {
                   Atom a{Atom::Kind::Finite, s, f.values};
                   out.push_back(std::move(a));
                 },
                 [&](const InterleavedHarmonic& h) {
                   Atom a{Atom::Kind::Harmonic, s, {}};
                   a.offset = h.offset;
                   a.parity = h.parity;
                   a.signs = h.signs;
                   out.push_back(std::move(a));
                 },
                 [&](const InterleavedGeometric& g) {
                   Atom a{Atom::Kind::Geometric, s, {}};
                   a.ratio = g.ratio;
                   a.offset = g.offset;
                   a.parity = g.parity;
                   a.signs = g.signs;
                   out.push_back(std::move(a));
                 },
                 [&](const ScaledSum& sum) {
                   for (std::size_t i = 0; i < sum.parts.size(); ++i) {
                     if (sum.coeffs[i] != 0.0) flatten(sum.parts[i], s * sum.coeffs[i], out);
                   }
                 },
             },
             d.family());
}

// First index >= t with k % 4 == r.
std::size_t class_start(std::size_t t, unsigned r) {
  std::size_t k = t;
  while (k % 4 != r) ++k;
  return k;
}

// Terms of one atom on the residue class through k0 (k0 on the progression).
CanonicalTerm atom_term(const Atom& a, std::size_t k0) {
  const double v0 = a.value_at(k0);
  const double stride = a.parity == Parity::All ? 1.0 : 2.0;
  if (a.kind == Atom::Kind::Geometric) {
    // Four indices along the class advance the slot by 4/stride.
    return {CanonicalTerm::Kind::Geometric, v0, std::pow(std::abs(a.ratio), 4.0 / stride)};
  }
  // value = scale * s / m with m = (k - c) / stride, so value = v0 * (k0 + shift) / (k + shift)
  const std::size_t m0 = slot_at(a.offset, a.parity, k0);
  const double shift = stride * static_cast<double>(m0) - static_cast<double>(k0);
  return {CanonicalTerm::Kind::Harmonic, v0 * (static_cast<double>(k0) + shift), shift};
}

struct MergedClass {
  std::vector<CanonicalTerm> terms;
  std::size_t onset;  // first class index from which the sign is constant
  ClassSign sign;
};

bool same_param(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

MergedClass merge_class(const std::vector<CanonicalTerm>& raw, std::size_t k0) {
  std::vector<CanonicalTerm> merged;
  std::vector<double> mass;
  for (const auto& t : raw) {
    bool placed = false;
    for (std::size_t i = 0; i < merged.size(); ++i) {
      if (merged[i].kind == t.kind && same_param(merged[i].param, t.param)) {
        merged[i].coeff += t.coeff;
        mass[i] += std::abs(t.coeff);
        placed = true;
        break;
      }
    }
    if (!placed) {
      merged.push_back(t);
      mass.push_back(std::abs(t.coeff));
    }
  }
  std::vector<CanonicalTerm> kept;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    if (std::abs(merged[i].coeff) > kCancellationTol * mass[i]) kept.push_back(merged[i]);
  }

  MergedClass out{kept, k0, ClassSign::Zero};
  if (kept.empty()) return out;
  const auto sign_of = [](double c) { return c > 0 ? ClassSign::Positive : ClassSign::Negative; };
  if (kept.size() == 1) {
    out.sign = sign_of(kept[0].coeff);
    return out;
  }

  const bool all_geo = std::all_of(kept.begin(), kept.end(),
                                   [](const CanonicalTerm& t) { return t.kind == CanonicalTerm::Kind::Geometric; });
  const bool all_harm = std::all_of(kept.begin(), kept.end(),
                                    [](const CanonicalTerm& t) { return t.kind == CanonicalTerm::Kind::Harmonic; });
  if (all_geo) {
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.param > b.param; });
    // Dominance |c1| r1^q > sum_j |cj| rj^q is monotone in q once it holds.
    const double c1 = std::abs(kept[0].coeff);
    for (std::size_t q = 0; q < 1000000; ++q) {
      double rest = 0.0;
      for (std::size_t j = 1; j < kept.size(); ++j) {
        rest += std::abs(kept[j].coeff) / c1 *
                std::exp(static_cast<double>(q) * (std::log(kept[j].param) - std::log(kept[0].param)));
      }
      if (rest < 1.0) {
        out.onset = k0 + 4 * q;
        out.sign = sign_of(kept[0].coeff);
        return out;
      }
    }
    out.sign = ClassSign::Unknown;
    return out;
  }
  if (all_harm) {
    // f(k) = S/k - (1/k) sum c_i h_i / (k + h_i): sign(S) once
    // k > H + sum |c_i h_i| / |S|, H = max |h_i|.
    double total = 0.0, mass_c = 0.0, weighted = 0.0, hmax = 0.0;
    for (const auto& t : kept) {
      total += t.coeff;
      mass_c += std::abs(t.coeff);
      weighted += std::abs(t.coeff * t.param);
      hmax = std::max(hmax, std::abs(t.param));
    }
    if (std::abs(total) <= kCancellationTol * mass_c) {
      out.sign = ClassSign::Unknown;
      return out;
    }
    const double bound = hmax + weighted / std::abs(total);
    std::size_t k = k0;
    while (static_cast<double>(k) <= bound) k += 4;
    out.onset = k;
    out.sign = sign_of(total);
    return out;
  }
  out.sign = ClassSign::Unknown;
  return out;
}

CanonicalForm build(const std::vector<Atom>& atoms, std::size_t threshold,
                    std::array<MergedClass, 4>* merged_out) {
  CanonicalForm form;
  form.threshold = threshold;
  form.prefix.reserve(threshold - 1);
  for (std::size_t k = 1; k < threshold; ++k) {
    double v = 0.0, mass = 0.0;
    for (const auto& a : atoms) {
      const double x = a.value_at(k);
      v += x;
      mass += std::abs(x);
    }
    if (std::abs(v) <= kCancellationTol * mass && mass > std::abs(v)) v = 0.0;
    form.prefix.push_back(v);
  }
  for (unsigned r = 0; r < 4; ++r) {
    const std::size_t k0 = class_start(threshold, r);
    std::vector<CanonicalTerm> raw;
    for (const auto& a : atoms) {
      if (a.kind == Atom::Kind::Finite) continue;
      if (slot_at(a.offset, a.parity, k0) == 0) continue;
      raw.push_back(atom_term(a, k0));
    }
    MergedClass mc = merge_class(raw, k0);
    form.tails[r] = mc.terms;
    form.class_sign[r] = mc.sign;
    (*merged_out)[r] = std::move(mc);
  }
  return form;
}

}  // namespace

double CanonicalForm::value_at(std::size_t k) const {
  if (k == 0) throw Error("CanonicalForm: indices are 1-based");
  if (k < threshold) return prefix[k - 1];
  const unsigned r = k % 4;
  const std::size_t k0 = class_start(threshold, r);
  double v = 0.0;
  for (const auto& t : tails[r]) {
    if (t.kind == CanonicalTerm::Kind::Geometric) {
      v += t.coeff * std::pow(t.param, static_cast<double>(k - k0) / 4.0);
    } else {
      v += t.coeff / (static_cast<double>(k) + t.param);
    }
  }
  return v;
}

CanonicalForm canonicalize(const GeneratorDesc& desc) {
  std::vector<Atom> atoms;
  flatten(desc, 1.0, atoms);
  std::size_t t = 1;
  for (const auto& a : atoms) t = std::max(t, a.end_index());

  std::array<MergedClass, 4> merged;
  CanonicalForm form = build(atoms, t, &merged);
  // Raise the threshold past every class onset so each tail class keeps a
  // single sign from the threshold on; one rebuild suffices since the
  // dominance bounds stay valid further out.
  std::size_t needed = t;
  for (const auto& mc : merged) {
    if (mc.sign != ClassSign::Unknown && mc.sign != ClassSign::Zero) needed = std::max(needed, mc.onset);
  }
  if (needed > t) form = build(atoms, needed, &merged);
  return form;
}

SymbolicProfile symbolic_profile(const GeneratorDesc& desc) {
  const CanonicalForm form = canonicalize(desc);
  std::vector<std::size_t> nz, pos, neg;
  for (std::size_t k = 1; k < form.threshold; ++k) {
    const double v = form.prefix[k - 1];
    if (v != 0.0) nz.push_back(k);
    if (v > 0.0) pos.push_back(k);
    if (v < 0.0) neg.push_back(k);
  }
  std::uint8_t nz_mask = 0, pos_mask = 0, neg_mask = 0;
  SymbolicProfile p;
  for (unsigned r = 0; r < 4; ++r) {
    const auto bit = std::uint8_t(1u << r);
    switch (form.class_sign[r]) {
      case ClassSign::Zero:
        break;
      case ClassSign::Positive:
        nz_mask |= bit;
        pos_mask |= bit;
        break;
      case ClassSign::Negative:
        nz_mask |= bit;
        neg_mask |= bit;
        break;
      case ClassSign::Unknown:
        nz_mask |= bit;
        p.signs_resolved = false;
        break;
    }
  }
  const auto combine = [&](std::vector<std::size_t> explicit_part, std::uint8_t mask) {
    return IndexSet::finite(std::move(explicit_part)).unite(IndexSet::periodic(form.threshold, mask));
  };
  p.support = combine(nz, nz_mask);
  p.positive = combine(pos, pos_mask);
  p.negative = combine(neg, neg_mask);
  return p;
}

std::optional<EventualSign> eventual_sign(const GeneratorDesc& desc) {
  const CanonicalForm form = canonicalize(desc);
  bool has_pos = false, has_neg = false;
  for (unsigned r = 0; r < 4; ++r) {
    switch (form.class_sign[r]) {
      case ClassSign::Unknown:
        return std::nullopt;
      case ClassSign::Positive:
        has_pos = true;
        break;
      case ClassSign::Negative:
        has_neg = true;
        break;
      case ClassSign::Zero:
        break;
    }
  }
  if (has_pos && has_neg) return std::nullopt;
  // A finitely supported vector is eventually zero; report it as non-negative.
  const int sign = has_neg ? -1 : 1;
  std::size_t onset = 1;
  for (std::size_t k = 1; k < form.threshold; ++k) {
    const double v = form.prefix[k - 1];
    if ((sign > 0 && v < 0.0) || (sign < 0 && v > 0.0)) onset = k + 1;
  }
  return EventualSign{sign, onset};
}

}  // namespace apm
