#include "apm/projections/basis.hpp"

#include <algorithm>
#include <cmath>

#include "apm/errors.hpp"

namespace apm {

double orthonormality_residual(std::span<const SeqVec> vectors) {
  double r = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    r = std::max(r, std::abs(norm(vectors[i]) - 1.0));
    for (std::size_t j = 0; j < i; ++j) {
      r = std::max(r, std::abs(dot(vectors[i].entries(), vectors[j].entries())));
    }
  }
  return r;
}

Basis Basis::from_orthonormal(std::vector<SeqVec> vectors, double tol) {
  if (vectors.empty()) throw Error("Basis: at least one vector required");
  for (const auto& v : vectors) {
    if (v.size() != vectors.front().size()) throw Error("Basis: vectors must share one truncation");
  }
  const double res = orthonormality_residual(vectors);
  if (!(res <= tol)) throw DependentFamily("Basis: orthonormality residual " + std::to_string(res) + " exceeds tolerance");
  return Basis(std::move(vectors), res);
}

double Basis::max_tail_bound() const {
  double t = 0.0;
  for (const auto& v : vectors_) t = std::max(t, v.tail_bound());
  return t;
}

namespace {

// Projection coefficients this small are treated as exact zeros, so inputs
// that are already orthogonal keep their exact supports.
constexpr double kSkipCoefficient = 1e-15;

struct Working {
  std::vector<double> entries;
  std::vector<double> coeffs;  // entries = sum_j coeffs[j] * raw[j]
};

void orthogonalize_against(Working& w, const Working& u, double scale) {
  const double c = dot(w.entries, u.entries);
  if (std::abs(c) <= kSkipCoefficient * scale) return;
  for (std::size_t k = 0; k < w.entries.size(); ++k) w.entries[k] -= c * u.entries[k];
  for (std::size_t j = 0; j < w.coeffs.size(); ++j) w.coeffs[j] -= c * u.coeffs[j];
}

void normalize(Working& w, double input_norm, double tol) {
  const double pivot = norm(w.entries);
  if (!(pivot >= tol * input_norm) || pivot == 0.0) {
    throw DependentFamily("orthonormalize: pivot norm " + std::to_string(pivot) +
                          " below tolerance; family is (nearly) linearly dependent");
  }
  for (auto& e : w.entries) e /= pivot;
  for (auto& c : w.coeffs) c /= pivot;
}

}  // namespace

Basis orthonormalize(std::span<const SeqVec> raw, double tol) {
  if (raw.empty()) throw Error("orthonormalize: empty family");
  const std::size_t n = raw.front().size();
  for (const auto& v : raw) {
    if (v.size() != n) throw Error("orthonormalize: vectors must share one truncation");
  }
  const std::size_t count = raw.size();
  std::vector<Working> out;
  std::vector<double> input_norm(count);
  for (std::size_t i = 0; i < count; ++i) {
    Working w{std::vector<double>(raw[i].entries().begin(), raw[i].entries().end()),
              std::vector<double>(count, 0.0)};
    w.coeffs[i] = 1.0;
    input_norm[i] = norm(raw[i]);
    for (const auto& u : out) orthogonalize_against(w, u, input_norm[i]);
    normalize(w, input_norm[i], tol);
    out.push_back(std::move(w));
  }

  const auto to_seqvecs = [&]() {
    const bool tracked = std::all_of(raw.begin(), raw.end(), [](const SeqVec& v) { return v.origin() != nullptr; });
    std::vector<SeqVec> vs;
    for (const auto& w : out) {
      double tail = 0.0;
      for (std::size_t j = 0; j < count; ++j) tail += std::abs(w.coeffs[j]) * raw[j].tail_bound();
      std::shared_ptr<const GeneratorDesc> origin;
      if (tracked) {
        std::vector<std::size_t> nz;
        for (std::size_t j = 0; j < count; ++j) {
          if (w.coeffs[j] != 0.0) nz.push_back(j);
        }
        if (nz.size() == 1 && w.coeffs[nz[0]] > 0.0) {
          origin = std::make_shared<const GeneratorDesc>(raw[nz[0]].origin()->scaled(w.coeffs[nz[0]]));
        } else {
          std::vector<double> cs;
          std::vector<GeneratorDesc> parts;
          for (auto j : nz) {
            cs.push_back(w.coeffs[j]);
            parts.push_back(*raw[j].origin());
          }
          origin = std::make_shared<const GeneratorDesc>(scaled_sum(std::move(cs), std::move(parts)));
        }
      }
      vs.emplace_back(w.entries, tail, std::move(origin));
    }
    return vs;
  };

  std::vector<SeqVec> vs = to_seqvecs();
  double res = orthonormality_residual(vs);
  if (res > tol) {
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < i; ++j) orthogonalize_against(out[i], out[j], 1.0);
      normalize(out[i], 1.0, tol);
    }
    vs = to_seqvecs();
    res = orthonormality_residual(vs);
    if (res > tol) {
      throw DependentFamily("orthonormalize: residual " + std::to_string(res) +
                            " after re-orthogonalization exceeds tolerance");
    }
  }
  return Basis::from_orthonormal(std::move(vs), tol);
}

void q_apply(const Basis& basis, std::span<const double> x, std::vector<double>& coeffs,
             std::vector<double>& q) {
  const std::size_t n = basis.truncation();
  coeffs.resize(basis.size());
  q.assign(n, 0.0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto v = basis[i].entries();
    const double c = dot(x, v);
    coeffs[i] = c;
    for (std::size_t k = 0; k < n; ++k) q[k] += c * v[k];
  }
}

namespace {

SeqVec padded(const Basis& basis, const SeqVec& x) {
  if (x.size() == basis.truncation()) return x;
  for (std::size_t k = basis.truncation(); k < x.size(); ++k) {
    if (x.entries()[k] != 0.0) throw Error("projection: vector has coordinates beyond the basis truncation");
  }
  return resized(x, basis.truncation());
}

}  // namespace

SeqVec q_operator(const Basis& basis, const SeqVec& x) {
  const SeqVec xp = padded(basis, x);
  std::vector<double> coeffs, q;
  q_apply(basis, xp.entries(), coeffs, q);
  return SeqVec(std::move(q));
}

SeqVec project_subspace(const Basis& basis, const SeqVec& x) {
  const SeqVec xp = padded(basis, x);
  std::vector<double> coeffs, q;
  q_apply(basis, xp.entries(), coeffs, q);
  std::vector<double> a(xp.entries().begin(), xp.entries().end());
  for (std::size_t k = 0; k < a.size(); ++k) a[k] -= q[k];
  return SeqVec(std::move(a));
}

SeqVec project_cone(const SeqVec& x) { return positive_part(x); }

}  // namespace apm
