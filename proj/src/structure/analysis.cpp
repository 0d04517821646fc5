#include "apm/structure/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "apm/errors.hpp"
#include "apm/structure/rotation.hpp"

namespace apm {

VectorFacts vector_facts(const SeqVec& v, double eps_supp) {
  VectorFacts f;
  if (v.origin()) {
    const SymbolicProfile prof = symbolic_profile(*v.origin());
    f.support = prof.support;
    f.positive = prof.positive;
    f.negative = prof.negative;
    f.symbolic = true;
    f.exact = true;
    f.signs_resolved = prof.signs_resolved;
    f.eventual = eventual_sign(*v.origin());
    f.family = v.origin()->family_name();
    return f;
  }
  std::vector<std::size_t> all, pos, neg;
  const auto e = v.entries();
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (std::abs(e[k]) <= eps_supp) continue;
    all.push_back(k + 1);
    (e[k] > 0 ? pos : neg).push_back(k + 1);
  }
  f.support = IndexSet::finite(all);
  f.positive = IndexSet::finite(pos);
  f.negative = IndexSet::finite(neg);
  f.exact = v.tail_bound() == 0.0;
  f.signs_resolved = f.exact;
  if (f.exact) {
    // same convention as the symbolic path: finite vectors count as eventually non-negative
    f.eventual = EventualSign{1, neg.empty() ? std::size_t{1} : neg.back() + 1};
  }
  f.family = "numeric";
  return f;
}

DisjointResult check_pairwise_disjoint(const Basis& basis, double eps_supp) {
  DisjointResult r;
  r.holds = true;
  std::vector<IndexSet> supp;
  for (const auto& v : basis.vectors()) {
    supp.push_back(support(v, eps_supp));
    r.symbolic = r.symbolic && v.origin() != nullptr;
  }
  for (std::size_t i = 0; i < supp.size(); ++i) {
    for (std::size_t j = i + 1; j < supp.size(); ++j) {
      IndexSet o = supp[i].intersect(supp[j]);
      if (!o.empty()) r.holds = false;
      r.overlaps.push_back({i, j, std::move(o)});
    }
  }
  return r;
}

const char* to_string(Decision d) {
  switch (d) {
    case Decision::Holds:
      return "Holds";
    case Decision::Fails:
      return "Fails";
    case Decision::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

FiniteIntersectionResult check_finite_intersection_signed(const Basis& basis, double eps_supp) {
  const std::size_t nv = basis.size();
  std::vector<VectorFacts> facts;
  for (const auto& v : basis.vectors()) facts.push_back(vector_facts(v, eps_supp));

  FiniteIntersectionResult fallback;
  for (std::size_t s = nv; s-- > 0;) {
    FiniteIntersectionResult r;
    r.signed_index = s;
    r.flipped.assign(nv, false);
    bool ok = true;
    std::string why;
    for (std::size_t i = 0; i < nv; ++i) {
      if (i == s) continue;
      if (facts[i].in_cone()) continue;
      if (facts[i].in_negative_cone()) {
        r.flipped[i] = true;
        continue;
      }
      ok = false;
      why = "v" + std::to_string(i + 1) + " is not in the cone or its negative";
    }
    if (!facts[s].eventual) {
      ok = false;
      why = "v" + std::to_string(s + 1) + " has no eventual sign";
    } else {
      r.sign = facts[s].eventual->sign;
      r.onset = facts[s].eventual->onset;
    }
    for (std::size_t i = 0; i < nv; ++i) {
      if (i == s) continue;
      IndexSet o = facts[i].support.intersect(facts[s].support);
      if (!o.is_finite()) {
        ok = false;
        why = "supp(v" + std::to_string(i + 1) + ") ∩ supp(v" + std::to_string(s + 1) + ") is infinite";
      }
      r.overlaps.push_back({i, s, std::move(o)});
    }
    if (ok) {
      r.decision = Decision::Holds;
      r.reason = "v" + std::to_string(s + 1) + " eventually signed";
      return r;
    }
    if (s + 1 == nv) {
      fallback = std::move(r);
      fallback.reason = why;
    }
  }
  fallback.decision = Decision::Fails;
  for (const auto& f : facts) {
    if (!f.exact) {
      fallback.decision = Decision::Inconclusive;
      fallback.reason = "numeric vector with nonzero tail: signs beyond the truncation are unknown";
    }
  }
  return fallback;
}

bool BB1Result::has_witness(std::size_t k) const {
  return std::any_of(witnesses.begin(), witnesses.end(), [k](const BB1Witness& w) { return w.k == k; });
}

namespace {

bool disjoint_and_signed(const Basis& basis, double eps_supp) {
  if (!check_pairwise_disjoint(basis, eps_supp).holds) return false;
  for (const auto& v : basis.vectors()) {
    const VectorFacts f = vector_facts(v, eps_supp);
    if (!f.in_cone() && !f.in_negative_cone()) return false;
  }
  return true;
}

}  // namespace

BB1Result check_bb_condition1(const Basis& basis, std::size_t up_to, double eps_supp) {
  BB1Result r;
  const std::size_t n = basis.truncation();
  // Q(e_k) = sum_i v_ik v_i; disjoint vectors in B ∪ -B give Q(e_k) = v_ik v_i with v_ik v_im >= 0
  if (disjoint_and_signed(basis, eps_supp)) {
    r.holds = true;
    r.analytic = true;
    return r;
  }
  if (basis.size() == 2) {
    if (auto rot = find_disjoint_rotation(basis); rot && disjoint_and_signed(rot->basis, eps_supp)) {
      r.holds = true;
      r.analytic = true;
      r.via_rotation = true;
      return r;
    }
  }
  const std::size_t up = up_to == 0 ? n : std::min(up_to, n);
  r.verified_up_to = up;
  const std::size_t nv = basis.size();
  std::vector<double> col(nv);
  for (std::size_t k = 1; k <= up; ++k) {
    bool touched = false;
    for (std::size_t i = 0; i < nv; ++i) {
      col[i] = basis[i].entries()[k - 1];
      touched = touched || col[i] != 0.0;
    }
    if (!touched) continue;  // Q(e_k) = 0
    double worst = 0.0;
    std::size_t where = 0;
    for (std::size_t m = 0; m < n; ++m) {
      double q = 0.0;
      for (std::size_t i = 0; i < nv; ++i) q += col[i] * basis[i].entries()[m];
      if (q < worst) {
        worst = q;
        where = m + 1;
      }
    }
    if (worst < -kNegativeEntryTol) r.witnesses.push_back({k, where, worst});
  }
  r.holds = r.witnesses.empty();
  return r;
}

const char* to_string(BB2Status s) {
  switch (s) {
    case BB2Status::Holds:
      return "Holds";
    case BB2Status::Fails:
      return "Fails";
    case BB2Status::Unsupported:
      return "Unsupported";
  }
  return "?";
}

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kArcEps = 1e-12;

double wrap2pi(double x) {
  x = std::fmod(x, 2 * kPi);
  return x < 0 ? x + 2 * kPi : x;
}

// Feasible directions of a closed convex cone in the plane.
struct Sector {
  enum Kind { Full, Arc, Line, Empty } kind = Full;
  double lo = 0.0;  // Arc: [lo, lo + width]; Line: {lo, lo + pi}
  double width = 2 * kPi;

  // Intersect with the half-plane {theta : cos(theta - phi) >= 0}.
  void cut(double phi) {
    const double s0 = phi - kPi / 2;
    switch (kind) {
      case Empty:
        return;
      case Full:
        kind = Arc;
        lo = wrap2pi(s0);
        width = kPi;
        return;
      case Line: {
        const bool first = std::cos(lo - phi) >= -kArcEps;
        const bool second = std::cos(lo + kPi - phi) >= -kArcEps;
        if (first && second) return;
        if (!first && !second) {
          kind = Empty;
          return;
        }
        kind = Arc;
        if (!first) lo = wrap2pi(lo + kPi);
        width = 0.0;
        return;
      }
      case Arc: {
        const double rel = wrap2pi(s0 - lo);
        // pieces of [0, width] ∩ ([rel, rel + pi] ∪ [rel - 2pi, rel - pi])
        const double a_lo = std::max(0.0, rel), a_hi = std::min(width, rel + kPi);
        const double b_lo = 0.0, b_hi = std::min(width, rel - kPi);
        const bool a_ok = a_hi >= a_lo - kArcEps;
        const bool b_ok = b_hi >= b_lo - kArcEps;
        if (a_ok && b_ok) {
          const double wa = std::max(0.0, a_hi - a_lo), wb = std::max(0.0, b_hi - b_lo);
          if (wa <= kArcEps && wb <= kArcEps && std::abs(a_lo - b_lo - kPi) <= 1e-9) {
            kind = Line;
            lo = wrap2pi(lo + b_lo);
            width = -1.0;
            return;
          }
          if (wa >= wb) {
            lo = wrap2pi(lo + a_lo);
            width = wa;
          } else {
            lo = wrap2pi(lo + b_lo);
            width = wb;
          }
        } else if (a_ok) {
          lo = wrap2pi(lo + a_lo);
          width = std::max(0.0, a_hi - a_lo);
        } else if (b_ok) {
          lo = wrap2pi(lo + b_lo);
          width = std::max(0.0, b_hi - b_lo);
        } else {
          kind = Empty;
        }
        return;
      }
    }
  }
};

std::shared_ptr<const GeneratorDesc> combine_origins(std::span<const double> coeffs,
                                                     std::span<const SeqVec> vectors) {
  std::vector<double> cs;
  std::vector<GeneratorDesc> parts;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (!vectors[i].origin()) return nullptr;
    if (coeffs[i] == 0.0) continue;
    cs.push_back(coeffs[i]);
    parts.push_back(*vectors[i].origin());
  }
  if (parts.empty()) return nullptr;
  return std::make_shared<const GeneratorDesc>(scaled_sum(std::move(cs), std::move(parts)));
}

}  // namespace

BB2Result check_bb_condition2_codim2(const Basis& basis) {
  BB2Result r;
  if (basis.size() != 2) return r;  // Unsupported
  const auto v1 = basis[0].entries();
  const auto v2 = basis[1].entries();
  Sector sec;
  for (std::size_t k = 0; k < v1.size(); ++k) {
    if (v1[k] == 0.0 && v2[k] == 0.0) continue;
    const auto before = sec;
    sec.cut(std::atan2(v2[k], v1[k]));
    if (sec.kind != before.kind || std::abs(sec.width - before.width) > kArcEps) {
      r.blocking_indices.push_back(k + 1);
    }
    if (sec.kind == Sector::Empty) break;
  }
  r.arc_start = sec.lo;
  r.arc_width = sec.kind == Sector::Line ? -1.0 : sec.width;
  if (sec.kind == Sector::Empty) {
    r.status = BB2Status::Holds;
    return r;
  }
  r.status = BB2Status::Fails;

  std::vector<double> candidates = {0.0, kPi, kPi / 2, -kPi / 2};
  if (sec.kind == Sector::Arc) {
    candidates.push_back(sec.lo);
    candidates.push_back(sec.lo + sec.width);
    candidates.push_back(sec.lo + sec.width / 2);
  } else if (sec.kind == Sector::Line) {
    candidates.push_back(sec.lo);
    candidates.push_back(sec.lo + kPi);
  }
  std::optional<BB2Certificate> numeric_only;
  for (double th : candidates) {
    const double c[2] = {std::round(std::cos(th) * 1e15) / 1e15, std::round(std::sin(th) * 1e15) / 1e15};
    SeqVec x = c[0] * basis[0] + c[1] * basis[1];
    const auto e = x.entries();
    if (std::any_of(e.begin(), e.end(), [](double t) { return t < -kNegativeEntryTol; })) continue;
    if (norm(x) < 1e-6) continue;
    BB2Certificate cert{c[0], c[1], x, false};
    if (auto o = combine_origins(c, basis.vectors())) {
      cert.symbolic_verified = symbolic_profile(*o).in_cone();
      cert.vector = x.with_origin(o);
    }
    if (cert.symbolic_verified) {
      r.certificate = std::move(cert);
      return r;
    }
    if (!numeric_only) numeric_only = std::move(cert);
  }
  r.certificate = std::move(numeric_only);
  return r;
}

PartitionVIZNP partition_vizinp(const Basis& basis, std::size_t truncation, double eps_supp) {
  if (basis.size() != 2) throw PreconditionViolated("partition_vizinp needs exactly two vectors");
  PartitionVIZNP p;
  const FiniteIntersectionResult fis = check_finite_intersection_signed(basis, eps_supp);
  if (fis.decision == Decision::Holds) {
    p.signed_index = fis.signed_index;
    p.cone_index = 1 - fis.signed_index;
  }
  const VectorFacts f1 = vector_facts(basis[p.cone_index], eps_supp);
  const VectorFacts f2 = vector_facts(basis[p.signed_index], eps_supp);
  IndexSet s1 = f1.support, s2 = f2.support, pos = f2.positive, neg = f2.negative;
  p.symbolic = f1.symbolic && f2.symbolic && f2.signs_resolved;
  if (!p.symbolic) {
    const std::size_t n = truncation == 0 ? basis.truncation() : truncation;
    const IndexSet head = IndexSet::range(1, n);
    std::vector<std::size_t> ps, ns;
    const auto e = basis[p.signed_index].entries();
    for (std::size_t k = 0; k < std::min(n, e.size()); ++k) {
      if (e[k] > eps_supp) ps.push_back(k + 1);
      if (e[k] < -eps_supp) ns.push_back(k + 1);
    }
    s1 = s1.intersect(head);
    s2 = s2.intersect(head);
    pos = IndexSet::finite(ps);
    neg = IndexSet::finite(ns);
  }
  p.V = s1.minus(s2);
  p.I = s1.intersect(s2);
  const IndexSet rest = s2.minus(s1);
  p.N = rest.intersect(neg);
  p.P = rest.minus(p.N);
  p.Z = s1.unite(s2).complement();
  return p;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::PairwiseDisjoint:
      return "PairwiseDisjoint";
    case Verdict::FiniteIntersectionSigned:
      return "FiniteIntersectionSigned";
    case Verdict::BB1_QPreservesCone:
      return "BB1_QPreservesCone";
    case Verdict::BB2_SpanMeetsConeTrivially:
      return "BB2_SpanMeetsConeTrivially";
    case Verdict::Unknown:
      return "Unknown";
  }
  return "?";
}

std::optional<Verdict> verdict_from_string(const std::string& s) {
  for (Verdict v : {Verdict::PairwiseDisjoint, Verdict::FiniteIntersectionSigned, Verdict::BB1_QPreservesCone,
                    Verdict::BB2_SpanMeetsConeTrivially, Verdict::Unknown}) {
    if (s == to_string(v)) return v;
  }
  return std::nullopt;
}

bool AnalysisReport::has(Verdict v) const {
  return std::find(verdicts.begin(), verdicts.end(), v) != verdicts.end();
}

AnalysisReport analyze(const Basis& basis, std::size_t bb1_up_to, double eps_supp) {
  AnalysisReport rep;
  for (const auto& v : basis.vectors()) rep.facts.push_back(vector_facts(v, eps_supp));
  rep.disjoint = check_pairwise_disjoint(basis, eps_supp);
  rep.finite_intersection = check_finite_intersection_signed(basis, eps_supp);
  rep.bb1 = check_bb_condition1(basis, bb1_up_to, eps_supp);
  rep.bb2 = check_bb_condition2_codim2(basis);
  if (basis.size() == 2) {
    rep.partition = partition_vizinp(basis, basis.truncation(), eps_supp);
    rep.rotation_found = find_disjoint_rotation(basis).has_value();
  }
  if (rep.disjoint.holds) rep.verdicts.push_back(Verdict::PairwiseDisjoint);
  if (rep.finite_intersection.decision == Decision::Holds) rep.verdicts.push_back(Verdict::FiniteIntersectionSigned);
  // a scan that stops short of the truncation is only a partial check
  if (rep.bb1.holds && (rep.bb1.analytic || rep.bb1.verified_up_to == basis.truncation())) {
    rep.verdicts.push_back(Verdict::BB1_QPreservesCone);
  }
  if (rep.bb2.status == BB2Status::Holds) rep.verdicts.push_back(Verdict::BB2_SpanMeetsConeTrivially);
  if (rep.verdicts.empty()) rep.verdicts.push_back(Verdict::Unknown);
  return rep;
}

}  // namespace apm
