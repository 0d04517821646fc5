#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "apm/l2core/index_set.hpp"
#include "apm/l2core/symbolic.hpp"
#include "apm/projections/basis.hpp"

namespace apm {

/// Support and sign data of one basis vector. Exact when the vector carries
/// an origin (symbolic) or is a plain numeric vector with zero tail bound.
struct VectorFacts {
  IndexSet support;
  IndexSet positive;
  IndexSet negative;
  bool symbolic = false;
  bool exact = false;
  bool signs_resolved = false;
  std::optional<EventualSign> eventual;
  std::string family;

  bool in_cone() const { return exact && signs_resolved && negative.empty(); }
  bool in_negative_cone() const { return exact && signs_resolved && positive.empty(); }
};

VectorFacts vector_facts(const SeqVec& v, double eps_supp = kDefaultEpsSupp);

struct PairOverlap {
  std::size_t i;
  std::size_t j;
  IndexSet overlap;
};

struct DisjointResult {
  bool holds = false;
  bool symbolic = true;  // false when some support came from the numeric threshold
  std::vector<PairOverlap> overlaps;
};

DisjointResult check_pairwise_disjoint(const Basis& basis, double eps_supp = kDefaultEpsSupp);

enum class Decision { Holds, Fails, Inconclusive };
const char* to_string(Decision d);

struct FiniteIntersectionResult {
  Decision decision = Decision::Fails;
  std::size_t signed_index = 0;  // vector with the eventual sign
  int sign = 1;
  std::size_t onset = 1;
  std::vector<PairOverlap> overlaps;  // supp(v_i) ∩ supp(v_signed)
  std::vector<bool> flipped;          // v_i in -B: treated as -v_i
  std::string reason;
};

FiniteIntersectionResult check_finite_intersection_signed(const Basis& basis,
                                                          double eps_supp = kDefaultEpsSupp);

struct BB1Witness {
  std::size_t k;      // Q(e_k) ...
  std::size_t index;  // ... has its most negative entry here
  double value;
};

// Q(X^+) ⊆ X^+
struct BB1Result {
  bool holds = false;
  bool analytic = false;      // decided from supports and signs for all k
  bool via_rotation = false;  // ... after rotating to a disjoint basis
  std::size_t verified_up_to = 0;
  std::vector<BB1Witness> witnesses;  // every failing k, ascending

  const BB1Witness* first_failure() const { return witnesses.empty() ? nullptr : &witnesses.front(); }
  bool has_witness(std::size_t k) const;
};

constexpr double kNegativeEntryTol = 1e-12;

/// Failure means some Q(e_k) has an entry < -1e-12. `up_to` = 0 scans the
/// whole truncation.
BB1Result check_bb_condition1(const Basis& basis, std::size_t up_to = 0,
                              double eps_supp = kDefaultEpsSupp);

struct BB2Certificate {
  double alpha;
  double beta;
  SeqVec vector = SeqVec::zeros(1);  // alpha v_1 + beta v_2
  bool symbolic_verified = false;
};

enum class BB2Status { Holds, Fails, Unsupported };
const char* to_string(BB2Status s);

// span{v_1, v_2} ∩ X^+ = {0}
struct BB2Result {
  BB2Status status = BB2Status::Unsupported;
  std::optional<BB2Certificate> certificate;
  // indices whose half-planes cut the feasible sector down (Holds) or
  // bound it (Fails)
  std::vector<std::size_t> blocking_indices;
  // feasible directions: arc [arc_start, arc_start + arc_width] in radians;
  // width < 0 when only the two directions arc_start, arc_start + pi remain
  double arc_start = 0.0;
  double arc_width = 0.0;
};

BB2Result check_bb_condition2_codim2(const Basis& basis);

struct PartitionVIZNP {
  IndexSet V, I, Z, N, P;
  std::size_t cone_index = 0;
  std::size_t signed_index = 1;
  bool symbolic = true;
};

/// V = S1 \ S2, I = S1 ∩ S2, Z = rest, N/P = S2 \ S1 split by the sign of the
/// signed vector. Ordering of the pair follows the finite-intersection check.
PartitionVIZNP partition_vizinp(const Basis& basis, std::size_t truncation = 0,
                                double eps_supp = kDefaultEpsSupp);

enum class Verdict { PairwiseDisjoint, FiniteIntersectionSigned, BB1_QPreservesCone,
                     BB2_SpanMeetsConeTrivially, Unknown };
const char* to_string(Verdict v);
std::optional<Verdict> verdict_from_string(const std::string& s);

struct AnalysisReport {
  std::vector<VectorFacts> facts;
  DisjointResult disjoint;
  FiniteIntersectionResult finite_intersection;
  BB1Result bb1;
  BB2Result bb2;
  std::optional<PartitionVIZNP> partition;
  bool rotation_found = false;
  std::vector<Verdict> verdicts;  // sorted, Unknown alone when nothing holds

  bool has(Verdict v) const;
};

AnalysisReport analyze(const Basis& basis, std::size_t bb1_up_to = 0,
                       double eps_supp = kDefaultEpsSupp);

}  // namespace apm
