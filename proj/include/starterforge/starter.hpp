#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "starterforge/cyclotomy.hpp"
#include "starterforge/ffield.hpp"

namespace starterforge {

// Unordered pair of distinct nonzero elements, stored smaller encoding first.
struct Pair {
  FieldElement a, b;

  friend bool operator==(const Pair&, const Pair&) = default;
  friend bool operator<(const Pair& x, const Pair& y) {
    return x.a.enc != y.a.enc ? x.a.enc < y.a.enc : x.b.enc < y.b.enc;
  }
};

// Canonicalizes and validates: both members nonzero, distinct, in F.
Pair make_starter_pair(const FieldSpec& F, FieldElement x, FieldElement y);

enum class ProvenanceKind : int8_t { Dinitz, TwoQuotient, External };

struct Provenance {
  ProvenanceKind kind = ProvenanceKind::External;
  FieldElement beta1{}, beta2{};  // Dinitz uses beta1 only
};

// A candidate starter: pair list kept sorted. The pairs need not actually
// satisfy the starter axioms; verify_starter is the judge.
struct Starter {
  FieldSpec field;
  std::vector<Pair> pairs;
  Provenance prov;
};

// The unordered ratio class {y/x, x/y} of a pair, sorted by encoding
// (lo == hi when the ratio is self-inverse).
struct RatioClass {
  FieldElement lo, hi;

  bool contains(FieldElement r) const { return r == lo || r == hi; }
  friend bool operator==(const RatioClass&, const RatioClass&) = default;
};

enum class MinQuotient : int8_t { Zero = 0, One = 1, Two = 2, More = 3 };

// Exact classification of the smallest quotient set of size <= 2: a set Q
// covers the pairs when every pair has y/x or x/y in Q. quotient_set holds
// the lexicographically smallest witness (by sorted encodings) when
// min_le2 <= Two, and is empty otherwise.
struct QuotientProfile {
  std::vector<RatioClass> ratios;  // one class per pair, in pair order
  MinQuotient min_le2 = MinQuotient::Zero;
  std::vector<FieldElement> quotient_set;
};

QuotientProfile quotient_classify(const FieldSpec& F, const std::vector<Pair>& pairs);

enum class StarterAxiom : int8_t { ElementCover, DifferenceCover, StrongSums };

struct AxiomFailure {
  StarterAxiom axiom;
  std::string detail;
  std::vector<int64_t> witnesses;  // offending encodings, capped
};

struct VerificationReport {
  bool is_starter = false;
  bool is_strong = false;
  int64_t sum_count = 0;
  bool zero_sum_present = false;  // informational; see the nonzero-sums CLI flag
  QuotientProfile quotient;
  std::vector<AxiomFailure> failures;
};

// Checks the two starter axioms (pair members tile F_q^*; signed differences
// tile F_q^*) and counts distinct pair sums. is_strong additionally requires
// all sums distinct. Axiom violations are reported, not thrown; an empty pair
// list simply fails. Runs in O(q) plus O(n) inversions.
VerificationReport verify_starter(const FieldSpec& F, const std::vector<Pair>& pairs);

// One-quotient starter {alpha^i, alpha^i * beta} for q = 3 (mod 4), q != 3,
// beta a non-residue, beta != -1.
Starter dinitz_starter(const FieldSpec& F, FieldElement beta);

// An admissible (beta1, beta2) with its two product conditions evaluated:
// cond_minus_plus  <=>  (beta1-1)(beta2+1) in NQR
// cond_plus_minus  <=>  (beta1+1)(beta2-1) in NQR
struct BetaPair {
  FieldElement beta1, beta2;
  bool cond_minus_plus = false;
  bool cond_plus_minus = false;

  bool valid() const { return cond_minus_plus && cond_plus_minus; }
};

// Validates beta1 in NQR and beta2 in beta1 * Chat_0 (throws naming the
// failed membership), then evaluates the conditions. Neither factor can be
// zero for admissible input, which the constructor still re-checks.
BetaPair beta_pair_conditions(const CosetSystem& sys, FieldElement beta1,
                              FieldElement beta2);

// Valid pairs for a fixed beta1, beta2 ascending.
std::vector<BetaPair> beta_pairs_for(const CosetSystem& sys, FieldElement beta1);

// All valid pairs, ordered by (beta1, beta2) encodings. Throws
// TheoremViolation when empty (the existence theorem says it never is).
std::vector<BetaPair> search_beta_pairs(const CosetSystem& sys);

// {(b1,b2), (b2,b1), (-b1,-b2), (-b2,-b1)}, each re-validated through
// beta_pair_conditions. Requires a valid input pair.
std::array<BetaPair, 4> symmetric_variants(const CosetSystem& sys, const BetaPair& bp);

// The two-quotient starter S(beta1,beta2) = union over j < delta1 of
// {x, beta1*x} for x in C_j and {y, -beta2*y} for y in Chat_j.
// Requires bp.valid().
Starter two_quotient_starter(const CosetSystem& sys, const BetaPair& bp);

// Smallest witnesses inside beta * Chat_0 for both product variants:
// (minus1-1)(minus2-1) in NQR and (plus1+1)(plus2+1) in NQR. "Smallest" is
// lexicographic over sorted coset elements with first < second. Throws
// TheoremViolation if either variant has no witness. beta must be in NQR.
struct CosetPairWitnesses {
  FieldElement minus1, minus2;
  FieldElement plus1, plus2;
};

CosetPairWitnesses coset_pair_witnesses(const CosetSystem& sys, FieldElement beta);

// Replays the difference/sum bookkeeping of the correctness proof:
// E_j = {+-x(beta1-1) : x in C_j} and E*_j = {+-y(beta2+1) : y in Chat_j}
// must tile F_q^* (block collisions are named), the sum blocks
// P_j = {x(beta1+1)} and P*_j = {-y(beta2-1)} must be delta*t distinct
// values, and all E elements must differ in residuosity from all E* elements.
struct PartitionReport {
  bool ok = false;
  int64_t difference_blocks = 0;   // 2 * delta1
  int64_t block_size = 0;          // 2t
  int64_t sum_value_count = 0;     // expected delta * t
  std::vector<std::string> failures;
};

PartitionReport proof_partition_check(const CosetSystem& sys, const BetaPair& bp);

// For k = 2 only: whether S(beta1,beta2) equals the rescaled one-quotient
// form Shat(beta1, -beta2) built from (beta1-1)^-1 * C_0 and
// (beta2-1)^-1 * Chat_0. Requires bp.valid(); returns NotApplicable unless
// (beta1-1) in C_0 and -(beta2-1) in Chat_0. Throws for k != 2.
enum class DinitzEquivalence : int8_t { Equal, NotEqual, NotApplicable };

DinitzEquivalence dinitz_equivalence_check(const CosetSystem& sys, const BetaPair& bp);

}  // namespace starterforge
