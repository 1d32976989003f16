#pragma once

#include <cstdint>
#include <vector>

#include "starterforge/cyclotomy.hpp"
#include "starterforge/ffield.hpp"
#include "starterforge/starter.hpp"

namespace starterforge {

// First-principles cross-checks for the construction pipeline. Everything in
// this header recomputes its answer from raw definitions: residues come from
// the squaring map, coset membership from direct set construction, and axiom
// checks from multiset comparisons. None of it consults coset labels, Euler's
// criterion, or a primitive element, so a bug shared with the main path would
// have to be a bug in the field arithmetic itself.

// The image of x -> x^2 over F_q^*, sorted by encoding.
std::vector<FieldElement> oracle_residues(const FieldSpec& F);

struct OracleReport {
  bool element_cover = false;
  bool difference_cover = false;
  bool is_starter = false;
  bool is_strong = false;
  int64_t sum_count = 0;
};

// Raw multiset re-check of both starter axioms and sum distinctness, using
// only add/sub/neg. Reports, never throws, on arbitrarily broken pair sets
// (zero members, duplicates, wrong pair count).
OracleReport oracle_verify(const FieldSpec& F, const std::vector<Pair>& pairs);

bool reports_agree(const VerificationReport& main, const OracleReport& oracle);

// Exhaustive double loop over NQR x NQR with beta1 * Chat_0 materialized as a
// set per beta1 (Chat_0 itself is recovered as the negated t-th roots of
// unity). Output order matches search_beta_pairs; equality with it is the
// cross-check. Returns an empty list rather than throwing when nothing is
// found.
std::vector<BetaPair> oracle_beta_sweep(const CosetSystem& sys);

enum class MutationKind : int8_t {
  SwapElement,       // replace one member with the smallest unused encoding
  DuplicateElement,  // replace one member with a member of another pair
  ShiftPair,         // translate one pair by a nonzero constant
  DropPair,          // delete one pair
};

struct MutationSpec {
  MutationKind kind = MutationKind::SwapElement;
  uint64_t seed = 0;
};

// Deterministic corruption driven by a 64-bit linear congruential stream, so
// a failing seed reproduces everywhere. Each kind provably breaks an axiom
// when applied to a valid starter: SwapElement and DuplicateElement unbalance
// the member multiset (the smallest unused encoding of a full cover is 0),
// ShiftPair cannot re-tile the element cover, DropPair leaves elements
// uncovered. Needs at least two pairs; the result is deliberately allowed to
// contain zero or repeated members.
std::vector<Pair> apply_mutation(const FieldSpec& F,
                                 const std::vector<Pair>& pairs,
                                 const MutationSpec& spec);

// Exhaustive enumeration of all perfect matchings of Z_n \ {0} for odd n in
// [3, 11], classifying each against the raw starter definitions in plain
// modular arithmetic (no field machinery; n = 9 is not even a field).
// quotient_one/quotient_two count starters by smallest achievable |Q|, where
// a ratio y/x exists only when x is a unit mod n.
struct CensusRow {
  int64_t n = 0;
  int64_t matchings = 0;
  int64_t starters = 0;
  int64_t strong = 0;
  int64_t quotient_one = 0;
  int64_t quotient_two = 0;
};

CensusRow exhaustive_small_group_census(int64_t n);

}  // namespace starterforge
