#include "starterforge/starter.hpp"

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include <doctest.h>

#include "starterforge/errors.hpp"

using namespace starterforge;

namespace {

Pair mk(const FieldSpec& F, int64_t a, int64_t b) {
  return make_starter_pair(F, F.from_int(a), F.from_int(b));
}

std::vector<Pair> mk_all(const FieldSpec& F,
                         const std::vector<std::pair<int64_t, int64_t>>& raw) {
  std::vector<Pair> out;
  for (auto [a, b] : raw) out.push_back(mk(F, a, b));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<int64_t, int64_t>> encs_of(const std::vector<Pair>& ps) {
  std::vector<std::pair<int64_t, int64_t>> out;
  for (const Pair& p : ps) out.emplace_back(p.a.enc, p.b.enc);
  return out;
}

std::vector<int64_t> set_encs(const std::vector<FieldElement>& v) {
  std::vector<int64_t> out;
  for (FieldElement e : v) out.push_back(e.enc);
  return out;
}

// Q covers the profile when every pair's ratio class meets Q.
bool covers(const QuotientProfile& prof, const std::vector<FieldElement>& q_set) {
  for (const RatioClass& c : prof.ratios) {
    bool hit = false;
    for (FieldElement r : q_set) hit = hit || c.contains(r);
    if (!hit) return false;
  }
  return true;
}

std::vector<int64_t> two_quotient_prime_qs(int64_t limit) {
  std::vector<int64_t> out;
  for (int64_t q = 5; q <= limit; q += 4) {  // q = 1 mod 4 is necessary
    if (!is_prime(q)) continue;
    int64_t t = (q - 1) / 2;
    while (t % 2 == 0) t /= 2;
    if (t > 1) out.push_back(q);
  }
  return out;
}

}  // namespace

TEST_CASE("pair canonicalization and rejection") {
  FieldSpec F = make_field_q(29);
  Pair p = mk(F, 16, 3);
  CHECK(p.a.enc == 3);
  CHECK(p.b.enc == 16);
  CHECK(p == mk(F, 3, 16));

  CHECK_THROWS_AS(mk(F, 0, 5), InvalidInput);
  CHECK_THROWS_AS(mk(F, 7, 7), InvalidInput);
  FieldSpec F7 = make_field_q(7);
  CHECK_THROWS_AS(make_starter_pair(F, F.one(), F7.from_int(3)), InvalidInput);
  CHECK_THROWS_AS(make_starter_pair(F, FieldElement{99, 29}, F.one()),
                  InvalidInput);
}

TEST_CASE("published 14-pair starter over F_29 verifies as strong") {
  FieldSpec F = make_field_q(29);
  std::vector<Pair> s2_26 = mk_all(
      F, {{16, 3}, {13, 10}, {24, 19}, {5, 15}, {7, 14}, {22, 8}, {25, 21},
          {4, 12}, {23, 17}, {6, 18}, {20, 11}, {9, 27}, {1, 2}, {28, 26}});
  REQUIRE(s2_26.size() == 14);

  VerificationReport rep = verify_starter(F, s2_26);
  CHECK(rep.is_starter);
  CHECK(rep.is_strong);
  CHECK(rep.sum_count == 14);
  CHECK_FALSE(rep.zero_sum_present);
  CHECK(rep.failures.empty());
  CHECK(rep.quotient.min_le2 == MinQuotient::Two);
  CHECK(set_encs(rep.quotient.quotient_set) == std::vector<int64_t>{2, 3});
}

TEST_CASE("two-quotient construction reproduces the published F_29 pairs") {
  FieldSpec F = make_field_q(29);
  CosetSystem sys = build_cosets(F);
  BetaPair bp = beta_pair_conditions(sys, F.from_int(2), F.from_int(26));
  CHECK(bp.cond_minus_plus);
  CHECK(bp.cond_plus_minus);
  REQUIRE(bp.valid());

  Starter s = two_quotient_starter(sys, bp);
  CHECK(s.prov.kind == ProvenanceKind::TwoQuotient);
  CHECK(s.prov.beta1.enc == 2);
  CHECK(s.prov.beta2.enc == 26);
  CHECK(encs_of(s.pairs) ==
        std::vector<std::pair<int64_t, int64_t>>{
            {1, 2}, {3, 16}, {4, 12}, {5, 15}, {6, 18}, {7, 14}, {8, 22},
            {9, 27}, {10, 13}, {11, 20}, {17, 23}, {19, 24}, {21, 25},
            {26, 28}});
}

TEST_CASE("two-quotient construction reproduces the published F_41 pairs") {
  FieldSpec F = make_field_q(41);
  CosetSystem sys = build_cosets(F);
  BetaPair bp = beta_pair_conditions(sys, F.from_int(3), F.from_int(12));
  REQUIRE(bp.valid());

  Starter s = two_quotient_starter(sys, bp);
  REQUIRE(s.pairs.size() == 20);
  CHECK(encs_of(s.pairs) ==
        std::vector<std::pair<int64_t, int64_t>>{
            {1, 3}, {2, 6}, {4, 34}, {5, 22}, {7, 16}, {8, 27}, {9, 15},
            {10, 30}, {11, 23}, {12, 40}, {13, 18}, {14, 32}, {17, 33},
            {19, 20}, {21, 35}, {24, 39}, {25, 28}, {26, 36}, {29, 37},
            {31, 38}});

  VerificationReport rep = verify_starter(F, s.pairs);
  CHECK(rep.is_strong);
  CHECK(rep.quotient.min_le2 == MinQuotient::Two);
  // {3, -12 = 29} is a valid quotient set, but the canonical report prefers
  // the lexicographically smallest one, which swaps 29 for its inverse 17.
  CHECK(set_encs(rep.quotient.quotient_set) == std::vector<int64_t>{3, 17});
  CHECK(covers(rep.quotient, {F.from_int(3), F.from_int(29)}));
}

TEST_CASE("beta pair membership and condition failures") {
  FieldSpec F = make_field_q(29);
  CosetSystem sys = build_cosets(F);

  // 2 * Chat_0 = {8,10,12,15,18,26,27} does not contain 2 itself.
  CHECK_THROWS_AS(beta_pair_conditions(sys, F.from_int(2), F.from_int(2)),
                  InvalidInput);
  // beta1 must be a non-residue; 4 is a square.
  CHECK_THROWS_AS(beta_pair_conditions(sys, F.from_int(4), F.from_int(8)),
                  InvalidInput);
  CHECK_THROWS_AS(beta_pair_conditions(sys, F.zero(), F.from_int(8)),
                  InvalidInput);

  // (2,8) is a legal membership but (beta1-1)(beta2+1) = 9 is a residue.
  BetaPair bad = beta_pair_conditions(sys, F.from_int(2), F.from_int(8));
  CHECK_FALSE(bad.cond_minus_plus);
  CHECK_FALSE(bad.valid());
  CHECK_THROWS_AS(two_quotient_starter(sys, bad), InvalidInput);

  // A forged pair with the right flags but broken membership is re-checked.
  BetaPair forged{F.from_int(2), F.from_int(3), true, true};
  CHECK_THROWS_AS(two_quotient_starter(sys, forged), InvalidInput);
}

TEST_CASE("beta pair enumeration over F_29 and F_41") {
  FieldSpec F29 = make_field_q(29);
  CosetSystem sys29 = build_cosets(F29);

  std::vector<BetaPair> two = beta_pairs_for(sys29, F29.from_int(2));
  REQUIRE(two.size() == 2);
  CHECK(two[0].beta2.enc == 10);
  CHECK(two[1].beta2.enc == 26);

  std::vector<BetaPair> all29 = search_beta_pairs(sys29);
  CHECK(all29.front().beta1.enc == 2);
  CHECK(all29.front().beta2.enc == 10);
  for (size_t i = 1; i < all29.size(); ++i) {
    bool ordered = all29[i - 1].beta1 < all29[i].beta1 ||
                   (all29[i - 1].beta1 == all29[i].beta1 &&
                    all29[i - 1].beta2 < all29[i].beta2);
    CHECK(ordered);
  }

  auto contains = [](const std::vector<BetaPair>& v, int64_t b1, int64_t b2) {
    for (const BetaPair& bp : v) {
      if (bp.beta1.enc == b1 && bp.beta2.enc == b2) return true;
    }
    return false;
  };
  const std::vector<std::pair<int64_t, int64_t>> table29 = {
      {2, 26}, {2, 10}, {3, 15}, {3, 12}, {8, 11}, {10, 14}, {10, 17}};
  for (auto [b1, b2] : table29) {
    CHECK(contains(all29, b1, b2));
    // the three published variants sit in the same list
    CHECK(contains(all29, b2, b1));
    CHECK(contains(all29, 29 - b1, 29 - b2));
    CHECK(contains(all29, 29 - b2, 29 - b1));
  }

  FieldSpec F41 = make_field_q(41);
  std::vector<BetaPair> all41 = search_beta_pairs(build_cosets(F41));
  const std::vector<std::pair<int64_t, int64_t>> table41 = {
      {3, 12}, {3, 28}, {14, 24}, {14, 22}};
  for (auto [b1, b2] : table41) {
    CHECK(contains(all41, b1, b2));
    CHECK(contains(all41, b2, b1));
    CHECK(contains(all41, 41 - b1, 41 - b2));
    CHECK(contains(all41, 41 - b2, 41 - b1));
  }
}

TEST_CASE("symmetric variants match the published companion starters") {
  FieldSpec F = make_field_q(29);
  CosetSystem sys = build_cosets(F);
  BetaPair bp = beta_pair_conditions(sys, F.from_int(2), F.from_int(26));

  std::array<BetaPair, 4> vars = symmetric_variants(sys, bp);
  CHECK(vars[0].beta1.enc == 2);
  CHECK(vars[0].beta2.enc == 26);
  CHECK(vars[1].beta1.enc == 26);
  CHECK(vars[1].beta2.enc == 2);
  CHECK(vars[2].beta1.enc == 27);
  CHECK(vars[2].beta2.enc == 3);
  CHECK(vars[3].beta1.enc == 3);
  CHECK(vars[3].beta2.enc == 27);

  std::set<std::vector<std::pair<int64_t, int64_t>>> distinct;
  for (const BetaPair& v : vars) {
    CHECK(v.valid());
    Starter s = two_quotient_starter(sys, v);
    CHECK(verify_starter(F, s.pairs).is_strong);
    distinct.insert(encs_of(s.pairs));
  }
  CHECK(distinct.size() == 4);

  FieldSpec F41 = make_field_q(41);
  CosetSystem sys41 = build_cosets(F41);
  std::array<BetaPair, 4> v41 = symmetric_variants(
      sys41, beta_pair_conditions(sys41, F41.from_int(3), F41.from_int(12)));
  CHECK(v41[1].beta1.enc == 12);
  CHECK(v41[1].beta2.enc == 3);
  CHECK(v41[2].beta1.enc == 38);
  CHECK(v41[2].beta2.enc == 29);
  CHECK(v41[3].beta1.enc == 29);
  CHECK(v41[3].beta2.enc == 38);

  BetaPair invalid{F.from_int(2), F.from_int(8), false, false};
  CHECK_THROWS_AS(symmetric_variants(sys, invalid), InvalidInput);
}

TEST_CASE("dinitz starter over small fields") {
  FieldSpec F7 = make_field_q(7);
  Starter s = dinitz_starter(F7, F7.from_int(3));
  CHECK(s.prov.kind == ProvenanceKind::Dinitz);
  CHECK(encs_of(s.pairs) ==
        std::vector<std::pair<int64_t, int64_t>>{{1, 3}, {2, 6}, {4, 5}});

  VerificationReport rep = verify_starter(F7, s.pairs);
  CHECK(rep.is_strong);
  CHECK(rep.quotient.min_le2 == MinQuotient::One);
  CHECK(set_encs(rep.quotient.quotient_set) == std::vector<int64_t>{3});

  FieldSpec F11 = make_field_q(11);
  CHECK_THROWS_AS(dinitz_starter(F11, F11.from_int(-1)), InvalidInput);
  CHECK_THROWS_AS(dinitz_starter(F7, F7.from_int(2)), InvalidInput);  // 2 is QR
  CHECK_THROWS_AS(dinitz_starter(make_field_q(29), {2, 29}), InvalidInput);
  CHECK_THROWS_AS(dinitz_starter(make_field_q(3), {2, 3}), InvalidInput);
}

TEST_CASE("verification reports name the broken axiom") {
  FieldSpec F5 = make_field_q(5);

  // {1,4},{2,3}: a starter (differences tile) but both sums are zero.
  VerificationReport both = verify_starter(F5, mk_all(F5, {{1, 4}, {2, 3}}));
  CHECK(both.is_starter);
  CHECK_FALSE(both.is_strong);
  CHECK(both.sum_count == 1);
  CHECK(both.zero_sum_present);
  REQUIRE(both.failures.size() == 1);
  CHECK(both.failures[0].axiom == StarterAxiom::StrongSums);
  // pairs are {x, -x}, so the single ratio class is the self-inverse -1
  CHECK(both.quotient.min_le2 == MinQuotient::One);
  CHECK(set_encs(both.quotient.quotient_set) == std::vector<int64_t>{4});

  // {1,2},{3,4}: both differences are +-1, so 2 and 3 are never hit.
  VerificationReport dup = verify_starter(F5, mk_all(F5, {{1, 2}, {3, 4}}));
  CHECK_FALSE(dup.is_starter);
  bool saw_dup = false, saw_missing = false;
  for (const AxiomFailure& f : dup.failures) {
    if (f.axiom == StarterAxiom::DifferenceCover) {
      if (f.detail.find("more than once") != std::string::npos) saw_dup = true;
      if (f.detail.find("never hit") != std::string::npos) {
        saw_missing = true;
        CHECK(f.witnesses == std::vector<int64_t>{2, 3});
      }
    }
  }
  CHECK(saw_dup);
  CHECK(saw_missing);

  VerificationReport empty = verify_starter(F5, {});
  CHECK_FALSE(empty.is_starter);
  CHECK(empty.sum_count == 0);

  // A hand-built zero member is reported, not thrown, and poisons ratios.
  VerificationReport zero =
      verify_starter(F5, {Pair{F5.zero(), F5.from_int(2)}});
  CHECK_FALSE(zero.is_starter);
  CHECK(zero.quotient.min_le2 == MinQuotient::More);
  bool saw_zero = false;
  for (const AxiomFailure& f : zero.failures) {
    saw_zero = saw_zero || (f.axiom == StarterAxiom::ElementCover &&
                            f.witnesses == std::vector<int64_t>{0});
  }
  CHECK(saw_zero);
}

TEST_CASE("element swapped into another pair is caught with witnesses") {
  FieldSpec F = make_field_q(29);
  CosetSystem sys = build_cosets(F);
  Starter s = two_quotient_starter(
      sys, beta_pair_conditions(sys, F.from_int(2), F.from_int(26)));

  // Replace {1,2} by {1,3}: 3 is already used by {3,16}, 2 goes missing.
  std::vector<Pair> pairs = s.pairs;
  for (Pair& p : pairs) {
    if (p.a.enc == 1 && p.b.enc == 2) p = mk(F, 1, 3);
  }
  std::sort(pairs.begin(), pairs.end());
  VerificationReport rep = verify_starter(F, pairs);
  CHECK_FALSE(rep.is_starter);
  bool dup3 = false, miss2 = false;
  for (const AxiomFailure& f : rep.failures) {
    if (f.axiom != StarterAxiom::ElementCover) continue;
    for (int64_t w : f.witnesses) {
      dup3 = dup3 || (w == 3 && f.detail.find("more than one") != std::string::npos);
      miss2 = miss2 || (w == 2 && f.detail.find("not covered") != std::string::npos);
    }
  }
  CHECK(dup3);
  CHECK(miss2);
}

TEST_CASE("quotient classification handles one, two and more classes") {
  FieldSpec F = make_field_q(29);
  CHECK(quotient_classify(F, {}).min_le2 == MinQuotient::Zero);

  // Hand-built three-class pair set over F_13: the classes {2,7}, {3,9} and
  // {6,11} are pairwise disjoint, so no two ratios cover all three pairs.
  FieldSpec F13 = make_field_q(13);
  std::vector<Pair> three = mk_all(F13, {{1, 2}, {1, 3}, {1, 6}});
  QuotientProfile prof = quotient_classify(F13, three);
  CHECK(prof.min_le2 == MinQuotient::More);
  CHECK(prof.quotient_set.empty());

  // Dropping one class brings it back to exactly two.
  QuotientProfile two = quotient_classify(F13, mk_all(F13, {{1, 2}, {1, 3}}));
  CHECK(two.min_le2 == MinQuotient::Two);
  CHECK(set_encs(two.quotient_set) == std::vector<int64_t>{2, 3});

  CHECK_THROWS_AS(quotient_classify(F13, {Pair{F13.zero(), F13.one()}}),
                  InvalidInput);
}

TEST_CASE("coset pair witnesses over F_29 and F_41") {
  FieldSpec F = make_field_q(29);
  CosetSystem sys = build_cosets(F);
  CosetPairWitnesses w = coset_pair_witnesses(sys, F.from_int(2));
  CHECK(w.minus1.enc == 8);
  CHECK(w.minus2.enc == 12);
  CHECK(w.plus1.enc == 8);
  CHECK(w.plus2.enc == 10);

  FieldSpec F41 = make_field_q(41);
  CosetSystem sys41 = build_cosets(F41);
  CosetPairWitnesses w41 = coset_pair_witnesses(sys41, F41.from_int(3));
  // pool = 3 * Chat_0 = {11,12,28,34,38}; witnesses must come from it
  std::vector<int64_t> pool = {11, 12, 28, 34, 38};
  for (int64_t e : {w41.minus1.enc, w41.minus2.enc, w41.plus1.enc, w41.plus2.enc}) {
    CHECK(std::count(pool.begin(), pool.end(), e) == 1);
  }
  CHECK(w41.minus1 < w41.minus2);
  CHECK(w41.plus1 < w41.plus2);
  auto one41 = F41.one();
  CHECK_FALSE(is_quadratic_residue(
      F41, F41.mul(F41.sub(w41.minus1, one41), F41.sub(w41.minus2, one41))));
  CHECK_FALSE(is_quadratic_residue(
      F41, F41.mul(F41.add(w41.plus1, one41), F41.add(w41.plus2, one41))));

  CHECK_THROWS_AS(coset_pair_witnesses(sys, F.from_int(4)), InvalidInput);
}

TEST_CASE("partition replay mirrors the verification verdict") {
  FieldSpec F = make_field_q(29);
  CosetSystem sys = build_cosets(F);
  BetaPair bp = beta_pair_conditions(sys, F.from_int(2), F.from_int(26));
  PartitionReport rep = proof_partition_check(sys, bp);
  CHECK(rep.ok);
  CHECK(rep.failures.empty());
  CHECK(rep.difference_blocks == 2);
  CHECK(rep.block_size == 14);
  CHECK(rep.sum_value_count == 14);

  FieldSpec F41 = make_field_q(41);
  CosetSystem sys41 = build_cosets(F41);
  PartitionReport rep41 = proof_partition_check(
      sys41, beta_pair_conditions(sys41, F41.from_int(3), F41.from_int(12)));
  CHECK(rep41.ok);
  CHECK(rep41.difference_blocks == 4);
  CHECK(rep41.block_size == 10);
  CHECK(rep41.sum_value_count == 20);

  BetaPair bad = beta_pair_conditions(sys, F.from_int(2), F.from_int(8));
  CHECK_THROWS_AS(proof_partition_check(sys, bad), InvalidInput);
}

TEST_CASE("rescaled one-quotient form agrees exactly when applicable") {
  FieldSpec F = make_field_q(29);
  CosetSystem sys = build_cosets(F);

  // (2,26): 2-1 = 1 is in C_0 and -(26-1) = 4 is in Chat_0, so the rescaled
  // form applies, and the scalings collapse to the identity cosets.
  BetaPair bp = beta_pair_conditions(sys, F.from_int(2), F.from_int(26));
  CHECK(dinitz_equivalence_check(sys, bp) == DinitzEquivalence::Equal);

  // (3,12): 3-1 = 2 is a non-residue, outside C_0.
  BetaPair other = beta_pair_conditions(sys, F.from_int(3), F.from_int(12));
  CHECK(dinitz_equivalence_check(sys, other) == DinitzEquivalence::NotApplicable);

  FieldSpec F41 = make_field_q(41);
  CosetSystem sys41 = build_cosets(F41);
  BetaPair bp41 = beta_pair_conditions(sys41, F41.from_int(3), F41.from_int(12));
  CHECK_THROWS_AS(dinitz_equivalence_check(sys41, bp41), InvalidInput);

  BetaPair invalid = beta_pair_conditions(sys, F.from_int(2), F.from_int(8));
  CHECK_THROWS_AS(dinitz_equivalence_check(sys, invalid), InvalidInput);

  // Applicability never returns NotEqual across all valid pairs for q = 29:
  // when the coset preconditions hold the rescalings are identities.
  int applicable = 0;
  for (const BetaPair& cand : search_beta_pairs(sys)) {
    DinitzEquivalence r = dinitz_equivalence_check(sys, cand);
    CHECK(r != DinitzEquivalence::NotEqual);
    applicable += r == DinitzEquivalence::Equal ? 1 : 0;
  }
  CHECK(applicable > 0);
}

TEST_CASE("construction sweep: strong, two-quotient, QR/NQR orientation") {
  std::vector<int64_t> qs = two_quotient_prime_qs(600);
  for (int64_t pp : {25, 49, 81, 121, 125, 169}) qs.push_back(pp);

  for (int64_t q : qs) {
    CAPTURE(q);
    FieldSpec F = make_field_q(q);
    CosetSystem sys = build_cosets(F);
    std::vector<BetaPair> found = search_beta_pairs(sys);
    REQUIRE_FALSE(found.empty());

    const BetaPair& bp = found.front();
    CHECK(bp.beta1 != bp.beta2);
    CHECK(bp.beta2 != F.neg(bp.beta1));

    Starter s = two_quotient_starter(sys, bp);
    REQUIRE(s.pairs.size() == size_t((q - 1) / 2));
    VerificationReport rep = verify_starter(F, s.pairs);
    CHECK(rep.is_starter);
    CHECK(rep.is_strong);
    CHECK(rep.quotient.min_le2 == MinQuotient::Two);
    CHECK(covers(rep.quotient, {bp.beta1, F.neg(bp.beta2)}));

    for (const Pair& p : s.pairs) {
      CHECK(sys.residue_sign(p.a) * sys.residue_sign(p.b) == -1);
    }

    PartitionReport part = proof_partition_check(sys, bp);
    CHECK(part.ok == rep.is_starter);

    std::set<std::vector<std::pair<int64_t, int64_t>>> distinct;
    for (const BetaPair& v : symmetric_variants(sys, bp)) {
      CHECK(v.valid());
      distinct.insert(encs_of(two_quotient_starter(sys, v).pairs));
    }
    CHECK(distinct.size() == 4);
  }
}

TEST_CASE("dinitz sweep: every admissible beta gives a strong one-quotient") {
  for (int64_t q = 7; q <= 150; ++q) {
    if (q % 4 != 3 || !prime_power_decompose(q)) continue;
    CAPTURE(q);
    FieldSpec F = make_field_q(q);
    auto [qr, nqr] = residue_sets(F);
    FieldElement minus1 = F.from_int(-1);
    for (FieldElement beta : nqr) {
      if (beta == minus1) continue;
      Starter s = dinitz_starter(F, beta);
      VerificationReport rep = verify_starter(F, s.pairs);
      CHECK(rep.is_strong);
      CHECK(rep.quotient.min_le2 == MinQuotient::One);
      FieldElement binv = F.inv(beta);
      FieldElement expect = beta < binv ? beta : binv;
      CHECK(rep.quotient.quotient_set == std::vector<FieldElement>{expect});
    }
  }
}
