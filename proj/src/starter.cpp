#include "starterforge/starter.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "starterforge/errors.hpp"

namespace starterforge {

namespace {

constexpr size_t kWitnessCap = 8;
constexpr size_t kFailureCap = 16;

std::string enc_str(FieldElement x) { return std::to_string(x.enc); }

// Stamp and range check; FieldSpec ops would catch the stamp themselves, but
// verify_starter indexes mark arrays by enc before any field op runs.
void require_member(const FieldSpec& F, FieldElement x, const char* role) {
  if (x.q != F.q() || x.enc < 0 || x.enc >= F.q()) {
    throw InvalidInput(std::string(role) + " " + enc_str(x) +
                       " does not belong to F_" + std::to_string(F.q()));
  }
}

// Montgomery batch inversion: one field inversion plus 3n multiplications.
// All inputs must be nonzero.
std::vector<FieldElement> invert_all(const FieldSpec& F,
                                     const std::vector<FieldElement>& xs) {
  std::vector<FieldElement> prefix(xs.size());
  FieldElement acc = F.one();
  for (size_t i = 0; i < xs.size(); ++i) {
    prefix[i] = acc;
    acc = F.mul(acc, xs[i]);
  }
  FieldElement inv_acc = F.inv(acc);
  std::vector<FieldElement> out(xs.size());
  for (size_t i = xs.size(); i-- > 0;) {
    out[i] = F.mul(inv_acc, prefix[i]);
    inv_acc = F.mul(inv_acc, xs[i]);
  }
  return out;
}

void push_capped(std::vector<int64_t>& v, int64_t e) {
  if (v.size() < kWitnessCap) v.push_back(e);
}

bool is_c0(BlockLabel l) { return l.kind == BlockKind::C && l.j == 0; }

void require_nqr(const CosetSystem& sys, FieldElement x, const char* role) {
  require_member(sys.field(), x, role);
  if (x.enc == 0 || sys.residue_sign(x) != -1) {
    throw InvalidInput(std::string(role) + " " + enc_str(x) +
                       " is not a non-residue of F_" +
                       std::to_string(sys.field().q()));
  }
}

// Condition flags for a pair whose memberships are already established.
// Neither product can vanish: beta1, beta2 are non-residues while +-1 are
// residues (q = 1 mod 4 here), so all four factors are nonzero.
BetaPair flags_for(const CosetSystem& sys, FieldElement beta1,
                   FieldElement beta2) {
  const FieldSpec& F = sys.field();
  FieldElement one = F.one();
  BetaPair bp{beta1, beta2, false, false};
  bp.cond_minus_plus =
      sys.residue_sign(F.mul(F.sub(beta1, one), F.add(beta2, one))) == -1;
  bp.cond_plus_minus =
      sys.residue_sign(F.mul(F.add(beta1, one), F.sub(beta2, one))) == -1;
  return bp;
}

}  // namespace

Pair make_starter_pair(const FieldSpec& F, FieldElement x, FieldElement y) {
  require_member(F, x, "pair member");
  require_member(F, y, "pair member");
  if (x.enc == 0 || y.enc == 0) throw InvalidInput("pair members must be nonzero");
  if (x == y) throw InvalidInput("pair members must be distinct, got {" +
                                 enc_str(x) + ", " + enc_str(x) + "}");
  return x < y ? Pair{x, y} : Pair{y, x};
}

QuotientProfile quotient_classify(const FieldSpec& F,
                                  const std::vector<Pair>& pairs) {
  QuotientProfile prof;
  if (pairs.empty()) return prof;  // Q = {} covers nothing, vacuously

  std::vector<FieldElement> members;
  members.reserve(2 * pairs.size());
  for (const Pair& pr : pairs) {
    require_member(F, pr.a, "pair member");
    require_member(F, pr.b, "pair member");
    if (pr.a.enc == 0 || pr.b.enc == 0) {
      throw InvalidInput("ratio classes need nonzero pair members");
    }
    members.push_back(pr.a);
    members.push_back(pr.b);
  }
  std::vector<FieldElement> invs = invert_all(F, members);

  prof.ratios.reserve(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    FieldElement r = F.mul(pairs[i].b, invs[2 * i]);        // b / a
    FieldElement rinv = F.mul(pairs[i].a, invs[2 * i + 1]); // a / b
    prof.ratios.push_back(r < rinv ? RatioClass{r, rinv} : RatioClass{rinv, r});
  }

  // Any covering Q must hit the first pair, so its candidates are confined to
  // that pair's ratio class; for |Q| = 2 the partner is likewise confined to
  // the class of the first pair the initial candidate misses. This makes the
  // size <= 2 decision exact in O(n).
  const RatioClass& first = prof.ratios.front();
  std::vector<FieldElement> heads = {first.lo};
  if (!(first.hi == first.lo)) heads.push_back(first.hi);

  std::vector<FieldElement> singles;
  for (FieldElement r : heads) {
    bool all = true;
    for (const RatioClass& c : prof.ratios) {
      if (!c.contains(r)) {
        all = false;
        break;
      }
    }
    if (all) singles.push_back(r);
  }
  if (!singles.empty()) {
    prof.min_le2 = MinQuotient::One;
    prof.quotient_set = {*std::min_element(singles.begin(), singles.end())};
    return prof;
  }

  std::vector<std::pair<FieldElement, FieldElement>> doubles;
  for (FieldElement r : heads) {
    const RatioClass* unhit = nullptr;
    for (const RatioClass& c : prof.ratios) {
      if (!c.contains(r)) {
        unhit = &c;
        break;
      }
    }
    std::vector<FieldElement> partners = {unhit->lo};
    if (!(unhit->hi == unhit->lo)) partners.push_back(unhit->hi);
    for (FieldElement s : partners) {
      bool all = true;
      for (const RatioClass& c : prof.ratios) {
        if (!c.contains(r) && !c.contains(s)) {
          all = false;
          break;
        }
      }
      if (all) doubles.emplace_back(r < s ? std::pair{r, s} : std::pair{s, r});
    }
  }
  if (!doubles.empty()) {
    auto best = *std::min_element(doubles.begin(), doubles.end());
    prof.min_le2 = MinQuotient::Two;
    prof.quotient_set = {best.first, best.second};
    return prof;
  }

  prof.min_le2 = MinQuotient::More;
  return prof;
}

VerificationReport verify_starter(const FieldSpec& F,
                                  const std::vector<Pair>& pairs) {
  const int64_t q = F.q();
  for (const Pair& pr : pairs) {
    require_member(F, pr.a, "pair member");
    require_member(F, pr.b, "pair member");
  }

  VerificationReport rep;
  bool zero_member = false;

  std::vector<int32_t> cover(q, 0);
  for (const Pair& pr : pairs) {
    ++cover[pr.a.enc];
    ++cover[pr.b.enc];
    if (pr.a.enc == 0 || pr.b.enc == 0) zero_member = true;
  }
  {
    std::vector<int64_t> dup, missing;
    for (int64_t e = 1; e < q; ++e) {
      if (cover[e] > 1) push_capped(dup, e);
      if (cover[e] == 0) push_capped(missing, e);
    }
    if (cover[0] > 0) {
      rep.failures.push_back({StarterAxiom::ElementCover,
                              "0 appears as a pair member", {0}});
    }
    if (!dup.empty()) {
      rep.failures.push_back({StarterAxiom::ElementCover,
                              "elements used by more than one pair slot",
                              std::move(dup)});
    }
    if (!missing.empty()) {
      rep.failures.push_back({StarterAxiom::ElementCover,
                              "elements not covered by any pair",
                              std::move(missing)});
    }
  }

  std::vector<int32_t> diffs(q, 0);
  bool zero_diff = false;
  for (const Pair& pr : pairs) {
    FieldElement d = F.sub(pr.a, pr.b);
    if (d.enc == 0) {
      zero_diff = true;
      continue;
    }
    ++diffs[d.enc];
    ++diffs[F.neg(d).enc];
  }
  {
    std::vector<int64_t> dup, missing;
    for (int64_t e = 1; e < q; ++e) {
      if (diffs[e] > 1) push_capped(dup, e);
      if (diffs[e] == 0) push_capped(missing, e);
    }
    if (zero_diff) {
      rep.failures.push_back({StarterAxiom::DifferenceCover,
                              "a pair with equal members has difference zero",
                              {0}});
    }
    if (!dup.empty()) {
      rep.failures.push_back({StarterAxiom::DifferenceCover,
                              "differences hit more than once", std::move(dup)});
    }
    if (!missing.empty()) {
      rep.failures.push_back({StarterAxiom::DifferenceCover,
                              "differences never hit", std::move(missing)});
    }
  }

  rep.is_starter = rep.failures.empty();

  std::vector<int32_t> sums(q, 0);
  std::vector<int64_t> sum_dup;
  for (const Pair& pr : pairs) {
    FieldElement s = F.add(pr.a, pr.b);
    if (++sums[s.enc] == 2) push_capped(sum_dup, s.enc);
  }
  for (int64_t e = 0; e < q; ++e) {
    if (sums[e] > 0) ++rep.sum_count;
  }
  rep.zero_sum_present = sums[0] > 0;
  if (!sum_dup.empty()) {
    rep.failures.push_back({StarterAxiom::StrongSums, "colliding pair sums",
                            std::move(sum_dup)});
  }
  rep.is_strong =
      rep.is_starter && rep.sum_count == static_cast<int64_t>(pairs.size());

  if (!zero_member) {
    rep.quotient = quotient_classify(F, pairs);
  } else {
    // A zero member has no ratio class, so no Q of any size can work.
    rep.quotient.min_le2 = MinQuotient::More;
  }
  return rep;
}

Starter dinitz_starter(const FieldSpec& F, FieldElement beta) {
  require_member(F, beta, "beta");
  if (F.q() % 4 != 3) {
    throw InvalidInput("q = " + std::to_string(F.q()) +
                       " is not 3 mod 4; the one-quotient form needs q = 2t+1 "
                       "with t odd");
  }
  if (F.q() == 3) {
    throw InvalidInput("q = 3 admits no valid beta: its only non-residue is -1");
  }
  if (beta.enc == 0 || is_quadratic_residue(F, beta)) {
    throw InvalidInput("beta " + enc_str(beta) + " must be a non-residue");
  }
  if (beta == F.from_int(-1)) {
    throw InvalidInput(
        "beta = -1 makes every pair sum zero, so the result is never strong");
  }

  FieldElement g = least_primitive_element(F);
  FieldElement alpha = F.mul(g, g);
  Starter s{F, {}, {ProvenanceKind::Dinitz, beta, F.zero()}};
  const int64_t half = (F.q() - 1) / 2;
  s.pairs.reserve(half);
  FieldElement x = F.one();
  for (int64_t i = 0; i < half; ++i) {
    x = F.mul(x, alpha);  // alpha has order (q-1)/2, so x sweeps QR exactly
    s.pairs.push_back(make_starter_pair(F, x, F.mul(x, beta)));
  }
  std::sort(s.pairs.begin(), s.pairs.end());
  return s;
}

BetaPair beta_pair_conditions(const CosetSystem& sys, FieldElement beta1,
                              FieldElement beta2) {
  const FieldSpec& F = sys.field();
  require_nqr(sys, beta1, "beta1");
  require_member(F, beta2, "beta2");
  if (beta2.enc == 0 ||
      !is_c0(sys.coset_of(F.neg(F.mul(beta2, F.inv(beta1)))))) {
    throw InvalidInput("beta2 = " + enc_str(beta2) + " is not in beta1 * Chat_0 "
                       "for beta1 = " + enc_str(beta1));
  }
  return flags_for(sys, beta1, beta2);
}

std::vector<BetaPair> beta_pairs_for(const CosetSystem& sys, FieldElement beta1) {
  const FieldSpec& F = sys.field();
  require_nqr(sys, beta1, "beta1");
  std::vector<BetaPair> out;
  for (FieldElement x : sys.c_block(0)) {
    BetaPair bp = flags_for(sys, beta1, F.neg(F.mul(beta1, x)));
    if (bp.valid()) out.push_back(bp);
  }
  std::sort(out.begin(), out.end(),
            [](const BetaPair& a, const BetaPair& b) { return a.beta2 < b.beta2; });
  return out;
}

std::vector<BetaPair> search_beta_pairs(const CosetSystem& sys) {
  std::vector<BetaPair> out;
  for (FieldElement b1 : sys.nqr_sorted()) {
    std::vector<BetaPair> part = beta_pairs_for(sys, b1);
    out.insert(out.end(), part.begin(), part.end());
  }
  if (out.empty()) {
    throw TheoremViolation("no valid beta pair exists for q = " +
                           std::to_string(sys.field().q()) +
                           ", contradicting the existence lemma");
  }
  return out;
}

std::array<BetaPair, 4> symmetric_variants(const CosetSystem& sys,
                                           const BetaPair& bp) {
  if (!bp.valid()) {
    throw InvalidInput("variants are defined for valid beta pairs only");
  }
  const FieldSpec& F = sys.field();
  FieldElement nb1 = F.neg(bp.beta1);
  FieldElement nb2 = F.neg(bp.beta2);
  return {beta_pair_conditions(sys, bp.beta1, bp.beta2),
          beta_pair_conditions(sys, bp.beta2, bp.beta1),
          beta_pair_conditions(sys, nb1, nb2),
          beta_pair_conditions(sys, nb2, nb1)};
}

Starter two_quotient_starter(const CosetSystem& sys, const BetaPair& bp) {
  // Re-derive memberships and flags rather than trusting the caller's struct;
  // a forged BetaPair would otherwise produce garbage pairs that only fail
  // later at verification.
  BetaPair checked = beta_pair_conditions(sys, bp.beta1, bp.beta2);
  if (!checked.valid() || !bp.valid()) {
    throw InvalidInput("beta pair (" + enc_str(bp.beta1) + ", " +
                       enc_str(bp.beta2) +
                       ") fails the product conditions; both must hold");
  }
  const FieldSpec& F = sys.field();
  Starter s{F, {}, {ProvenanceKind::TwoQuotient, bp.beta1, bp.beta2}};
  s.pairs.reserve((F.q() - 1) / 2);
  FieldElement mb2 = F.neg(bp.beta2);
  for (int j = 0; j < sys.decomp().delta1; ++j) {
    for (FieldElement x : sys.c_block(j)) {
      s.pairs.push_back(make_starter_pair(F, x, F.mul(bp.beta1, x)));
    }
    for (FieldElement y : sys.chat_block(j)) {
      s.pairs.push_back(make_starter_pair(F, y, F.mul(mb2, y)));
    }
  }
  std::sort(s.pairs.begin(), s.pairs.end());
  return s;
}

CosetPairWitnesses coset_pair_witnesses(const CosetSystem& sys,
                                        FieldElement beta) {
  const FieldSpec& F = sys.field();
  require_nqr(sys, beta, "beta");

  std::vector<FieldElement> pool;  // beta * Chat_0, ascending
  pool.reserve(sys.chat_block(0).size());
  for (FieldElement x : sys.chat_block(0)) pool.push_back(F.mul(beta, x));
  std::sort(pool.begin(), pool.end());

  // The pool sits inside NQR while +-1 are residues, so the shifted factors
  // below are never zero.
  auto scan = [&](int64_t off, const char* label) {
    FieldElement shift = F.from_int(off);
    for (size_t i = 0; i < pool.size(); ++i) {
      FieldElement u = F.add(pool[i], shift);
      for (size_t j = i + 1; j < pool.size(); ++j) {
        if (sys.residue_sign(F.mul(u, F.add(pool[j], shift))) == -1) {
          return std::pair{pool[i], pool[j]};
        }
      }
    }
    throw TheoremViolation("no pair in beta * Chat_0 has the " +
                           std::string(label) +
                           " product in NQR; beta = " + enc_str(beta) +
                           ", q = " + std::to_string(F.q()));
  };
  auto [m1, m2] = scan(-1, "(b1-1)(b2-1)");
  auto [p1, p2] = scan(+1, "(b1+1)(b2+1)");
  return {m1, m2, p1, p2};
}

namespace {

std::string diff_block_name(int32_t id) {
  return (id % 2 ? "E*_" : "E_") + std::to_string(id / 2);
}

std::string sum_block_name(int32_t id) {
  return (id % 2 ? "P*_" : "P_") + std::to_string(id / 2);
}

}  // namespace

PartitionReport proof_partition_check(const CosetSystem& sys, const BetaPair& bp) {
  BetaPair checked = beta_pair_conditions(sys, bp.beta1, bp.beta2);
  if (!checked.valid() || !bp.valid()) {
    throw InvalidInput("partition replay needs a valid beta pair");
  }
  const FieldSpec& F = sys.field();
  const Decomposition& d = sys.decomp();

  PartitionReport rep;
  rep.difference_blocks = 2 * d.delta1;
  rep.block_size = 2 * d.t;
  auto fail = [&](std::string msg) {
    if (rep.failures.size() < kFailureCap) rep.failures.push_back(std::move(msg));
  };

  FieldElement one = F.one();
  FieldElement c1 = F.sub(bp.beta1, one);  // E_j scale
  FieldElement c2 = F.add(bp.beta2, one);  // E*_j scale
  int sign1 = sys.residue_sign(c1);
  int sign2 = sys.residue_sign(c2);
  if (sign1 == sign2) {
    fail("scales (beta1-1) and (beta2+1) share residuosity; the difference "
         "blocks cannot split by residue class");
  }

  std::vector<int32_t> owner(F.q(), -1);
  auto mark = [&](FieldElement v, int32_t id, int want_sign) {
    if (sys.residue_sign(v) != want_sign) {
      fail("element " + enc_str(v) + " of " + diff_block_name(id) +
           " has the wrong residue class");
    }
    if (owner[v.enc] != -1) {
      fail(diff_block_name(owner[v.enc]) + " and " + diff_block_name(id) +
           " collide at " + enc_str(v));
      return;
    }
    owner[v.enc] = id;
  };
  for (int j = 0; j < d.delta1; ++j) {
    for (FieldElement x : sys.c_block(j)) {
      FieldElement v = F.mul(x, c1);
      mark(v, 2 * j, sign1);
      mark(F.neg(v), 2 * j, sign1);
    }
    for (FieldElement y : sys.chat_block(j)) {
      FieldElement v = F.mul(y, c2);
      mark(v, 2 * j + 1, sign2);
      mark(F.neg(v), 2 * j + 1, sign2);
    }
  }
  for (int64_t e = 1; e < F.q(); ++e) {
    if (owner[e] == -1) {
      fail("element " + std::to_string(e) + " is in no difference block");
    }
  }

  FieldElement s1 = F.add(bp.beta1, one);  // P_j scale
  FieldElement s2 = F.sub(bp.beta2, one);  // P*_j scale, negated per block
  std::vector<int32_t> sum_owner(F.q(), -1);
  auto mark_sum = [&](FieldElement v, int32_t id) {
    if (sum_owner[v.enc] != -1) {
      fail(sum_block_name(sum_owner[v.enc]) + " and " + sum_block_name(id) +
           " produce the same sum " + enc_str(v));
      return;
    }
    sum_owner[v.enc] = id;
    ++rep.sum_value_count;
  };
  for (int j = 0; j < d.delta1; ++j) {
    for (FieldElement x : sys.c_block(j)) mark_sum(F.mul(x, s1), 2 * j);
    for (FieldElement y : sys.chat_block(j)) {
      mark_sum(F.neg(F.mul(y, s2)), 2 * j + 1);
    }
  }
  if (rep.sum_value_count != d.delta * d.t) {
    fail("sum blocks yield " + std::to_string(rep.sum_value_count) + " of " +
         std::to_string(d.delta * d.t) + " required distinct values");
  }

  rep.ok = rep.failures.empty();
  return rep;
}

DinitzEquivalence dinitz_equivalence_check(const CosetSystem& sys,
                                           const BetaPair& bp) {
  const Decomposition& d = sys.decomp();
  if (d.k != 2) {
    throw InvalidInput("the rescaled-form comparison is defined for q = 4t+1 "
                       "only; q = " + std::to_string(d.q) + " has k = " +
                       std::to_string(d.k));
  }
  if (!bp.valid()) {
    throw InvalidInput("equivalence check needs a valid beta pair");
  }
  const FieldSpec& F = sys.field();
  FieldElement one = F.one();
  FieldElement b1m = F.sub(bp.beta1, one);  // nonzero: beta1 is a non-residue
  FieldElement b2m = F.sub(bp.beta2, one);
  if (!is_c0(sys.coset_of(b1m))) return DinitzEquivalence::NotApplicable;
  BlockLabel l2 = sys.coset_of(F.neg(b2m));
  if (!(l2.kind == BlockKind::Chat && l2.j == 0)) {
    return DinitzEquivalence::NotApplicable;
  }

  FieldElement scale1 = F.inv(b1m);
  FieldElement scale2 = F.inv(b2m);
  FieldElement mb2 = F.neg(bp.beta2);
  std::vector<Pair> rescaled;
  rescaled.reserve((F.q() - 1) / 2);
  for (FieldElement x : sys.c_block(0)) {
    FieldElement v = F.mul(scale1, x);
    rescaled.push_back(make_starter_pair(F, v, F.mul(bp.beta1, v)));
  }
  for (FieldElement y : sys.chat_block(0)) {
    FieldElement w = F.mul(scale2, y);
    rescaled.push_back(make_starter_pair(F, w, F.mul(mb2, w)));
  }
  std::sort(rescaled.begin(), rescaled.end());
  return rescaled == two_quotient_starter(sys, bp).pairs
             ? DinitzEquivalence::Equal
             : DinitzEquivalence::NotEqual;
}

}  // namespace starterforge
