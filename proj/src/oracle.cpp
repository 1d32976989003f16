#include "starterforge/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "starterforge/errors.hpp"

namespace starterforge {

namespace {

void require_member(const FieldSpec& F, FieldElement x) {
  if (x.q != F.q() || x.enc < 0 || x.enc >= F.q()) {
    throw InvalidInput("pair member " + std::to_string(x.enc) +
                       " does not belong to F_" + std::to_string(F.q()));
  }
}

// MMIX linear congruential step; the constants are the published Knuth ones,
// fixed here so mutation seeds replay identically on every platform.
uint64_t lcg_next(uint64_t& state) {
  state = state * 6364136223846793005ULL + 1442695040888963407ULL;
  return state >> 33;  // discard the weak low bits
}

uint64_t lcg_below(uint64_t& state, uint64_t bound) {
  return lcg_next(state) % bound;
}

int64_t mod_inv_or_minus1(int64_t a, int64_t n) {
  int64_t r0 = n, r1 = a % n, s0 = 0, s1 = 1;
  while (r1 != 0) {
    int64_t k = r0 / r1;
    r0 -= k * r1;
    s0 -= k * s1;
    std::swap(r0, r1);
    std::swap(s0, s1);
  }
  if (r0 != 1) return -1;
  return ((s0 % n) + n) % n;
}

// The ratios a pair can contribute in Z_n: y/x needs x to be a unit. Up to
// two values; empty when neither member is invertible.
std::vector<int64_t> unit_ratios(int64_t n, int64_t x, int64_t y) {
  std::vector<int64_t> out;
  int64_t xi = mod_inv_or_minus1(x, n);
  int64_t yi = mod_inv_or_minus1(y, n);
  if (xi >= 0) out.push_back(y * xi % n);
  if (yi >= 0 && (out.empty() || x * yi % n != out[0])) out.push_back(x * yi % n);
  std::sort(out.begin(), out.end());
  return out;
}

// Smallest |Q| <= 2 covering every option set, or 3 for "more". Q must meet
// the first set, and a second element must meet the first set a candidate
// misses, so the candidate space is at most 2 x 2.
int min_quotient_le2(const std::vector<std::vector<int64_t>>& options) {
  if (options.empty()) return 0;
  auto hits = [](const std::vector<int64_t>& opt, int64_t r) {
    return std::find(opt.begin(), opt.end(), r) != opt.end();
  };
  if (options.front().empty()) return 3;
  for (int64_t r : options.front()) {
    bool all = true;
    for (const auto& opt : options) all = all && hits(opt, r);
    if (all) return 1;
  }
  for (int64_t r : options.front()) {
    const std::vector<int64_t>* unhit = nullptr;
    for (const auto& opt : options) {
      if (!hits(opt, r)) {
        unhit = &opt;
        break;
      }
    }
    if (unhit->empty()) return 3;
    for (int64_t s : *unhit) {
      bool all = true;
      for (const auto& opt : options) all = all && (hits(opt, r) || hits(opt, s));
      if (all) return 2;
    }
  }
  return 3;
}

}  // namespace

std::vector<FieldElement> oracle_residues(const FieldSpec& F) {
  std::vector<char> seen(F.q(), 0);
  for (int64_t e = 1; e < F.q(); ++e) {
    FieldElement x = F.element(e);
    seen[F.mul(x, x).enc] = 1;
  }
  std::vector<FieldElement> out;
  for (int64_t e = 1; e < F.q(); ++e) {
    if (seen[e]) out.push_back(F.element(e));
  }
  return out;
}

OracleReport oracle_verify(const FieldSpec& F, const std::vector<Pair>& pairs) {
  const int64_t q = F.q();
  for (const Pair& pr : pairs) {
    require_member(F, pr.a);
    require_member(F, pr.b);
  }

  std::vector<int32_t> members(q, 0), diffs(q, 0), sums(q, 0);
  for (const Pair& pr : pairs) {
    ++members[pr.a.enc];
    ++members[pr.b.enc];
    FieldElement d = F.sub(pr.a, pr.b);
    ++diffs[d.enc];
    ++diffs[F.neg(d).enc];
    ++sums[F.add(pr.a, pr.b).enc];
  }

  OracleReport rep;
  rep.element_cover = members[0] == 0;
  rep.difference_cover = diffs[0] == 0;
  bool sums_distinct = true;
  for (int64_t e = 1; e < q; ++e) {
    rep.element_cover = rep.element_cover && members[e] == 1;
    rep.difference_cover = rep.difference_cover && diffs[e] == 1;
  }
  for (int64_t e = 0; e < q; ++e) {
    if (sums[e] > 0) ++rep.sum_count;
    sums_distinct = sums_distinct && sums[e] <= 1;
  }
  rep.is_starter = rep.element_cover && rep.difference_cover;
  rep.is_strong = rep.is_starter && sums_distinct;
  return rep;
}

bool reports_agree(const VerificationReport& main, const OracleReport& oracle) {
  return main.is_starter == oracle.is_starter &&
         main.is_strong == oracle.is_strong &&
         main.sum_count == oracle.sum_count;
}

std::vector<BetaPair> oracle_beta_sweep(const CosetSystem& sys) {
  const FieldSpec& F = sys.field();
  const int64_t q = F.q();

  int64_t t = q - 1;
  while (t % 2 == 0) t /= 2;

  std::vector<char> qr(q, 0);
  for (FieldElement r : oracle_residues(F)) qr[r.enc] = 1;

  // Chat_0 without a generator: C_0 is the unique subgroup of order t, i.e.
  // exactly the t-th roots of unity.
  std::vector<FieldElement> chat0;
  for (int64_t e = 1; e < q; ++e) {
    FieldElement x = F.element(e);
    if (F.pow(x, t) == F.one()) chat0.push_back(F.neg(x));
  }
  if (chat0.size() != static_cast<size_t>(t)) {
    throw ConsistencyError("found " + std::to_string(chat0.size()) + " t-th " +
                           "roots of unity in F_" + std::to_string(q) +
                           ", expected t = " + std::to_string(t));
  }

  FieldElement one = F.one();
  std::vector<int64_t> stamp(q, -1);
  std::vector<BetaPair> out;
  for (int64_t b1e = 1; b1e < q; ++b1e) {
    if (qr[b1e]) continue;
    FieldElement b1 = F.element(b1e);
    for (FieldElement x : chat0) stamp[F.mul(b1, x).enc] = b1e;
    FieldElement b1m = F.sub(b1, one), b1p = F.add(b1, one);
    for (int64_t b2e = 1; b2e < q; ++b2e) {
      if (qr[b2e] || stamp[b2e] != b1e) continue;
      FieldElement b2 = F.element(b2e);
      FieldElement prod1 = F.mul(b1m, F.add(b2, one));
      FieldElement prod2 = F.mul(b1p, F.sub(b2, one));
      if (prod1.enc != 0 && !qr[prod1.enc] && prod2.enc != 0 && !qr[prod2.enc]) {
        out.push_back({b1, b2, true, true});
      }
    }
  }
  return out;
}

std::vector<Pair> apply_mutation(const FieldSpec& F,
                                 const std::vector<Pair>& pairs,
                                 const MutationSpec& spec) {
  for (const Pair& pr : pairs) {
    require_member(F, pr.a);
    require_member(F, pr.b);
  }
  if (pairs.size() < 2) {
    throw InvalidInput("mutations need at least two pairs to act on");
  }

  // Mix the kind into the stream so the same seed yields unrelated picks for
  // different kinds.
  uint64_t state = spec.seed * 4u + static_cast<uint64_t>(spec.kind) + 1u;
  lcg_next(state);
  std::vector<Pair> out = pairs;
  const uint64_t n = out.size();

  auto member_at = [&](uint64_t slot) -> FieldElement& {
    return slot % 2 ? out[slot / 2].b : out[slot / 2].a;
  };
  auto reorder = [](Pair& p) {
    if (p.b < p.a) std::swap(p.a, p.b);
  };

  switch (spec.kind) {
    case MutationKind::SwapElement: {
      std::vector<char> used(F.q(), 0);
      for (const Pair& pr : out) used[pr.a.enc] = used[pr.b.enc] = 1;
      int64_t lowest = 0;
      while (lowest < F.q() && used[lowest]) ++lowest;
      // a full cover leaves only 0 unused; a partial one cannot reach here
      // with every encoding taken since 2n < q
      uint64_t slot = lcg_below(state, 2 * n);
      member_at(slot) = F.element(lowest);
      reorder(out[slot / 2]);
      break;
    }
    case MutationKind::DuplicateElement: {
      uint64_t slot = lcg_below(state, 2 * n);
      uint64_t other = lcg_below(state, 2 * (n - 1));
      if (other / 2 >= slot / 2) other += 2;  // skip the victim's own pair
      member_at(slot) = member_at(other);
      reorder(out[slot / 2]);
      break;
    }
    case MutationKind::ShiftPair: {
      uint64_t idx = lcg_below(state, n);
      FieldElement c = F.element(1 + int64_t(lcg_below(state, F.q() - 1)));
      out[idx].a = F.add(out[idx].a, c);
      out[idx].b = F.add(out[idx].b, c);
      reorder(out[idx]);
      break;
    }
    case MutationKind::DropPair: {
      out.erase(out.begin() + lcg_below(state, n));
      break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

CensusRow exhaustive_small_group_census(int64_t n) {
  if (n < 3 || n > 11 || n % 2 == 0) {
    throw InvalidInput("census covers odd n in [3, 11], got " +
                       std::to_string(n));
  }

  CensusRow row;
  row.n = n;

  std::vector<std::pair<int64_t, int64_t>> matching;
  std::vector<char> used(n, 0);

  auto classify = [&]() {
    ++row.matchings;
    std::vector<int32_t> diffs(n, 0), sums(n, 0);
    for (auto [x, y] : matching) {
      int64_t d = (x - y + n) % n;
      ++diffs[d];
      ++diffs[(n - d) % n];
      ++sums[(x + y) % n];
    }
    bool starter = diffs[0] == 0;
    for (int64_t e = 1; e < n; ++e) starter = starter && diffs[e] == 1;
    if (!starter) return;
    ++row.starters;

    bool strong = true;
    for (int64_t e = 0; e < n; ++e) strong = strong && sums[e] <= 1;
    if (strong) ++row.strong;

    std::vector<std::vector<int64_t>> options;
    options.reserve(matching.size());
    for (auto [x, y] : matching) options.push_back(unit_ratios(n, x, y));
    int k = min_quotient_le2(options);
    if (k == 1) ++row.quotient_one;
    if (k == 2) ++row.quotient_two;
  };

  // Backtracking over perfect matchings of {1, ..., n-1}: always extend from
  // the smallest unused element so each matching appears exactly once.
  auto rec = [&](auto&& self) -> void {
    int64_t x = 1;
    while (x < n && used[x]) ++x;
    if (x == n) {
      classify();
      return;
    }
    used[x] = 1;
    for (int64_t y = x + 1; y < n; ++y) {
      if (used[y]) continue;
      used[y] = 1;
      matching.emplace_back(x, y);
      self(self);
      matching.pop_back();
      used[y] = 0;
    }
    used[x] = 0;
  };
  rec(rec);
  return row;
}

}  // namespace starterforge
