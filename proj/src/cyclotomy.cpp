#include "starterforge/cyclotomy.hpp"

#include <algorithm>
#include <string>

namespace starterforge {

Decomposition decompose(int64_t q) {
  auto pm = prime_power_decompose(q);
  if (!pm || pm->first == 2)
    throw InvalidInput("q = " + std::to_string(q) + " is not an odd prime power");
  Decomposition d;
  d.q = q;
  int64_t rest = q - 1;
  while (rest % 2 == 0) {
    rest /= 2;
    ++d.k;
  }
  d.t = rest;
  if (d.k < 2)
    throw InvalidInput("q = " + std::to_string(q) +
                       " has q-1 = 2t with t odd (k = 1); this q belongs to "
                       "the one-quotient construction");
  if (d.t == 1)
    throw InvalidInput("q = " + std::to_string(q) +
                       " has q-1 a power of two (t = 1), outside the construction");
  d.delta = int64_t(1) << (d.k - 1);
  d.delta1 = int64_t(1) << (d.k - 2);
  return d;
}

const std::vector<FieldElement>& CosetSystem::c_block(int j) const {
  if (j < 0 || j >= int(c_.size())) throw InvalidInput("block index out of range");
  return c_[j];
}

const std::vector<FieldElement>& CosetSystem::chat_block(int j) const {
  if (j < 0 || j >= int(chat_.size())) throw InvalidInput("block index out of range");
  return chat_[j];
}

BlockLabel CosetSystem::coset_of(FieldElement x) const {
  if (x.q != F_.q()) throw InvalidInput("element from a different field");
  if (x.enc == 0) throw InvalidInput("0 has no coset label");
  int32_t lab = label_[x.enc];
  if (lab < 0) return {BlockKind::Nqr, -1};
  if (lab < d_.delta1) return {BlockKind::C, int(lab)};
  return {BlockKind::Chat, int(lab - d_.delta1)};
}

bool CosetSystem::is_qr(FieldElement x) const {
  if (x.q != F_.q()) throw InvalidInput("element from a different field");
  if (x.enc == 0) throw InvalidInput("0 is neither residue nor non-residue");
  return label_[x.enc] >= 0;
}

int CosetSystem::residue_sign(FieldElement x) const { return is_qr(x) ? 1 : -1; }

CosetSystem build_cosets(const FieldSpec& F) {
  CosetSystem sys;
  sys.F_ = F;
  sys.d_ = decompose(F.q());
  sys.g_ = least_primitive_element(F);
  sys.alpha_ = F.mul(sys.g_, sys.g_);

  const Decomposition& d = sys.d_;
  sys.label_.assign(F.q(), -1);
  sys.label_[0] = -2;

  // C_0 in generation order: alpha^delta, alpha^(2 delta), ..., ending at 1.
  FieldElement step = F.pow(sys.alpha_, d.delta);
  std::vector<FieldElement> c0;
  c0.reserve(d.t);
  FieldElement x = step;
  for (int64_t i = 0; i < d.t; ++i) {
    c0.push_back(x);
    x = F.mul(x, step);
  }
  if (c0.back() != F.one())
    throw ConsistencyError("alpha^delta does not have order t");

  sys.c_.resize(d.delta1);
  sys.chat_.resize(d.delta1);
  auto place = [&](FieldElement e, int32_t lab) {
    if (sys.label_[e.enc] != -1)
      throw ConsistencyError("coset blocks overlap at encoding " + std::to_string(e.enc));
    sys.label_[e.enc] = lab;
  };
  FieldElement scale = F.one();
  for (int64_t j = 0; j < d.delta1; ++j) {
    auto& cj = sys.c_[j];
    auto& chatj = sys.chat_[j];
    cj.reserve(d.t);
    chatj.reserve(d.t);
    for (const FieldElement& base : c0) {
      FieldElement e = F.mul(scale, base);
      cj.push_back(e);
      chatj.push_back(F.neg(e));
      place(e, int32_t(j));
      place(chatj.back(), int32_t(d.delta1 + j));
    }
    scale = F.mul(scale, sys.alpha_);
  }

  // The 2*delta1 blocks must tile QR exactly: right count, every member a
  // residue, every residue labeled. Each block must also sum to zero.
  int64_t labeled = 0;
  for (int64_t enc = 1; enc < F.q(); ++enc)
    if (sys.label_[enc] >= 0) ++labeled;
  if (labeled != (F.q() - 1) / 2)
    throw ConsistencyError("coset blocks do not cover half of F_q^*");
  for (int64_t enc = 1; enc < F.q(); ++enc) {
    bool qr = is_quadratic_residue(F, F.element(enc));
    if (qr != (sys.label_[enc] >= 0))
      throw ConsistencyError("coset labeling disagrees with Euler residuosity");
  }
  for (const auto& blocks : {sys.c_, sys.chat_}) {
    for (const auto& block : blocks) {
      FieldElement sum = F.zero();
      for (const FieldElement& e : block) sum = F.add(sum, e);
      if (sum != F.zero()) throw ConsistencyError("coset block does not sum to zero");
    }
  }

  sys.qr_.reserve((F.q() - 1) / 2);
  sys.nqr_.reserve((F.q() - 1) / 2);
  for (int64_t enc = 1; enc < F.q(); ++enc)
    (sys.label_[enc] >= 0 ? sys.qr_ : sys.nqr_).push_back(F.element(enc));
  return sys;
}

int64_t cyclotomic_number(int64_t f, int i, int j) {
  if (f < 2 || f % 2 != 0)
    throw InvalidInput("cyclotomic numbers of order 2 require even f >= 2");
  if (i < 0 || i > 1 || j < 0 || j > 1)
    throw InvalidInput("cyclotomic indices must be 0 or 1");
  return (i == 0 && j == 0) ? (f - 2) / 2 : f / 2;
}

namespace {

// Per-encoding residuosity via Euler: +1, -1, or 0 for the zero element.
std::vector<int8_t> euler_signs(const FieldSpec& F) {
  std::vector<int8_t> sign(F.q(), 0);
  for (int64_t enc = 1; enc < F.q(); ++enc)
    sign[enc] = is_quadratic_residue(F, F.element(enc)) ? 1 : -1;
  return sign;
}

}  // namespace

std::vector<NqrRun> nqr_runs(const FieldSpec& F) {
  std::vector<int8_t> sign = euler_signs(F);
  std::vector<NqrRun> runs;
  std::vector<char> in_run(F.q(), 0);

  // A run starts where the predecessor is zero or a residue. Walking forward
  // from each start covers every non-residue except those on fully
  // non-residue +1 cycles (possible only in extension fields).
  for (int64_t enc = 1; enc < F.q(); ++enc) {
    if (sign[enc] != -1) continue;
    FieldElement e = F.element(enc);
    FieldElement prev = F.sub(e, F.one());
    if (prev.enc != 0 && sign[prev.enc] == -1) continue;
    NqrRun run{e, 0};
    FieldElement cur = e;
    while (cur.enc != 0 && sign[cur.enc] == -1) {
      in_run[cur.enc] = 1;
      ++run.length;
      cur = F.add(cur, F.one());
    }
    runs.push_back(run);
  }
  for (int64_t enc = 1; enc < F.q(); ++enc) {
    if (sign[enc] != -1 || in_run[enc]) continue;
    // Entire +1 cycle of non-residues: length is the characteristic, start
    // is the smallest unvisited encoding on it.
    NqrRun run{F.element(enc), 0};
    FieldElement cur = run.start;
    do {
      in_run[cur.enc] = 1;
      ++run.length;
      cur = F.add(cur, F.one());
    } while (cur.enc != run.start.enc);
    runs.push_back(run);
  }
  std::sort(runs.begin(), runs.end(),
            [](const NqrRun& a, const NqrRun& b) { return a.start.enc < b.start.enc; });
  return runs;
}

FieldElement find_beta_star(const FieldSpec& F) {
  decompose(F.q());  // validates the field shape
  std::vector<int8_t> sign = euler_signs(F);
  std::vector<NqrRun> runs = nqr_runs(F);
  bool found = false;
  FieldElement best{};
  auto consider = [&](FieldElement beta) {
    // Endpoint of a length >= 2 run: exactly one neighbour is a non-residue,
    // so (beta+1)(beta-1) is NQR * QR = NQR. Re-check explicitly anyway.
    FieldElement up = F.add(beta, F.one());
    FieldElement down = F.sub(beta, F.one());
    if (up.enc == 0 || down.enc == 0) return;
    if (sign[F.mul(up, down).enc] != -1) return;
    if (!found || beta.enc < best.enc) {
      best = beta;
      found = true;
    }
  };
  for (const NqrRun& run : runs) {
    if (run.length < 2 || run.length >= F.p()) continue;  // cycles have no endpoints
    consider(run.start);
    FieldElement last = run.start;
    for (int64_t i = 1; i < run.length; ++i) last = F.add(last, F.one());
    consider(last);
  }
  if (!found)
    throw TheoremViolation("no non-residue beta with (beta+1)(beta-1) a non-residue in F_" +
                           std::to_string(F.q()));
  return best;
}

std::pair<FieldElement, FieldElement> mixed_beta_witnesses(const FieldSpec& F) {
  decompose(F.q());
  std::vector<int8_t> sign = euler_signs(F);
  auto smallest = [&](int offset, int want) -> FieldElement {
    // offset +1 scans beta+1, offset -1 scans beta-1; want is the required
    // residuosity of the neighbour. beta itself runs over NQR ascending.
    for (int64_t enc = 1; enc < F.q(); ++enc) {
      if (sign[enc] != -1) continue;
      FieldElement beta = F.element(enc);
      FieldElement nb = offset > 0 ? F.add(beta, F.one()) : F.sub(beta, F.one());
      if (nb.enc == 0) continue;
      if (sign[nb.enc] == want) return beta;
    }
    throw TheoremViolation("missing mixed residuosity witness in F_" + std::to_string(F.q()));
  };
  FieldElement beta1 = smallest(+1, -1);
  FieldElement beta2 = smallest(+1, +1);
  // The minus-variant pair must exist too; existence follows from the order-2
  // cyclotomic numbers all being positive.
  smallest(-1, -1);
  smallest(-1, +1);
  return {beta1, beta2};
}

}  // namespace starterforge
