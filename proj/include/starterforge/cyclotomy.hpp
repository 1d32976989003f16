#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "starterforge/ffield.hpp"

namespace starterforge {

// q = 2^k * t + 1 with k > 1 and t > 1 odd. delta = 2^(k-1) is the number of
// cosets of C_0 inside the quadratic residues; delta1 = 2^(k-2) is the number
// of (C_j, Chat_j) block pairs.
struct Decomposition {
  int64_t q = 0;
  int k = 0;
  int64_t t = 0;
  int64_t delta = 0;
  int64_t delta1 = 0;
};

// Rejects q that is not an odd prime power, q with k < 2 (q = 3 mod 4, which
// belongs to the one-quotient construction), and t = 1.
Decomposition decompose(int64_t q);

enum class BlockKind : int8_t { C, Chat, Nqr };

struct BlockLabel {
  BlockKind kind = BlockKind::Nqr;
  int j = -1;  // block index; -1 for Nqr

  friend bool operator==(const BlockLabel&, const BlockLabel&) = default;
};

// The coset structure of F_q^*: alpha = g^2 generates QR, C_0 = <alpha^delta>
// has order t, C_j = alpha^j C_0 and Chat_j = -C_j for j < delta1. Together
// the 2*delta1 blocks tile QR; this is verified at construction and failure
// is a hard error. Immutable once built; safe to share across threads.
//
// Memory is O(q), so this is a desk-scale object (the sweeps use q <= 5000).
class CosetSystem {
 public:
  const FieldSpec& field() const { return F_; }
  const Decomposition& decomp() const { return d_; }
  FieldElement generator() const { return g_; }
  FieldElement alpha() const { return alpha_; }

  // Block j in generation order: c_block(j)[i] = alpha^j * alpha^(delta*i).
  const std::vector<FieldElement>& c_block(int j) const;
  const std::vector<FieldElement>& chat_block(int j) const;

  // Label of a nonzero element; rejects 0.
  BlockLabel coset_of(FieldElement x) const;
  bool is_qr(FieldElement x) const;
  // +1 for residues, -1 for non-residues; rejects 0. Derived from the coset
  // index, not from Euler's criterion.
  int residue_sign(FieldElement x) const;

  const std::vector<FieldElement>& qr_sorted() const { return qr_; }
  const std::vector<FieldElement>& nqr_sorted() const { return nqr_; }

 private:
  friend CosetSystem build_cosets(const FieldSpec& F);

  FieldSpec F_;
  Decomposition d_;
  FieldElement g_, alpha_;
  std::vector<std::vector<FieldElement>> c_, chat_;
  // Per-encoding label: -2 zero, -1 NQR, else coset index in [0, delta) where
  // C_j gets j and Chat_j gets delta1 + j (consistent with -C_0 = C_delta1).
  std::vector<int32_t> label_;
  std::vector<FieldElement> qr_, nqr_;
};

CosetSystem build_cosets(const FieldSpec& F);

// Cyclotomic numbers of order 2 for even f = (q-1)/2: the count of x in C_i
// with x+1 in C_j, where C_0 = QR and C_1 = NQR. Closed form:
// (0,0) = (f-2)/2 and (0,1) = (1,0) = (1,1) = f/2. Rejects odd f and indices
// outside {0,1}.
int64_t cyclotomic_number(int64_t f, int i, int j);

// A maximal run of consecutive non-residues under x -> x+1. For prime q this
// is consecutive integers; for extension fields the successor chains wrap
// inside additive cosets of F_p, and a fully-non-residue cycle is reported
// with its smallest encoding as start and length p.
struct NqrRun {
  FieldElement start;
  int64_t length = 0;
};

// All maximal runs, sorted by start encoding. Works for any odd prime power.
std::vector<NqrRun> nqr_runs(const FieldSpec& F);

// Smallest beta in NQR with (beta+1)(beta-1) in NQR, located the way the
// underlying existence proof does: as an endpoint of a maximal non-residue
// run of length >= 2. Requires decompose(q) to succeed; throws
// TheoremViolation if no witness exists (never, for valid q).
FieldElement find_beta_star(const FieldSpec& F);

// Smallest-encoded pair (beta1, beta2), both in NQR, with beta1 + 1 in NQR
// and beta2 + 1 in QR. Also verifies the minus-variant pair (beta - 1 in NQR
// / in QR) exists, throwing TheoremViolation otherwise. Requires decompose(q)
// to succeed.
std::pair<FieldElement, FieldElement> mixed_beta_witnesses(const FieldSpec& F);

}  // namespace starterforge
