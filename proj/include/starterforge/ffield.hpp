#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "starterforge/errors.hpp"

namespace starterforge {

// An element of F_q, stored as its canonical integer encoding
//   enc = sum_i c_i * p^i   (constant term first)
// where the c_i are the coefficients of the representative polynomial. For
// prime fields this is just the residue. The element also carries q: since
// q = p^m determines (p, m) uniquely and the modulus is deterministic, q
// identifies the field, so mixing elements across fields is detectable.
struct FieldElement {
  int64_t enc = 0;
  int64_t q = 0;

  friend bool operator==(const FieldElement&, const FieldElement&) = default;
  // Ordering is by encoding; only meaningful within one field.
  friend bool operator<(const FieldElement& a, const FieldElement& b) {
    return a.enc < b.enc;
  }
};

// Immutable description of F_{p^m} plus its arithmetic. All operations are
// const and the object can be shared freely across threads. Encodings are
// validated on entry; q is capped at 2^31 so every intermediate product fits
// in int64_t.
class FieldSpec {
 public:
  static constexpr int64_t kMaxQ = int64_t(1) << 31;
  static constexpr int kMaxDegree = 20;

  int64_t p() const { return p_; }
  int m() const { return m_; }
  int64_t q() const { return q_; }
  // Monic modulus polynomial, m+1 coefficients, constant term first. For
  // m == 1 this is the unused placeholder X.
  const std::vector<int64_t>& modulus() const { return modulus_; }

  FieldElement zero() const { return {0, q_}; }
  FieldElement one() const { return {1, q_}; }
  // Wraps a raw encoding; rejects values outside [0, q).
  FieldElement element(int64_t enc) const;
  // Embeds an integer through the prime subfield (reduces mod p). Accepts
  // negatives, so from_int(-1) is the field's -1.
  FieldElement from_int(int64_t n) const;

  FieldElement add(FieldElement a, FieldElement b) const;
  FieldElement sub(FieldElement a, FieldElement b) const;
  FieldElement neg(FieldElement a) const;
  FieldElement mul(FieldElement a, FieldElement b) const;
  // Extended Euclid (integer for m = 1, polynomial otherwise). Rejects 0.
  FieldElement inv(FieldElement a) const;
  // Square-and-multiply; e must be >= 0 (write inv(pow(a, -e)) yourself).
  FieldElement pow(FieldElement a, int64_t e) const;

 private:
  friend FieldSpec make_field(int64_t p, int m);

  int64_t check(FieldElement a) const;

  int64_t p_ = 0;
  int m_ = 0;
  int64_t q_ = 0;
  std::vector<int64_t> modulus_;
};

// Builds F_{p^m}. p must be an odd prime, m >= 1, p^m <= 2^31. For m > 1 the
// modulus is the first irreducible found when the non-leading coefficient
// tuples (c_0, ..., c_{m-1}) are enumerated in lexicographic order with c_0
// compared first.
FieldSpec make_field(int64_t p, int m);

// Convenience: factors q as p^m and builds the field. Rejects non prime
// powers and even q.
FieldSpec make_field_q(int64_t q);

// Smallest-encoding element of multiplicative order q-1. Order is tested via
// the distinct prime factors of q-1 (trial division).
FieldElement least_primitive_element(const FieldSpec& F);

// Euler's criterion: x^((q-1)/2) == 1. Rejects 0.
bool is_quadratic_residue(const FieldSpec& F, FieldElement x);

// (QR, NQR), both sorted by encoding, both of size (q-1)/2. QR is generated
// as the powers of g^2 for g the least primitive element, which keeps this
// path independent of the per-element Euler test above.
std::pair<std::vector<FieldElement>, std::vector<FieldElement>> residue_sets(
    const FieldSpec& F);

bool is_prime(int64_t n);
// Distinct prime factors, ascending.
std::vector<int64_t> distinct_prime_factors(int64_t n);
// q = p^m with p prime, m >= 1; nullopt otherwise.
std::optional<std::pair<int64_t, int>> prime_power_decompose(int64_t q);

}  // namespace starterforge
