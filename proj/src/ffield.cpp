#include "starterforge/ffield.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace starterforge {
namespace {

// Digit vectors for extension-field arithmetic. Degrees stay tiny (p >= 3
// forces m <= 19 under the q <= 2^31 cap) so fixed-size buffers suffice.
using Digits = std::array<int64_t, 2 * FieldSpec::kMaxDegree>;

int64_t mod_pos(int64_t a, int64_t m) {
  int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Inverse of a mod p for prime p, via extended Euclid.
int64_t int_inv_mod(int64_t a, int64_t p) {
  int64_t old_r = mod_pos(a, p), r = p;
  int64_t old_s = 1, s = 0;
  while (r != 0) {
    int64_t quot = old_r / r;
    int64_t tmp = old_r - quot * r;
    old_r = r; r = tmp;
    tmp = old_s - quot * s;
    old_s = s; s = tmp;
  }
  if (old_r != 1) throw InvalidInput("int_inv_mod: argument not invertible");
  return mod_pos(old_s, p);
}

// --- dense polynomials over F_p, coefficient 0 is the constant term ---

struct Poly {
  std::vector<int64_t> c;  // no trailing zeros except the zero polynomial {}
  int deg() const { return int(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
};

Poly poly_trim(std::vector<int64_t> c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
  return {std::move(c)};
}

Poly poly_x() { return {{0, 1}}; }

Poly poly_mul(const Poly& a, const Poly& b, int64_t p) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<int64_t> out(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j)
      out[i + j] = (out[i + j] + a.c[i] * b.c[j]) % p;
  return poly_trim(std::move(out));
}

// Remainder of a modulo monic f.
Poly poly_rem(Poly a, const Poly& f, int64_t p) {
  int df = f.deg();
  while (a.deg() >= df) {
    int64_t lead = a.c.back();
    int shift = a.deg() - df;
    if (lead != 0)
      for (int j = 0; j <= df; ++j)
        a.c[shift + j] = mod_pos(a.c[shift + j] - lead * f.c[j], p);
    a.c.pop_back();
    while (!a.c.empty() && a.c.back() == 0) a.c.pop_back();
  }
  return a;
}

Poly poly_powmod(Poly base, int64_t e, const Poly& f, int64_t p) {
  Poly result{{1}};
  base = poly_rem(std::move(base), f, p);
  while (e > 0) {
    if (e & 1) result = poly_rem(poly_mul(result, base, p), f, p);
    base = poly_rem(poly_mul(base, base, p), f, p);
    e >>= 1;
  }
  return result;
}

Poly poly_sub(const Poly& a, const Poly& b, int64_t p) {
  std::vector<int64_t> out(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < out.size(); ++i) {
    int64_t av = i < a.c.size() ? a.c[i] : 0;
    int64_t bv = i < b.c.size() ? b.c[i] : 0;
    out[i] = mod_pos(av - bv, p);
  }
  return poly_trim(std::move(out));
}

// Quotient and remainder of a by nonzero b.
struct PolyDivMod {
  Poly quot, rem;
};

PolyDivMod poly_divmod(Poly a, const Poly& b, int64_t p) {
  int64_t lead_inv = int_inv_mod(b.c.back(), p);
  std::vector<int64_t> qc(a.deg() >= b.deg() ? a.deg() - b.deg() + 1 : 0, 0);
  while (!a.is_zero() && a.deg() >= b.deg()) {
    int shift = a.deg() - b.deg();
    int64_t factor = a.c.back() * lead_inv % p;
    qc[shift] = factor;
    for (int j = 0; j <= b.deg(); ++j)
      a.c[shift + j] = mod_pos(a.c[shift + j] - factor * b.c[j], p);
    while (!a.c.empty() && a.c.back() == 0) a.c.pop_back();
  }
  return {poly_trim(std::move(qc)), std::move(a)};
}

Poly poly_gcd(Poly a, Poly b, int64_t p) {
  while (!b.is_zero()) {
    // Make b monic so poly_rem applies.
    int64_t inv_lead = int_inv_mod(b.c.back(), p);
    for (auto& coef : b.c) coef = coef * inv_lead % p;
    Poly r = poly_rem(std::move(a), b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Rabin's irreducibility test for monic f of degree m over F_p:
// x^(p^m) == x (mod f), and gcd(x^(p^(m/r)) - x, f) == 1 for each prime r | m.
// The Frobenius powers are built by iterating h -> h^p.
bool poly_irreducible(const Poly& f, int64_t p) {
  int m = f.deg();
  std::vector<Poly> frob(m + 1);  // frob[d] = x^(p^d) mod f
  frob[0] = poly_rem(poly_x(), f, p);
  for (int d = 1; d <= m; ++d) frob[d] = poly_powmod(frob[d - 1], p, f, p);
  if (!(poly_sub(frob[m], poly_rem(poly_x(), f, p), p).is_zero())) return false;
  for (int64_t r : distinct_prime_factors(m)) {
    Poly diff = poly_sub(frob[m / r], poly_rem(poly_x(), f, p), p);
    Poly g = poly_gcd(f, diff, p);
    if (g.deg() != 0) return false;
  }
  return true;
}

}  // namespace

bool is_prime(int64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (int64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::vector<int64_t> distinct_prime_factors(int64_t n) {
  std::vector<int64_t> out;
  for (int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::optional<std::pair<int64_t, int>> prime_power_decompose(int64_t q) {
  if (q < 2) return std::nullopt;
  std::vector<int64_t> f = distinct_prime_factors(q);
  if (f.size() != 1) return std::nullopt;
  int64_t p = f[0];
  int m = 0;
  int64_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++m;
  }
  if (rest != 1) return std::nullopt;
  return std::make_pair(p, m);
}

int64_t FieldSpec::check(FieldElement a) const {
  if (a.q != q_)
    throw InvalidInput("field element belongs to F_" + std::to_string(a.q) +
                       ", expected F_" + std::to_string(q_));
  if (a.enc < 0 || a.enc >= q_)
    throw InvalidInput("field element encoding out of range");
  return a.enc;
}

FieldElement FieldSpec::element(int64_t enc) const {
  if (enc < 0 || enc >= q_)
    throw InvalidInput("encoding " + std::to_string(enc) +
                       " out of range for F_" + std::to_string(q_));
  return {enc, q_};
}

FieldElement FieldSpec::from_int(int64_t n) const { return {mod_pos(n, p_), q_}; }

FieldElement FieldSpec::add(FieldElement a, FieldElement b) const {
  int64_t x = check(a), y = check(b);
  if (m_ == 1) return {(x + y) % q_, q_};
  int64_t out = 0, pw = 1;
  for (int i = 0; i < m_; ++i) {
    out += (x % p_ + y % p_) % p_ * pw;
    x /= p_; y /= p_; pw *= p_;
  }
  return {out, q_};
}

FieldElement FieldSpec::sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }

FieldElement FieldSpec::neg(FieldElement a) const {
  int64_t x = check(a);
  if (m_ == 1) return {x == 0 ? 0 : q_ - x, q_};
  int64_t out = 0, pw = 1;
  for (int i = 0; i < m_; ++i) {
    int64_t d = x % p_;
    out += (d == 0 ? 0 : p_ - d) * pw;
    x /= p_; pw *= p_;
  }
  return {out, q_};
}

FieldElement FieldSpec::mul(FieldElement a, FieldElement b) const {
  int64_t x = check(a), y = check(b);
  if (m_ == 1) return {(x * y) % q_, q_};
  Digits xa{}, ya{}, prod{};
  for (int i = 0; i < m_; ++i) { xa[i] = x % p_; x /= p_; }
  for (int i = 0; i < m_; ++i) { ya[i] = y % p_; y /= p_; }
  for (int i = 0; i < m_; ++i) {
    if (xa[i] == 0) continue;
    for (int j = 0; j < m_; ++j) prod[i + j] += xa[i] * ya[j];
  }
  // Reduce by the monic modulus, top coefficient down.
  for (int i = 2 * m_ - 2; i >= m_; --i) {
    int64_t c = prod[i] % p_;
    if (c == 0) continue;
    for (int j = 0; j < m_; ++j)
      prod[i - m_ + j] = mod_pos(prod[i - m_ + j] - c * modulus_[j], p_);
  }
  int64_t out = 0, pw = 1;
  for (int i = 0; i < m_; ++i) {
    out += mod_pos(prod[i], p_) * pw;
    pw *= p_;
  }
  return {out, q_};
}

FieldElement FieldSpec::inv(FieldElement a) const {
  int64_t x = check(a);
  if (x == 0) throw InvalidInput("inv(0) is undefined");
  if (m_ == 1) return {int_inv_mod(x, q_), q_};
  // Polynomial extended Euclid against the modulus; s tracks the coefficient
  // of the element, so at the end s0 * a == r0 (mod modulus).
  Poly r0{modulus_}, r1;
  {
    std::vector<int64_t> c(m_);
    int64_t v = x;
    for (int i = 0; i < m_; ++i) { c[i] = v % p_; v /= p_; }
    r1 = poly_trim(std::move(c));
  }
  Poly s0, s1{{1}};
  while (!r1.is_zero()) {
    PolyDivMod dm = poly_divmod(std::move(r0), r1, p_);
    Poly s2 = poly_sub(s0, poly_mul(dm.quot, s1, p_), p_);
    r0 = std::move(r1); r1 = std::move(dm.rem);
    s0 = std::move(s1); s1 = std::move(s2);
  }
  if (r0.deg() != 0) throw ConsistencyError("inv: gcd with irreducible modulus not constant");
  int64_t scale = int_inv_mod(r0.c[0], p_);
  int64_t out = 0, pw = 1;
  for (int i = 0; i < m_; ++i) {
    int64_t c = i < int(s0.c.size()) ? s0.c[i] * scale % p_ : 0;
    out += c * pw;
    pw *= p_;
  }
  return {out, q_};
}

FieldElement FieldSpec::pow(FieldElement a, int64_t e) const {
  check(a);
  if (e < 0) throw InvalidInput("pow: exponent must be non-negative");
  FieldElement result = one();
  FieldElement base = a;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

FieldSpec make_field(int64_t p, int m) {
  if (!is_prime(p)) throw InvalidInput("p = " + std::to_string(p) + " is not prime");
  if (p == 2) throw InvalidInput("characteristic 2 is out of scope (q must be odd)");
  if (m < 1) throw InvalidInput("m must be >= 1");
  if (m > FieldSpec::kMaxDegree) throw InvalidInput("extension degree too large");
  int64_t q = 1;
  for (int i = 0; i < m; ++i) {
    if (q > FieldSpec::kMaxQ / p) throw InvalidInput("p^m exceeds the 2^31 bound");
    q *= p;
  }

  FieldSpec F;
  F.p_ = p;
  F.m_ = m;
  F.q_ = q;
  if (m == 1) {
    F.modulus_ = {0, 1};  // placeholder X, unused
    return F;
  }
  // Lexicographic scan over non-leading tuples (c_0, ..., c_{m-1}), c_0 first.
  std::vector<int64_t> c(m, 0);
  for (;;) {
    std::vector<int64_t> full(c);
    full.push_back(1);
    Poly f{full};
    if (poly_irreducible(f, p)) {
      F.modulus_ = std::move(full);
      return F;
    }
    int i = m - 1;
    while (i >= 0 && c[i] == p - 1) c[i--] = 0;
    if (i < 0) break;
    ++c[i];
  }
  throw ConsistencyError("no irreducible polynomial found (impossible)");
}

FieldSpec make_field_q(int64_t q) {
  auto pm = prime_power_decompose(q);
  if (!pm) throw InvalidInput("q = " + std::to_string(q) + " is not a prime power");
  return make_field(pm->first, pm->second);
}

FieldElement least_primitive_element(const FieldSpec& F) {
  int64_t order = F.q() - 1;
  std::vector<int64_t> primes = distinct_prime_factors(order);
  for (int64_t enc = 2; enc < F.q(); ++enc) {
    FieldElement x = F.element(enc);
    bool primitive = true;
    for (int64_t r : primes) {
      if (F.pow(x, order / r) == F.one()) {
        primitive = false;
        break;
      }
    }
    if (primitive) return x;
  }
  throw ConsistencyError("no primitive element found (impossible for a field)");
}

bool is_quadratic_residue(const FieldSpec& F, FieldElement x) {
  if (x.enc == 0) throw InvalidInput("residuosity of 0 is undefined");
  return F.pow(x, (F.q() - 1) / 2) == F.one();
}

std::pair<std::vector<FieldElement>, std::vector<FieldElement>> residue_sets(
    const FieldSpec& F) {
  int64_t half = (F.q() - 1) / 2;
  FieldElement g = least_primitive_element(F);
  FieldElement alpha = F.mul(g, g);
  std::vector<char> qr_mark(F.q(), 0);
  std::vector<FieldElement> qr;
  qr.reserve(half);
  FieldElement x = F.one();
  for (int64_t i = 0; i < half; ++i) {
    if (qr_mark[x.enc]) throw ConsistencyError("alpha order below (q-1)/2");
    qr_mark[x.enc] = 1;
    qr.push_back(x);
    x = F.mul(x, alpha);
  }
  std::vector<FieldElement> nqr;
  nqr.reserve(half);
  for (int64_t enc = 1; enc < F.q(); ++enc)
    if (!qr_mark[enc]) nqr.push_back(F.element(enc));
  std::sort(qr.begin(), qr.end());
  return {std::move(qr), std::move(nqr)};
}

}  // namespace starterforge
