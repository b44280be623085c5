#pragma once

// Finite fields F_q, q = p^h odd, with a canonical integer code for every
// element: the coefficient vector (c_0, ..., c_{h-1}) of the residue
// polynomial maps to sum c_i p^i. Extension towers F_{q^e} over an arbitrary
// base use the same scheme with base-q digits, which gives the fixed basis
// {1, beta, ..., beta^{e-1}} for free.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "capforge/error.hpp"
#include "capforge/numtheory.hpp"

namespace capforge {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline constexpr u64 kMaxFieldOrder = 1ULL << 63;

struct Element {
  u64 code = 0;

  friend constexpr bool operator==(Element, Element) = default;
  friend constexpr auto operator<=>(Element, Element) = default;
};

class PrimeField {
 public:
  explicit PrimeField(u64 p = 3) : p_(p) {}

  u64 order() const { return p_; }
  u64 characteristic() const { return p_; }

  Element zero() const { return {0}; }
  Element one() const { return {1 % p_}; }

  Element add(Element a, Element b) const {
    u64 s = a.code + b.code;
    return {s >= p_ ? s - p_ : s};
  }
  Element sub(Element a, Element b) const { return {a.code >= b.code ? a.code - b.code : a.code + p_ - b.code}; }
  Element neg(Element a) const { return {a.code ? p_ - a.code : 0}; }
  Element mul(Element a, Element b) const { return {nt::mulmod(a.code, b.code, p_)}; }

  // Extended Euclid on (a, p).
  Element inv(Element a) const {
    if (a.code == 0) throw Error(Errc::DivisionByZero, "inverse of zero");
    i64 r0 = static_cast<i64>(p_), r1 = static_cast<i64>(a.code);
    i64 s0 = 0, s1 = 1;
    while (r1 != 0) {
      i64 quot = r0 / r1;
      i64 r2 = r0 - quot * r1;
      r0 = r1;
      r1 = r2;
      __int128 s2 = static_cast<__int128>(s0) - static_cast<__int128>(quot) * s1;
      s0 = s1;
      s1 = static_cast<i64>(s2 % static_cast<__int128>(p_));
    }
    i64 s = s0 % static_cast<i64>(p_);
    if (s < 0) s += static_cast<i64>(p_);
    return {static_cast<u64>(s)};
  }

  Element div(Element a, Element b) const { return mul(a, inv(b)); }

  Element pow(Element a, u64 n) const { return {nt::powmod(a.code, n, p_)}; }

  // Legendre symbol by the binary Jacobi algorithm.
  int legendre(Element a) const {
    u64 x = a.code, n = p_;
    if (x == 0) return 0;
    int sign = 1;
    while (x != 0) {
      while ((x & 1) == 0) {
        x >>= 1;
        u64 r = n & 7;
        if (r == 3 || r == 5) sign = -sign;
      }
      std::swap(x, n);
      if ((x & 3) == 3 && (n & 3) == 3) sign = -sign;
      x %= n;
    }
    return n == 1 ? sign : 0;
  }

 private:
  u64 p_;
};

// Dense little-endian polynomials over a field whose zero has code 0.
namespace poly {

using Poly = std::vector<Element>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back().code == 0) a.pop_back();
}

template <class F>
Poly sub(const F& f, Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), f.zero());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = f.sub(a[i], b[i]);
  trim(a);
  return a;
}

template <class F>
Poly mul(const F& f, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, f.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].code == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
  }
  trim(out);
  return out;
}

template <class F>
Poly rem(const F& f, Poly a, const Poly& m) {
  trim(a);
  const Element lead_inv = f.inv(m.back());
  while (a.size() >= m.size()) {
    const Element c = f.mul(a.back(), lead_inv);
    const std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = f.sub(a[shift + i], f.mul(c, m[i]));
    trim(a);
  }
  return a;
}

template <class F>
Poly powmod(const F& f, Poly base, u64 e, const Poly& m) {
  Poly result = rem(f, Poly{f.one()}, m);
  base = rem(f, std::move(base), m);
  while (e) {
    if (e & 1) result = rem(f, mul(f, result, base), m);
    e >>= 1;
    if (e) base = rem(f, mul(f, base, base), m);
  }
  return result;
}

// Monic gcd.
template <class F>
Poly gcd(const F& f, Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(f, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const Element li = f.inv(a.back());
    for (auto& c : a) c = f.mul(c, li);
  }
  return a;
}

// Rabin's test: f of degree d is irreducible over F_Q iff X^{Q^d} = X mod f
// and gcd(X^{Q^{d/r}} - X, f) = 1 for every prime r | d.
template <class F>
bool is_irreducible(const F& f, Poly m) {
  trim(m);
  if (m.size() < 2) return false;
  const std::size_t d = m.size() - 1;
  if (d == 1) return true;
  const Poly x{f.zero(), f.one()};
  std::vector<Poly> frob(d + 1);
  frob[0] = rem(f, x, m);
  for (std::size_t i = 1; i <= d; ++i) frob[i] = powmod(f, frob[i - 1], f.order(), m);
  if (!sub(f, frob[d], rem(f, x, m)).empty()) return false;
  for (u64 r : nt::prime_divisors(d)) {
    if (gcd(f, sub(f, frob[d / r], x), m).size() != 1) return false;
  }
  return true;
}

// Smallest monic irreducible of degree d, comparing the coefficient tuples
// (c_{d-1}, ..., c_0) lexicographically.
template <class F>
Poly smallest_irreducible(const F& f, unsigned d) {
  const u64 base = f.order();
  for (u64 n = 0;; ++n) {
    Poly cand(d + 1, f.zero());
    u64 rest = n;
    for (unsigned i = 0; i < d; ++i) {
      cand[i] = Element{rest % base};
      rest /= base;
    }
    cand[d] = f.one();
    if (is_irreducible(f, cand)) return cand;
  }
}

}  // namespace poly

// F_Q[X]/(modulus) for a monic irreducible modulus. Codes are base-Q digit
// strings of the residue coefficients.
template <class Base>
class QuotientField {
 public:
  QuotientField(Base base, poly::Poly modulus) : base_(std::move(base)), mod_(std::move(modulus)) {
    deg_ = static_cast<unsigned>(mod_.size() - 1);
    auto order = nt::checked_pow(base_.order(), deg_, kMaxFieldOrder);
    if (!order) throw Error(Errc::OrderTooLarge, "extension order exceeds 2^63");
    order_ = *order;
  }

  const Base& base() const { return base_; }
  const poly::Poly& modulus() const { return mod_; }
  unsigned degree() const { return deg_; }
  u64 order() const { return order_; }

  Element zero() const { return {0}; }
  Element one() const { return {1}; }

  std::vector<Element> decode(Element a) const {
    std::vector<Element> out(deg_);
    const u64 bq = base_.order();
    for (unsigned i = 0; i < deg_; ++i) {
      out[i] = Element{a.code % bq};
      a.code /= bq;
    }
    return out;
  }

  Element encode(std::span<const Element> coeffs) const {
    u64 code = 0;
    const u64 bq = base_.order();
    for (std::size_t i = coeffs.size(); i-- > 0;) code = code * bq + coeffs[i].code;
    return {code};
  }

  Element add(Element a, Element b) const {
    auto x = decode(a), y = decode(b);
    for (unsigned i = 0; i < deg_; ++i) x[i] = base_.add(x[i], y[i]);
    return encode(x);
  }
  Element sub(Element a, Element b) const {
    auto x = decode(a), y = decode(b);
    for (unsigned i = 0; i < deg_; ++i) x[i] = base_.sub(x[i], y[i]);
    return encode(x);
  }
  Element neg(Element a) const {
    auto x = decode(a);
    for (auto& c : x) c = base_.neg(c);
    return encode(x);
  }
  Element mul(Element a, Element b) const {
    if (a.code == 0 || b.code == 0) return zero();
    auto x = decode(a), y = decode(b);
    poly::trim(x);
    poly::trim(y);
    auto r = poly::rem(base_, poly::mul(base_, x, y), mod_);
    r.resize(deg_, base_.zero());
    return encode(r);
  }
  Element pow(Element a, u64 n) const {
    Element result = one();
    while (n) {
      if (n & 1) result = mul(result, a);
      a = mul(a, a);
      n >>= 1;
    }
    return result;
  }
  Element inv(Element a) const {
    if (a.code == 0) throw Error(Errc::DivisionByZero, "inverse of zero");
    return pow(a, order_ - 2);
  }
  Element div(Element a, Element b) const { return mul(a, inv(b)); }

 private:
  Base base_;
  poly::Poly mod_;
  unsigned deg_ = 1;
  u64 order_ = 0;
};

// F_q with q = p^h, p an odd prime.
class Field {
 public:
  // modulus: little-endian coefficients, either h+1 entries ending in 1 or h
  // entries with the leading 1 implied. Ignored when h == 1.
  static Field build(u64 p, unsigned h = 1, std::optional<std::vector<u64>> modulus = std::nullopt) {
    if (!nt::is_prime(p)) throw Error(Errc::CompositeCharacteristic, std::to_string(p) + " is not prime");
    if (p == 2) throw Error(Errc::EvenCharacteristic, "characteristic 2 is not supported");
    if (h == 0) throw Error(Errc::BadModulus, "extension degree must be >= 1");
    auto q = nt::checked_pow(p, h, kMaxFieldOrder);
    if (!q) throw Error(Errc::OrderTooLarge, "p^h exceeds 2^63");

    Field f;
    f.fp_ = PrimeField(p);
    f.h_ = h;
    f.q_ = *q;
    if (h > 1) {
      poly::Poly mod;
      if (modulus) {
        auto coeffs = *modulus;
        if (coeffs.size() == h) coeffs.push_back(1);
        if (coeffs.size() != h + 1 || coeffs.back() != 1)
          throw Error(Errc::BadModulus, "modulus must be monic of degree h");
        for (u64 c : coeffs) {
          if (c >= p) throw Error(Errc::BadModulus, "modulus coefficient out of range");
          mod.push_back(Element{c});
        }
        if (!poly::is_irreducible(f.fp_, mod)) throw Error(Errc::ReducibleModulus, "modulus is reducible over F_p");
      } else {
        mod = poly::smallest_irreducible(f.fp_, h);
      }
      for (auto c : mod) f.modulus_.push_back(c.code);
      f.ext_.emplace(f.fp_, std::move(mod));
    }
    f.init_constants();
    return f;
  }

  static Field of_order(u64 q) {
    auto pp = nt::prime_power(q);
    if (!pp) throw Error(Errc::NotPrimePower, std::to_string(q) + " is not a prime power");
    return build(pp->p, pp->h);
  }

  u64 p() const { return fp_.order(); }
  unsigned h() const { return h_; }
  u64 q() const { return q_; }
  u64 order() const { return q_; }
  // Little-endian, h+1 entries with the leading 1; empty for prime fields.
  const std::vector<u64>& modulus() const { return modulus_; }

  Element zero() const { return {0}; }
  Element one() const { return {1}; }

  Element element(u64 code) const {
    if (code >= q_) throw Error(Errc::ForeignElement, "code " + std::to_string(code) + " outside [0, q)");
    return {code};
  }
  // Image of an integer under Z -> F_p -> F_q.
  Element from_integer(i64 n) const {
    i64 r = n % static_cast<i64>(p());
    if (r < 0) r += static_cast<i64>(p());
    return {static_cast<u64>(r)};
  }

  std::vector<u64> decode(Element a) const {
    std::vector<u64> out(h_);
    for (unsigned i = 0; i < h_; ++i) {
      out[i] = a.code % p();
      a.code /= p();
    }
    return out;
  }
  Element encode(std::span<const u64> coeffs) const {
    if (coeffs.size() != h_) throw Error(Errc::ForeignElement, "coefficient vector has wrong length");
    u64 code = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
      if (coeffs[i] >= p()) throw Error(Errc::ForeignElement, "coefficient out of range");
      code = code * p() + coeffs[i];
    }
    return {code};
  }

  Element add(Element a, Element b) const { return ext_ ? ext_->add(a, b) : fp_.add(a, b); }
  Element sub(Element a, Element b) const { return ext_ ? ext_->sub(a, b) : fp_.sub(a, b); }
  Element neg(Element a) const { return ext_ ? ext_->neg(a) : fp_.neg(a); }
  Element mul(Element a, Element b) const { return ext_ ? ext_->mul(a, b) : fp_.mul(a, b); }
  Element inv(Element a) const { return ext_ ? ext_->inv(a) : fp_.inv(a); }
  Element div(Element a, Element b) const { return mul(a, inv(b)); }
  Element square(Element a) const { return mul(a, a); }

  Element pow(Element a, u64 n) const { return ext_ ? ext_->pow(a, n) : fp_.pow(a, n); }
  Element pow(Element a, i64 n) const {
    if (n >= 0) return pow(a, static_cast<u64>(n));
    if (a.code == 0) throw Error(Errc::ZeroToNegativePower, "zero raised to a negative power");
    return pow(inv(a), static_cast<u64>(-(n + 1)) + 1);
  }
  Element pow(Element a, int n) const { return pow(a, static_cast<i64>(n)); }
  Element pow(Element a, unsigned n) const { return pow(a, static_cast<u64>(n)); }

  // Quadratic character in {-1, 0, +1}.
  int chi(Element a) const {
    if (a.code == 0) return 0;
    if (!ext_) return fp_.legendre(a);
    return pow(a, (q_ - 1) / 2) == one() ? 1 : -1;
  }
  bool is_square(Element a) const { return chi(a) >= 0; }

  bool is_mth_power(Element a, u64 m) const {
    if (a.code == 0) throw Error(Errc::ZeroInput, "is_mth_power of zero");
    check_divisor(m);
    return pow(a, (q_ - 1) / m) == one();
  }

  Element find_non_mth_power(u64 m) const {
    check_divisor(m);
    if (m == 1) throw Error(Errc::NoSuchElement, "every element is a 1st power");
    for (u64 c = 1; c < q_; ++c) {
      if (!is_mth_power(Element{c}, m)) return {c};
    }
    throw Error(Errc::NoSuchElement, "no non-m-th power found");
  }

  // Generator of F_q^* with the smallest code.
  Element primitive_root() const { return primitive_root_; }
  Element non_square() const { return non_square_; }

  // Tonelli-Shanks; works in any odd-order field given a non-square.
  std::optional<Element> sqrt(Element a) const {
    if (a.code == 0) return zero();
    if (chi(a) != 1) return std::nullopt;
    u64 odd = q_ - 1;
    unsigned s = 0;
    while ((odd & 1) == 0) {
      odd >>= 1;
      ++s;
    }
    Element z = pow(non_square_, odd);
    Element x = pow(a, (odd + 1) / 2);
    Element b = pow(a, odd);
    unsigned r = s;
    while (b != one()) {
      unsigned i = 0;
      Element b2 = b;
      while (b2 != one()) {
        b2 = square(b2);
        ++i;
      }
      Element w = z;
      for (unsigned j = 0; j + i + 1 < r; ++j) w = square(w);
      x = mul(x, w);
      z = square(w);
      b = mul(b, z);
      r = i;
    }
    return x;
  }

  const PrimeField& prime_field() const { return fp_; }
  bool is_prime_field() const { return !ext_.has_value(); }

  friend bool operator==(const Field& a, const Field& b) {
    return a.p() == b.p() && a.h_ == b.h_ && a.modulus_ == b.modulus_;
  }

 private:
  Field() = default;

  void check_divisor(u64 m) const {
    if (m == 0 || (q_ - 1) % m != 0)
      throw Error(Errc::NonDivisorM, std::to_string(m) + " does not divide q-1 = " + std::to_string(q_ - 1));
  }

  void init_constants() {
    const auto primes = nt::prime_divisors(q_ - 1);
    for (u64 c = 1; c < q_; ++c) {
      bool generator = true;
      for (u64 r : primes) {
        if (pow(Element{c}, (q_ - 1) / r) == one()) {
          generator = false;
          break;
        }
      }
      if (generator) {
        primitive_root_ = {c};
        break;
      }
    }
    for (u64 c = 2; c < q_; ++c) {
      if (chi(Element{c}) == -1) {
        non_square_ = {c};
        break;
      }
    }
  }

  PrimeField fp_;
  unsigned h_ = 1;
  u64 q_ = 0;
  std::vector<u64> modulus_;
  std::optional<QuotientField<PrimeField>> ext_;
  Element primitive_root_{1};
  Element non_square_{0};
};

// Montgomery's trick: inverts every nonzero entry in place with a single
// field inversion. Zero entries are left as zero.
template <class F>
void batch_inverse(const F& f, std::span<Element> xs) {
  std::vector<Element> prefix(xs.size());
  Element acc = f.one();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    prefix[i] = acc;
    if (xs[i].code != 0) acc = f.mul(acc, xs[i]);
  }
  Element inv = f.inv(acc);
  for (std::size_t i = xs.size(); i-- > 0;) {
    if (xs[i].code == 0) continue;
    const Element xi = xs[i];
    xs[i] = f.mul(inv, prefix[i]);
    inv = f.mul(inv, xi);
  }
}

// F_{q^e} over a fixed base with basis {1, beta, ..., beta^{e-1}}, beta the
// class of X modulo the smallest monic irreducible of degree e.
template <class Base>
class Extension : public QuotientField<Base> {
 public:
  Extension(Base base, unsigned e)
      : QuotientField<Base>(base, poly::smallest_irreducible(base, e)) {}

  std::vector<Element> coords(Element a) const { return this->decode(a); }

  Element from_coords(std::span<const Element> v) const {
    if (v.size() != this->degree()) throw Error(Errc::ForeignElement, "coordinate vector has wrong length");
    for (auto c : v) {
      if (c.code >= this->base().order()) throw Error(Errc::ForeignElement, "coordinate outside base field");
    }
    return this->encode(v);
  }

  Element embed(Element base_element) const { return base_element; }
};

inline Extension<Field> build_extension(const Field& base, unsigned e) {
  if (e == 0) throw Error(Errc::BadModulus, "extension degree must be >= 1");
  return Extension<Field>(base, e);
}

}  // namespace capforge
