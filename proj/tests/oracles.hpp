#pragma once

// Brute-force reference implementations used as test oracles. They work on
// plain integers mod a prime wherever possible so they share no code with the
// library's field arithmetic.

#include <array>
#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

using i64 = std::int64_t;

inline i64 mod(i64 a, i64 p) { return ((a % p) + p) % p; }

inline i64 pw(i64 a, i64 e, i64 p) {
  i64 r = 1;
  a = mod(a, p);
  while (e) {
    if (e & 1) r = static_cast<i64>(static_cast<__int128>(r) * a % p);
    a = static_cast<i64>(static_cast<__int128>(a) * a % p);
    e >>= 1;
  }
  return r;
}

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline i64 inv(i64 a, i64 p) { return pw(a, p - 2, p); }

// Squares mod p by squaring every element.
inline std::set<i64> squares(i64 p) {
  std::set<i64> s;
  for (i64 x = 1; x < p; ++x) s.insert(x * x % p);
  return s;
}

// 3x3 determinant of homogenized rows (x_i, y_i, 1), mod p.
inline i64 det3(std::array<i64, 2> a, std::array<i64, 2> b, std::array<i64, 2> c, i64 p) {
  const i64 d = a[0] * (b[1] - c[1]) - a[1] * (b[0] - c[0]) + (b[0] * c[1] - b[1] * c[0]);
  return mod(d, p);
}

}  // namespace oracle
