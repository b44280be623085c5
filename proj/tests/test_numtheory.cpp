#include <gtest/gtest.h>

#include <random>

#include "capforge/numtheory.hpp"
#include "oracles.hpp"

using namespace capforge;
using nt::u64;

TEST(NumTheory, PrimalityMatchesTrialDivision) {
  for (u64 n = 0; n < 20000; ++n) ASSERT_EQ(nt::is_prime(n), oracle::is_prime(static_cast<oracle::i64>(n))) << n;
}

TEST(NumTheory, PrimalityOnPseudoprimesAndLargePrimes) {
  // Carmichael numbers, then strong pseudoprimes to several small bases.
  for (u64 n : {561ULL, 1105ULL, 41041ULL, 825265ULL}) EXPECT_FALSE(nt::is_prime(n)) << n;
  EXPECT_FALSE(nt::is_prime(3215031751ULL));
  EXPECT_FALSE(nt::is_prime(3825123056546413051ULL));
  EXPECT_TRUE(nt::is_prime((1ULL << 61) - 1));
  EXPECT_TRUE(nt::is_prime(93811));
  EXPECT_TRUE(nt::is_prime(1000003));
  EXPECT_TRUE(nt::is_prime(18446744073709551557ULL));  // largest prime below 2^64
}

TEST(NumTheory, FactorReassembles) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const u64 n = (rng() >> 2) | 1;
    u64 prod = 1;
    for (auto [p, e] : nt::factor(n)) {
      EXPECT_TRUE(nt::is_prime(p));
      for (unsigned k = 0; k < e; ++k) prod *= p;
    }
    EXPECT_EQ(prod, n);
  }
}

TEST(NumTheory, DivisorsMatchBruteForce) {
  for (u64 n = 1; n < 3000; ++n) {
    std::vector<u64> expect;
    for (u64 d = 1; d <= n; ++d)
      if (n % d == 0) expect.push_back(d);
    ASSERT_EQ(nt::divisors(n), expect) << n;
  }
}

TEST(NumTheory, PrimePowers) {
  ASSERT_TRUE(nt::prime_power(25));
  EXPECT_EQ(nt::prime_power(25)->p, 5u);
  EXPECT_EQ(nt::prime_power(25)->h, 2u);
  EXPECT_EQ(nt::prime_power(93811)->h, 1u);
  EXPECT_EQ(nt::prime_power(2187)->h, 7u);
  EXPECT_FALSE(nt::prime_power(1));
  EXPECT_FALSE(nt::prime_power(12));
  EXPECT_FALSE(nt::prime_power(93810));
}

TEST(NumTheory, IntegerSquareRoot) {
  for (u64 n = 0; n < 100000; ++n) {
    const u64 r = nt::isqrt(n);
    ASSERT_LE(r * r, n);
    ASSERT_GT((r + 1) * (r + 1), n);
  }
  const u64 big = ~0ULL;
  const u64 r = nt::isqrt(big);
  EXPECT_EQ(r, 4294967295ULL);
}

TEST(NumTheory, CheckedPow) {
  EXPECT_EQ(nt::checked_pow(7, 3), 343u);
  EXPECT_FALSE(nt::checked_pow(3, 40, 1ULL << 63));
  EXPECT_EQ(nt::checked_pow(2, 62, 1ULL << 63), 1ULL << 62);
}
