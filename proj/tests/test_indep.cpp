#include <gtest/gtest.h>

#include <set>

#include "capforge/cubic.hpp"
#include "capforge/indep.hpp"
#include "capforge/verify.hpp"

using namespace capforge;
using indep::Strategy;

namespace {

// Direct reading of the definitions, one triple loop per clause.
indep::Flags oracle_flags(u64 m, const std::vector<u64>& M) {
  std::set<u64> in(M.begin(), M.end());
  indep::Flags fl;
  fl.three_independent = true;
  for (u64 a : M)
    for (u64 b : M)
      for (u64 c : M)
        if ((a + b + c) % m == 0) fl.three_independent = false;
  fl.maximal = true;
  bool good = true;
  for (u64 y = 0; y < m; ++y) {
    if (in.count(y)) continue;
    bool any = false, distinct = false;
    for (u64 a : M)
      for (u64 b : M)
        if ((a + b + y) % m == 0) {
          any = true;
          if (a != b) distinct = true;
        }
    if (!any) fl.maximal = false;
    if (!distinct) good = false;
  }
  fl.good = fl.maximal && good;
  return fl;
}

std::vector<u64> members_of(u64 mask, u64 m) {
  std::vector<u64> out;
  for (u64 i = 0; i < m; ++i)
    if (mask >> i & 1) out.push_back(i);
  return out;
}

}  // namespace

TEST(Indep, Examples) {
  const auto v = indep::verify(5, std::vector<u64>{2, 3});
  EXPECT_TRUE(v.flags.three_independent);
  EXPECT_TRUE(v.flags.maximal);
  EXPECT_TRUE(v.uncovered.empty());
  EXPECT_FALSE(v.zero_triple);
  // y = 1 and y = 4 are reached only as 2 + 2 and 3 + 3
  EXPECT_FALSE(v.flags.good);
  EXPECT_EQ(v.only_repeated, (std::vector<u64>{1, 4}));

  const auto all = indep::verify(7, std::vector<u64>{0, 1, 2, 3, 4, 5, 6});
  EXPECT_FALSE(all.flags.three_independent);
  ASSERT_TRUE(all.zero_triple);
  EXPECT_EQ(*all.zero_triple, (std::array<u64, 3>{0, 0, 0}));

  const auto one = indep::verify(5, std::vector<u64>{2});
  EXPECT_TRUE(one.flags.three_independent);
  EXPECT_FALSE(one.flags.maximal);
  EXPECT_EQ(one.uncovered, (std::vector<u64>{0, 3, 4}));
}

TEST(Indep, Errors) {
  try {
    indep::verify(5, std::vector<u64>{5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BadIndex);
  }
  try {
    indep::search(7, 7, Strategy::Exhaustive);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotFound);
  }
  try {
    indep::search(11, 2, Strategy::Exhaustive);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotFound);
  }
}

TEST(Indep, VerifyAgreesWithBruteForce) {
  for (u64 m = 1; m <= 12; ++m)
    for (u64 mask = 0; mask < (1ULL << m); ++mask) {
      const auto M = members_of(mask, m);
      ASSERT_EQ(indep::verify(m, M).flags, oracle_flags(m, M)) << "m=" << m << " mask=" << mask;
    }
}

TEST(Indep, ExhaustiveFindsTheMinimumSize) {
  for (u64 m = 2; m <= 13; ++m) {
    std::optional<std::size_t> best;
    std::vector<u64> first;
    for (u64 mask = 1; mask < (1ULL << m); ++mask) {
      const auto M = members_of(mask, m);
      if (!oracle_flags(m, M).valid()) continue;
      if (!best || M.size() < *best || (M.size() == *best && M < first)) {
        best = M.size();
        first = M;
      }
    }
    if (!best) {
      EXPECT_THROW(indep::search(m, m, Strategy::Exhaustive), Error) << m;
      continue;
    }
    const auto s = indep::search(m, m, Strategy::Exhaustive);
    EXPECT_EQ(s.members, first) << m;
    EXPECT_TRUE(s.flags.valid());
  }
}

// x -> -x and multiplication by units are automorphisms of Z_5; every minimum
// set lies in the orbit of {2, 3}.
TEST(Indep, MinimumInZ5IsUniqueUpToSymmetry) {
  const auto sets = indep::minimum_sets(5, 5);
  ASSERT_FALSE(sets.empty());
  std::set<std::vector<u64>> orbit;
  for (u64 u = 1; u < 5; ++u) orbit.insert({(2 * u) % 5 < (3 * u) % 5 ? (2 * u) % 5 : (3 * u) % 5,
                                            (2 * u) % 5 < (3 * u) % 5 ? (3 * u) % 5 : (2 * u) % 5});
  for (const auto& s : sets) EXPECT_TRUE(orbit.count(s)) << s[0] << "," << s[1];
  EXPECT_EQ(indep::search(5, 5, Strategy::Exhaustive).members, (std::vector<u64>{1, 4}));
}

TEST(Indep, GreedyAndRandomizedReturnVerifiedSets) {
  for (u64 m : {5ULL, 11ULL, 13ULL, 17ULL, 35ULL, 55ULL, 77ULL}) {
    const auto r = indep::search(m, m, Strategy::Randomized, 7, 200);
    EXPECT_TRUE(oracle_flags(m, r.members).valid());
    // a stuck greedy fill need not be maximal; when it is, randomized can only do better
    try {
      const auto g = indep::search(m, m, Strategy::Greedy);
      EXPECT_EQ(g.flags, oracle_flags(m, g.members));
      EXPECT_TRUE(g.flags.valid());
      EXPECT_LE(r.members.size(), g.members.size());
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::NotFound);
    }
    EXPECT_EQ(indep::search(m, m, Strategy::Randomized, 7, 200).members, r.members);
  }
}

TEST(Indep, Crt) {
  for (u64 a = 0; a < 5; ++a)
    for (u64 b = 0; b < 7; ++b) {
      const u64 r = indep::crt(a, b, 5, 7);
      EXPECT_LT(r, 35u);
      EXPECT_EQ(r % 5, a);
      EXPECT_EQ(r % 7, b);
    }
}

TEST(Indep, ProductCandidatesZ35) {
  const auto c = indep::product_candidates(5, 7);
  ASSERT_FALSE(c.empty());
  for (const auto& s : c) {
    EXPECT_EQ(s.m, 35u);
    EXPECT_TRUE(oracle_flags(35, s.members).valid());
    EXPECT_LE(s.members.size(), 12u);
  }
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LE(c[i - 1].members.size(), c[i].members.size());
  EXPECT_TRUE(indep::product_candidates(5, 10).empty());
  EXPECT_TRUE(indep::product_candidates(1, 7).empty());
}

// For every coprime pair with m1 m2 <= 143 and 3 not dividing either factor, something of size
// at most m1 + m2 turns up among the product candidates or the randomized search.
TEST(Indep, SizeBoundForSmallProducts) {
  for (u64 m1 = 2; m1 <= 13; ++m1)
    for (u64 m2 = m1 + 1; m1 * m2 <= 143; ++m2) {
      if (std::gcd(m1, m2) != 1 || m1 % 3 == 0 || m2 % 3 == 0) continue;
      const auto c = indep::product_candidates(m1, m2, 1, 3, 12, 4000);
      std::size_t best = c.empty() ? SIZE_MAX : c.front().members.size();
      if (best > m1 + m2) {
        try {
          best = std::min(best, indep::search(m1 * m2, m1 + m2, Strategy::Randomized, 3, 300).members.size());
        } catch (const Error&) {
        }
      }
      EXPECT_LE(best, m1 + m2) << m1 << "x" << m2;
    }
}

// 3-independence of M is what makes a union of cosets an arc.
TEST(Indep, UnionOfCosetsIsArcIffThreeIndependent) {
  const Field f = Field::build(31);
  const NodalCubic c(f);
  for (u64 mask = 1; mask < 32; ++mask) {
    const auto M = members_of(mask, 5);
    const auto s = c.union_arc(5, M);
    EXPECT_EQ(is_arc(f, s.points).arc, oracle_flags(5, M).three_independent) << mask;
  }
}
