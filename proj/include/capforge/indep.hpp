#pragma once

// Maximal 3-independent subsets of the cyclic group Z_m.
//
// M is 3-independent when x1 + x2 + x3 != 0 for all x1, x2, x3 in M
// (repetition allowed), maximal when every y outside M satisfies
// x1 + x2 + y = 0 for some x1, x2 in M, and good when that pair can always be
// taken with x1 != x2.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "capforge/error.hpp"

namespace capforge::indep {

using u64 = std::uint64_t;

struct Flags {
  bool three_independent = false;
  bool maximal = false;
  bool good = false;

  // Both defining clauses hold.
  bool valid() const { return three_independent && maximal; }
  friend bool operator==(const Flags&, const Flags&) = default;
};

struct IndepSet {
  u64 m = 0;
  std::vector<u64> members;
  Flags flags;
};

struct Verification {
  Flags flags;
  std::optional<std::array<u64, 3>> zero_triple;  // clause (a) violation
  std::vector<u64> uncovered;                     // clause (b) violations
  std::vector<u64> only_repeated;                 // covered, but only by x1 == x2
};

inline std::vector<u64> normalize_members(u64 m, std::span<const u64> members) {
  std::vector<u64> out(members.begin(), members.end());
  for (u64 x : out) {
    if (x >= m) throw Error(Errc::BadIndex, "residue " + std::to_string(x) + " outside Z_" + std::to_string(m));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline Verification verify(u64 m, std::span<const u64> input) {
  if (m == 0) throw Error(Errc::BadIndex, "modulus must be positive");
  const auto members = normalize_members(m, input);
  std::vector<char> in(m, 0), any(m, 0), distinct(m, 0);
  for (u64 x : members) in[x] = 1;

  Verification out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i; j < members.size(); ++j) {
      const u64 s = (members[i] + members[j]) % m;
      const u64 y = (m - s) % m;
      any[y] = 1;
      if (i != j) distinct[y] = 1;
      if (in[y] && !out.zero_triple) {
        std::array<u64, 3> t{members[i], members[j], y};
        std::sort(t.begin(), t.end());
        out.zero_triple = t;
      }
    }
  }
  for (u64 y = 0; y < m; ++y) {
    if (in[y]) continue;
    if (!any[y]) out.uncovered.push_back(y);
    else if (!distinct[y]) out.only_repeated.push_back(y);
  }
  out.flags.three_independent = !out.zero_triple.has_value();
  out.flags.maximal = out.uncovered.empty();
  out.flags.good = out.flags.maximal && out.only_repeated.empty();
  return out;
}

inline IndepSet make_verified(u64 m, std::span<const u64> members) {
  IndepSet s{m, normalize_members(m, members), {}};
  s.flags = verify(m, s.members).flags;
  return s;
}

enum class Strategy { Exhaustive, Greedy, Randomized };

namespace detail {

// Incremental 3-independence bookkeeping: pair_neg_[y] counts pairs
// {x1, x2} in the set with x1 + x2 + y = 0.
class Builder {
 public:
  explicit Builder(u64 m) : m_(m), pair_neg_(m, 0) {}

  u64 modulus() const { return m_; }
  const std::vector<u64>& members() const { return members_; }

  bool can_add(u64 x) const {
    if ((3 * (x % m_)) % m_ == 0) return false;
    if (pair_neg_[x]) return false;
    for (u64 s : members_) {
      if ((2 * x + s) % m_ == 0) return false;
    }
    return true;
  }

  void add(u64 x) {
    for (u64 s : members_) ++pair_neg_[(2 * m_ - (x + s) % m_) % m_];
    ++pair_neg_[(m_ - (2 * x) % m_) % m_];
    members_.push_back(x);
  }

  void pop() {
    const u64 x = members_.back();
    members_.pop_back();
    for (u64 s : members_) --pair_neg_[(2 * m_ - (x + s) % m_) % m_];
    --pair_neg_[(m_ - (2 * x) % m_) % m_];
  }

  // Every y outside the set is -(x1 + x2) for some pair.
  bool covers_all() const {
    std::vector<char> in(m_, 0);
    for (u64 x : members_) in[x] = 1;
    for (u64 y = 0; y < m_; ++y) {
      if (!in[y] && !pair_neg_[y]) return false;
    }
    return true;
  }

 private:
  u64 m_;
  std::vector<std::uint32_t> pair_neg_;
  std::vector<u64> members_;
};

inline bool exhaustive_rec(Builder& b, u64 next, std::size_t target) {
  if (b.members().size() == target) return b.covers_all();
  const std::size_t k = b.members().size();
  const std::size_t remaining = target - k;
  for (u64 x = next; x + remaining <= b.modulus(); ++x) {
    if (!b.can_add(x)) continue;
    b.add(x);
    if (exhaustive_rec(b, x + 1, target)) return true;
    b.pop();
  }
  return false;
}

inline std::vector<u64> greedy_fill(u64 m, std::span<const u64> order) {
  Builder b(m);
  for (u64 x : order) {
    if (b.can_add(x)) b.add(x);
  }
  auto out = b.members();
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Exhaustive returns the lexicographically first set of minimum size; the
// other strategies return the smallest verified set they meet. NotFound when
// nothing of size <= max_size turns up.
inline IndepSet search(u64 m, std::size_t max_size, Strategy strategy, u64 seed = 0, std::size_t attempts = 2000) {
  if (m == 0) throw Error(Errc::BadIndex, "modulus must be positive");
  max_size = std::min<std::size_t>(max_size, m);
  if (strategy == Strategy::Exhaustive) {
    for (std::size_t k = 1; k <= max_size; ++k) {
      // a k-set covers at most k + k(k+1)/2 residues
      if (k + k * (k + 1) / 2 < m) continue;
      detail::Builder b(m);
      if (detail::exhaustive_rec(b, 0, k)) return make_verified(m, b.members());
    }
    throw Error(Errc::NotFound, "no maximal 3-independent set of size <= " + std::to_string(max_size) + " in Z_" +
                                    std::to_string(m));
  }

  std::vector<u64> order(m);
  std::iota(order.begin(), order.end(), u64{0});
  std::optional<std::vector<u64>> best;
  auto consider = [&](std::vector<u64> cand) {
    if (cand.size() > max_size) return;
    if (best && (cand.size() > best->size() || (cand.size() == best->size() && cand >= *best))) return;
    if (verify(m, cand).flags.valid()) best = std::move(cand);
  };
  if (strategy == Strategy::Greedy) {
    consider(detail::greedy_fill(m, order));
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t a = 0; a < attempts; ++a) {
      std::shuffle(order.begin(), order.end(), rng);
      consider(detail::greedy_fill(m, order));
    }
  }
  if (!best) {
    throw Error(Errc::NotFound, "no maximal 3-independent set of size <= " + std::to_string(max_size) + " in Z_" +
                                    std::to_string(m));
  }
  return make_verified(m, *best);
}

// Every valid set of minimum size, in lexicographic order.
inline std::vector<std::vector<u64>> minimum_sets(u64 m, std::size_t max_size) {
  const auto first = search(m, max_size, Strategy::Exhaustive);
  const std::size_t k = first.members.size();
  std::vector<std::vector<u64>> out;
  detail::Builder b(m);
  auto rec = [&](auto&& self, u64 next) -> void {
    if (b.members().size() == k) {
      if (b.covers_all()) out.push_back(b.members());
      return;
    }
    const std::size_t remaining = k - b.members().size();
    for (u64 x = next; x + remaining <= m; ++x) {
      if (!b.can_add(x)) continue;
      b.add(x);
      self(self, x + 1);
      b.pop();
    }
  };
  rec(rec, 0);
  return out;
}

// Z_{m1 m2} = Z_{m1} x Z_{m2} via CRT; crt(a, b) is the residue r with
// r = a mod m1 and r = b mod m2.
inline u64 crt(u64 a, u64 b, u64 m1, u64 m2) {
  for (u64 r = a; r < m1 * m2; r += m1) {
    if (r % m2 == b) return r;
  }
  return 0;
}

// Candidates of the shape (A x {b}) u ({a} x B) under CRT, filtered through
// verify. A and B are enumerated exhaustively while 2^(m1+m2) <= 2^exhaustive_bits,
// otherwise drawn at random (seeded) for `samples` rounds. Results are sorted
// by size, then lexicographically, and deduplicated.
inline std::vector<IndepSet> product_candidates(u64 m1, u64 m2, std::size_t limit = 16, u64 seed = 0,
                                                unsigned exhaustive_bits = 12, std::size_t samples = 200000) {
  std::vector<IndepSet> out;
  if (m1 <= 1 || m2 <= 1 || std::gcd(m1, m2) != 1) return out;
  const u64 m = m1 * m2;
  std::vector<std::vector<u64>> found;

  auto try_shape = [&](u64 maskA, u64 maskB, u64 a, u64 b) {
    std::vector<u64> cand;
    for (u64 x = 0; x < m1; ++x)
      if (maskA >> x & 1) cand.push_back(crt(x, b, m1, m2));
    for (u64 y = 0; y < m2; ++y)
      if (maskB >> y & 1) cand.push_back(crt(a, y, m1, m2));
    cand = normalize_members(m, cand);
    if (cand.empty()) return;
    if (verify(m, cand).flags.valid()) found.push_back(std::move(cand));
  };

  if (m1 + m2 <= exhaustive_bits) {
    for (u64 a = 0; a < m1; ++a)
      for (u64 b = 0; b < m2; ++b)
        for (u64 maskA = 0; maskA < (1ULL << m1); ++maskA)
          for (u64 maskB = 0; maskB < (1ULL << m2); ++maskB) try_shape(maskA, maskB, a, b);
  } else if (m1 < 64 && m2 < 64) {
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
      const u64 a = rng() % m1, b = rng() % m2;
      const u64 maskA = rng() & ((1ULL << m1) - 1), maskB = rng() & ((1ULL << m2) - 1);
      try_shape(maskA, maskB, a, b);
    }
  }
  std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  found.erase(std::unique(found.begin(), found.end()), found.end());
  for (auto& f : found) {
    if (out.size() >= limit) break;
    out.push_back(make_verified(m, f));
  }
  return out;
}

}  // namespace capforge::indep
