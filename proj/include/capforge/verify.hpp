#pragma once

// Verification engines: bicovering of AG(2,q) by an arc (exhaustive over all
// secants, or sampled per point) and completeness of caps in AG(N,q).

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "capforge/error.hpp"
#include "capforge/field.hpp"
#include "capforge/parallel.hpp"
#include "capforge/plane.hpp"

namespace capforge {

struct VerifyReport {
  bool verdict = false;
  std::string mode = "full";
  std::optional<u64> first_failure;  // dense index
  std::vector<u64> uncovered;        // at most kMaxWitnesses dense indices, ascending
  u64 points_checked = 0;
  u64 external = 0;  // checked points external to some secant
  u64 internal = 0;  // checked points internal to some secant
  u64 both = 0;
  u64 covered = 0;  // on at least one secant
  u64 sample = 0;
  u64 seed = 0;
  u64 set_size = 0;
  unsigned dimension = 2;

  static constexpr std::size_t kMaxWitnesses = 10;
};

struct VerifyOptions {
  u64 full_q_limit = 20000;        // full bicovering needs 2 q^2 bits
  u64 cap_space_limit = 200000000;  // q^N bound for cap completeness
};

namespace detail {

class AtomicBitmap {
 public:
  explicit AtomicBitmap(u64 bits) : words_((bits + 63) / 64, 0) {}

  void set(u64 i) {
    std::atomic_ref<u64> w(words_[i >> 6]);
    w.fetch_or(u64{1} << (i & 63), std::memory_order_relaxed);
  }
  bool test(u64 i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

 private:
  std::vector<u64> words_;
};

inline void require_arc(const Field& f, std::span<const Point2> arc) {
  if (!is_arc(f, arc).arc) throw Error(Errc::NotAnArc, "input is not an arc");
}

// Position class of the point with line parameter s on the secant through the
// parameters 0 and 1: chi(s (s - 1)).
inline std::vector<signed char> parameter_classes(const Field& f) {
  std::vector<signed char> cls(f.q(), 0);
  for (u64 s = 2; s < f.q(); ++s) {
    const Element se{s};
    cls[s] = static_cast<signed char>(f.chi(f.mul(se, f.sub(se, f.one()))));
  }
  return cls;
}

}  // namespace detail

// Per-point coverage of AG(2,q) by the secants of an arc: for each dense
// index, whether the point is external to some secant's segment and whether it
// is internal to some secant's segment.
class CoverageMap {
 public:
  CoverageMap(u64 q, std::vector<Point2> arc) : q_(q), arc_(std::move(arc)), ext_(q * q), in_(q * q), on_(q * q, 0) {}

  u64 q() const { return q_; }
  const std::vector<Point2>& arc() const { return arc_; }
  bool external(u64 idx) const { return ext_.test(idx); }
  bool internal(u64 idx) const { return in_.test(idx); }
  bool on_arc(u64 idx) const { return on_[idx]; }
  bool bicovered(u64 idx) const { return external(idx) && internal(idx); }

 private:
  friend CoverageMap coverage_map(const Field&, std::span<const Point2>, const VerifyOptions&);
  u64 q_;
  std::vector<Point2> arc_;
  detail::AtomicBitmap ext_, in_;
  std::vector<char> on_;
};

// Walks the q-2 third points of every secant and marks their class.
inline CoverageMap coverage_map(const Field& f, std::span<const Point2> input, const VerifyOptions& opt = {}) {
  if (f.q() > opt.full_q_limit)
    throw Error(Errc::TooLarge, "full bicovering check is limited to q <= " + std::to_string(opt.full_q_limit));
  std::vector<Point2> arc(input.begin(), input.end());
  std::sort(arc.begin(), arc.end());
  arc.erase(std::unique(arc.begin(), arc.end()), arc.end());
  detail::require_arc(f, arc);

  const u64 q = f.q();
  const auto cls = detail::parameter_classes(f);
  CoverageMap map(q, arc);
  auto& ext = map.ext_;
  auto& in = map.in_;
  const std::size_t n = arc.size();

  parallel_for(n, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const Point2 p1 = arc[i];
        const Element dx = f.sub(arc[j].x, p1.x), dy = f.sub(arc[j].y, p1.y);
        if (f.is_prime_field()) {
          Element x = f.add(p1.x, f.add(dx, dx)), y = f.add(p1.y, f.add(dy, dy));
          for (u64 s = 2; s < q; ++s) {
            const u64 idx = x.code * q + y.code;
            (cls[s] == 1 ? ext : in).set(idx);
            x = f.add(x, dx);
            y = f.add(y, dy);
          }
        } else {
          for (u64 s = 2; s < q; ++s) {
            const Element se{s};
            const u64 idx = f.add(p1.x, f.mul(se, dx)).code * q + f.add(p1.y, f.mul(se, dy)).code;
            (cls[s] == 1 ? ext : in).set(idx);
          }
        }
      }
    }
  });
  for (auto p : arc) map.on_[dense_index(f, p)] = 1;
  return map;
}

inline VerifyReport report_from(const CoverageMap& map) {
  const u64 total = map.q() * map.q();
  VerifyReport rep;
  rep.mode = "full";
  rep.set_size = map.arc().size();
  for (u64 idx = 0; idx < total; ++idx) {
    if (map.on_arc(idx)) continue;
    ++rep.points_checked;
    const bool e = map.external(idx), i = map.internal(idx);
    rep.external += e;
    rep.internal += i;
    rep.both += e && i;
    rep.covered += e || i;
    if (!(e && i)) {
      if (!rep.first_failure) rep.first_failure = idx;
      if (rep.uncovered.size() < VerifyReport::kMaxWitnesses) rep.uncovered.push_back(idx);
    }
  }
  rep.verdict = rep.both == rep.points_checked;
  return rep;
}

inline VerifyReport verify_bicovering_full(const Field& f, std::span<const Point2> input,
                                           const VerifyOptions& opt = {}) {
  return report_from(coverage_map(f, input, opt));
}

// Draws `sample` uniform points off the arc (seeded mt19937_64, rejection
// sampling) and, for each, buckets the arc by direction from the point; two
// arc points in one bucket span a secant through it.
inline VerifyReport verify_bicovering_sampled(const Field& f, std::span<const Point2> input, u64 sample, u64 seed,
                                              bool check_arc = true) {
  std::vector<Point2> arc(input.begin(), input.end());
  std::sort(arc.begin(), arc.end());
  arc.erase(std::unique(arc.begin(), arc.end()), arc.end());
  if (check_arc) detail::require_arc(f, arc);

  const u64 q = f.q();
  const unsigned __int128 total = static_cast<unsigned __int128>(q) * q;
  std::vector<u64> arc_idx;
  for (auto p : arc) arc_idx.push_back(dense_index(f, p));
  std::sort(arc_idx.begin(), arc_idx.end());
  if (arc_idx.size() >= total) throw Error(Errc::NotFound, "no points off the arc to sample");

  std::mt19937_64 rng(seed);
  const u64 span_max = static_cast<u64>(total - 1);
  const u64 limit = span_max == ~0ULL ? ~0ULL : (~0ULL / (span_max + 1)) * (span_max + 1);
  std::vector<u64> points;
  points.reserve(sample);
  while (points.size() < sample) {
    const u64 r = rng();
    if (r >= limit && limit != ~0ULL) continue;
    const u64 idx = span_max == ~0ULL ? r : r % (span_max + 1);
    if (std::binary_search(arc_idx.begin(), arc_idx.end(), idx)) continue;
    points.push_back(idx);
  }

  struct Outcome {
    bool ext = false, in = false;
  };
  std::vector<Outcome> outcome(points.size());
  const bool dense = q <= (1ULL << 26);
  parallel_for(points.size(), [&](std::size_t begin, std::size_t end, unsigned) {
    std::vector<std::uint32_t> stamp(dense ? q + 1 : 0, 0), owner(dense ? q + 1 : 0, 0);
    std::unordered_map<u64, std::uint32_t> sparse;
    for (std::size_t s = begin; s < end; ++s) {
      const Point2 p = point_at(f, points[s]);
      const auto tag = static_cast<std::uint32_t>(s + 1);
      sparse.clear();
      Outcome& out = outcome[s];
      for (std::size_t k = 0; k < arc.size() && !(out.ext && out.in); ++k) {
        const Point2 a = arc[k];
        const Element dx = f.sub(a.x, p.x);
        const u64 key = dx.code == 0 ? q : f.mul(f.sub(a.y, p.y), f.inv(dx)).code;
        std::optional<std::uint32_t> partner;
        if (dense) {
          if (stamp[key] == tag) partner = owner[key];
          stamp[key] = tag;
          owner[key] = static_cast<std::uint32_t>(k);
        } else {
          auto [it, fresh] = sparse.try_emplace(key, static_cast<std::uint32_t>(k));
          if (!fresh) partner = it->second;
        }
        if (!partner) continue;
        const Point2 b = arc[*partner];
        const bool use_x = a.x != b.x;
        const Element t = use_x ? p.x : p.y, t1 = use_x ? a.x : a.y, t2 = use_x ? b.x : b.y;
        if (f.chi(f.mul(f.sub(t, t1), f.sub(t, t2))) == 1) out.ext = true;
        else out.in = true;
      }
    }
  });

  VerifyReport rep;
  rep.mode = "sampled";
  rep.sample = sample;
  rep.seed = seed;
  rep.set_size = arc.size();
  rep.points_checked = points.size();
  std::vector<u64> failures;
  for (std::size_t s = 0; s < points.size(); ++s) {
    const auto& o = outcome[s];
    rep.external += o.ext;
    rep.internal += o.in;
    rep.both += o.ext && o.in;
    rep.covered += o.ext || o.in;
    if (!(o.ext && o.in)) failures.push_back(points[s]);
  }
  std::sort(failures.begin(), failures.end());
  failures.erase(std::unique(failures.begin(), failures.end()), failures.end());
  if (!failures.empty()) rep.first_failure = failures.front();
  for (std::size_t i = 0; i < failures.size() && i < VerifyReport::kMaxWitnesses; ++i)
    rep.uncovered.push_back(failures[i]);
  rep.verdict = rep.both == rep.points_checked;
  return rep;
}

// Exhaustive completeness: every point of AG(N,q) off the cap must lie on a
// secant of it.
inline VerifyReport verify_complete_cap(const Field& f, std::span<const PointN> input, const VerifyOptions& opt = {}) {
  if (input.empty()) throw Error(Errc::NotACap, "empty point set");
  detail::require_same_dim(input);
  const auto n_dim = static_cast<unsigned>(input.front().dim());
  const auto space = nt::checked_pow(f.q(), n_dim, opt.cap_space_limit);
  if (!space) throw Error(Errc::TooLarge, "q^N exceeds the configured bound " + std::to_string(opt.cap_space_limit));
  std::vector<PointN> cap(input.begin(), input.end());
  std::sort(cap.begin(), cap.end());
  cap.erase(std::unique(cap.begin(), cap.end()), cap.end());
  if (!is_cap(f, cap).cap) throw Error(Errc::NotACap, "input is not a cap");

  const u64 q = f.q(), total = *space;
  std::vector<u64> scale(n_dim, 1);
  for (unsigned c = 1; c < n_dim; ++c) scale[c] = scale[c - 1] * q;
  detail::AtomicBitmap marked(total);
  const std::size_t n = cap.size();

  parallel_for(n, [&](std::size_t begin, std::size_t end, unsigned) {
    std::vector<Element> cur(n_dim), dir(n_dim);
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        for (unsigned c = 0; c < n_dim; ++c) dir[c] = f.sub(cap[j].coords[c], cap[i].coords[c]);
        for (u64 s = 2; s < q; ++s) {
          u64 idx = 0;
          for (unsigned c = 0; c < n_dim; ++c)
            idx += f.add(cap[i].coords[c], f.mul(Element{s}, dir[c])).code * scale[c];
          marked.set(idx);
        }
      }
    }
  });

  std::vector<u64> cap_idx;
  for (const auto& p : cap) cap_idx.push_back(*dense_index(f, p));
  std::sort(cap_idx.begin(), cap_idx.end());
  VerifyReport rep;
  rep.mode = "full";
  rep.dimension = n_dim;
  rep.set_size = n;
  for (u64 idx = 0; idx < total; ++idx) {
    if (std::binary_search(cap_idx.begin(), cap_idx.end(), idx)) continue;
    ++rep.points_checked;
    if (marked.test(idx)) {
      ++rep.covered;
    } else {
      if (!rep.first_failure) rep.first_failure = idx;
      if (rep.uncovered.size() < VerifyReport::kMaxWitnesses) rep.uncovered.push_back(idx);
    }
  }
  rep.verdict = rep.covered == rep.points_checked;
  return rep;
}

// Random greedy complete arcs: points are offered in a seeded random order and
// kept when off every secant of the arc so far.
inline std::vector<Point2> random_complete_arc(const Field& f, u64 seed) {
  const u64 q = f.q(), total = q * q;
  std::vector<u64> order(total);
  std::iota(order.begin(), order.end(), u64{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<char> blocked(total, 0);
  std::vector<Point2> arc;
  for (u64 idx : order) {
    if (blocked[idx]) continue;
    const Point2 p = point_at(f, idx);
    for (auto a : arc) for_each_third_point(f, a, p, [&](Point2 r, Element) { blocked[dense_index(f, r)] = 1; });
    blocked[idx] = 1;
    arc.push_back(p);
  }
  sort_by_dense_index(f, arc);
  return arc;
}

struct ArcSearchResult {
  std::optional<std::vector<Point2>> arc;
  u64 attempts = 0;
};

// Tries seeds seed, seed+1, ... until a complete arc of size <= max_size
// passes the full bicovering check.
inline ArcSearchResult find_bicovering_arc(const Field& f, u64 seed, u64 attempts, std::size_t max_size) {
  ArcSearchResult res;
  for (u64 a = 0; a < attempts; ++a) {
    ++res.attempts;
    auto arc = random_complete_arc(f, seed + a);
    if (arc.size() > max_size) continue;
    if (verify_bicovering_full(f, arc).verdict) {
      res.arc = std::move(arc);
      return res;
    }
  }
  return res;
}

struct ExhaustiveArcSearch {
  std::vector<std::vector<Point2>> found;  // bicovering arcs, in search order
  u64 nodes = 0;                           // arcs visited
  u64 min_deficiency = 0;                  // fewest non-bicovered points seen
  std::vector<Point2> closest;             // an arc attaining it
  std::size_t min_size = 0;                // counting bound used for pruning leaves
  bool complete = true;                    // false when stopped at `limit`
};

// Backtracking over all arcs of size <= max_size through (0,0), (0,1), (1,0).
// Affine maps act transitively on triangles and preserve both collinearity and
// the segment parameter s, so every arc of size >= 3 is equivalent to one
// enumerated here. Arcs shorter than the counting bound
// (k(k-1)/2)(q-2) >= 2(q^2 - k) are never tested.
inline ExhaustiveArcSearch exhaustive_bicovering_search(const Field& f, std::size_t max_size, std::size_t limit = 1) {
  const u64 q = f.q(), total = q * q;
  if (q > 64) throw Error(Errc::TooLarge, "exhaustive arc search is limited to q <= 64");
  ExhaustiveArcSearch res;
  res.min_deficiency = total;
  std::size_t kmin = 3;
  while (kmin * (kmin - 1) / 2 * (q - 2) < 2 * (total - kmin)) ++kmin;
  res.min_size = kmin;
  if (max_size < 3) return res;

  const auto cls = detail::parameter_classes(f);
  std::vector<std::uint16_t> blocked(total, 0), ext(total, 0), in(total, 0);
  std::vector<char> on(total, 0);
  std::vector<u64> arc;

  auto secant = [&](u64 a, u64 b, int d) {
    const Point2 p1 = point_at(f, a), p2 = point_at(f, b);
    for_each_third_point(f, p1, p2, [&](Point2 r, Element s) {
      const u64 k = dense_index(f, r);
      blocked[k] = static_cast<std::uint16_t>(blocked[k] + d);
      auto& c = cls[s.code] == 1 ? ext[k] : in[k];
      c = static_cast<std::uint16_t>(c + d);
    });
  };
  auto push = [&](u64 p) {
    for (u64 a : arc) secant(a, p, +1);
    arc.push_back(p);
    on[p] = 1;
  };
  auto pop = [&] {
    const u64 p = arc.back();
    arc.pop_back();
    on[p] = 0;
    for (u64 a : arc) secant(a, p, -1);
  };
  auto to_points = [&] {
    std::vector<Point2> pts;
    for (u64 a : arc) pts.push_back(point_at(f, a));
    sort_by_dense_index(f, pts);
    return pts;
  };

  push(0);
  push(1);
  push(q);
  auto rec = [&](auto&& self, u64 next) -> bool {
    ++res.nodes;
    if (arc.size() >= kmin) {
      u64 deficiency = 0;
      for (u64 k = 0; k < total; ++k) deficiency += !on[k] && !(ext[k] && in[k]);
      if (deficiency < res.min_deficiency) {
        res.min_deficiency = deficiency;
        res.closest = to_points();
      }
      if (deficiency == 0) {
        res.found.push_back(to_points());
        if (res.found.size() >= limit) return true;
      }
    }
    if (arc.size() >= max_size) return false;
    for (u64 p = next; p < total; ++p) {
      if (on[p] || blocked[p]) continue;
      push(p);
      const bool stop = self(self, p + 1);
      pop();
      if (stop) return true;
    }
    return false;
  };
  if (limit > 0 && rec(rec, 2)) res.complete = false;
  return res;
}

}  // namespace capforge
