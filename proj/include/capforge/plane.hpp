#pragma once

// Affine geometry over F_q: points of AG(2,q) and AG(N,q), collinearity,
// Segre's external/internal position on a line, and arc / cap predicates.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "capforge/error.hpp"
#include "capforge/field.hpp"
#include "capforge/parallel.hpp"

namespace capforge {

struct Point2 {
  Element x, y;

  friend constexpr bool operator==(Point2, Point2) = default;
  friend constexpr auto operator<=>(Point2, Point2) = default;
};

struct PointN {
  std::vector<Element> coords;

  std::size_t dim() const { return coords.size(); }
  friend bool operator==(const PointN&, const PointN&) = default;
  friend auto operator<=>(const PointN&, const PointN&) = default;
};

enum class SegmentPosition { External, Internal };

inline const char* to_string(SegmentPosition s) { return s == SegmentPosition::External ? "External" : "Internal"; }

inline u64 dense_index(const Field& f, Point2 p) { return p.x.code * f.q() + p.y.code; }

inline void sort_by_dense_index(const Field& f, std::vector<Point2>& pts) {
  std::sort(pts.begin(), pts.end(), [&](Point2 a, Point2 b) { return dense_index(f, a) < dense_index(f, b); });
}

inline Point2 point_at(const Field& f, u64 index) { return {Element{index / f.q()}, Element{index % f.q()}}; }

// sum coords[i] * q^i; nullopt when it does not fit in 64 bits.
inline std::optional<u64> dense_index(const Field& f, const PointN& p) {
  unsigned __int128 idx = 0, scale = 1;
  for (auto c : p.coords) {
    idx += scale * c.code;
    scale *= f.q();
    if (idx > std::numeric_limits<u64>::max()) return std::nullopt;
    if (scale > std::numeric_limits<u64>::max()) scale = static_cast<unsigned __int128>(std::numeric_limits<u64>::max()) + 1;
  }
  return static_cast<u64>(idx);
}

inline PointN point_at(const Field& f, u64 index, std::size_t n) {
  PointN p;
  p.coords.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.coords[i] = Element{index % f.q()};
    index /= f.q();
  }
  return p;
}

namespace detail {

inline void require_distinct(Point2 a, Point2 b, Point2 c) {
  if (a == b || a == c || b == c) throw Error(Errc::DuplicatePoints, "points must be pairwise distinct");
}

// (b - a) x (c - a), zero iff the three points are on a line.
inline Element cross(const Field& f, Point2 a, Point2 b, Point2 c) {
  return f.sub(f.mul(f.sub(b.x, a.x), f.sub(c.y, a.y)), f.mul(f.sub(b.y, a.y), f.sub(c.x, a.x)));
}

}  // namespace detail

inline bool collinear3(const Field& f, Point2 a, Point2 b, Point2 c) {
  detail::require_distinct(a, b, c);
  return detail::cross(f, a, b, c).code == 0;
}

// Position of p relative to the segment p1 p2 on their common line, read off
// the X-coordinate when p1.x != p2.x and the Y-coordinate otherwise.
inline SegmentPosition segment_position(const Field& f, Point2 p, Point2 p1, Point2 p2) {
  detail::require_distinct(p, p1, p2);
  if (detail::cross(f, p, p1, p2).code != 0) throw Error(Errc::NotCollinear, "point is not on the line p1 p2");
  const bool use_x = p1.x != p2.x;
  const Element x = use_x ? p.x : p.y;
  const Element x1 = use_x ? p1.x : p1.y;
  const Element x2 = use_x ? p2.x : p2.y;
  return f.chi(f.mul(f.sub(x, x1), f.sub(x, x2))) == 1 ? SegmentPosition::External : SegmentPosition::Internal;
}

// Calls fn(point, s) for p1 + s (p2 - p1), s running over the codes 2..q-1.
template <class Fn>
void for_each_third_point(const Field& f, Point2 p1, Point2 p2, Fn&& fn) {
  if (p1 == p2) throw Error(Errc::DuplicatePoints, "a line needs two distinct points");
  const Element dx = f.sub(p2.x, p1.x), dy = f.sub(p2.y, p1.y);
  for (u64 s = 2; s < f.q(); ++s) {
    const Element se{s};
    fn(Point2{f.add(p1.x, f.mul(se, dx)), f.add(p1.y, f.mul(se, dy))}, se);
  }
}

inline std::vector<Point2> line_third_points(const Field& f, Point2 p1, Point2 p2) {
  std::vector<Point2> out;
  out.reserve(f.q() - 2);
  for_each_third_point(f, p1, p2, [&](Point2 p, Element) { out.push_back(p); });
  return out;
}

struct ArcCheck {
  bool arc = true;
  std::optional<std::array<Point2, 3>> witness;
};

// Slope bucketing per anchor: with points ordered, anchor i only looks at
// j > i, so the first anchor holding a collision is the smallest index of
// any collinear triple.
inline ArcCheck is_arc(const Field& f, std::span<const Point2> input) {
  std::vector<Point2> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return {};

  const u64 q = f.q();
  const u64 infinity = q;
  const bool dense = q <= (1ULL << 24);
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> best(thread_count(), kNone);
  std::vector<std::array<std::size_t, 3>> found(best.size());

  parallel_for(n, [&](std::size_t begin, std::size_t end, unsigned worker) {
    std::vector<std::uint32_t> stamp(dense ? q + 1 : 0, 0);
    std::vector<std::uint32_t> owner(dense ? q + 1 : 0, 0);
    std::vector<Element> dx, slope;
    std::vector<std::pair<u64, std::size_t>> sorted;
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t count = n - i - 1;
      dx.resize(count);
      slope.resize(count);
      for (std::size_t k = 0; k < count; ++k) dx[k] = f.sub(pts[i + 1 + k].x, pts[i].x);
      batch_inverse(f, std::span<Element>(dx));
      const auto tag = static_cast<std::uint32_t>(i + 1);
      sorted.clear();
      for (std::size_t k = 0; k < count; ++k) {
        const std::size_t j = i + 1 + k;
        const u64 key = pts[j].x == pts[i].x ? infinity : f.mul(f.sub(pts[j].y, pts[i].y), dx[k]).code;
        if (dense) {
          if (stamp[key] == tag) {
            found[worker] = {i, owner[key], j};
            best[worker] = i;
            return;
          }
          stamp[key] = tag;
          owner[key] = static_cast<std::uint32_t>(j);
        } else {
          sorted.emplace_back(key, j);
        }
      }
      if (!dense) {
        std::sort(sorted.begin(), sorted.end());
        std::optional<std::array<std::size_t, 3>> hit;
        for (std::size_t k = 1; k < sorted.size(); ++k) {
          if (sorted[k].first == sorted[k - 1].first) {
            std::array<std::size_t, 3> cand{i, sorted[k - 1].second, sorted[k].second};
            if (!hit || cand < *hit) hit = cand;
          }
        }
        if (hit) {
          found[worker] = *hit;
          best[worker] = i;
          return;
        }
      }
    }
  });

  std::size_t w = std::min_element(best.begin(), best.end()) - best.begin();
  if (best[w] == kNone) return {};
  const auto [i, j, k] = found[w];
  return ArcCheck{false, std::array<Point2, 3>{pts[i], pts[j], pts[k]}};
}

namespace detail {

inline void require_same_dim(std::span<const PointN> pts) {
  for (const auto& p : pts) {
    if (p.dim() != pts.front().dim()) throw Error(Errc::MixedDimensions, "points of different dimensions");
  }
}

// Scales d so that its first nonzero coordinate is 1.
inline std::vector<Element> normalize_direction(const Field& f, std::vector<Element> d) {
  auto lead = std::find_if(d.begin(), d.end(), [](Element e) { return e.code != 0; });
  if (lead == d.end()) return d;
  const Element s = f.inv(*lead);
  for (auto& c : d) c = f.mul(c, s);
  return d;
}

}  // namespace detail

// b - a parallel to c - a in AG(N,q).
inline bool collinear3(const Field& f, const PointN& a, const PointN& b, const PointN& c) {
  if (a.dim() != b.dim() || a.dim() != c.dim()) throw Error(Errc::MixedDimensions, "points of different dimensions");
  if (a == b || a == c || b == c) throw Error(Errc::DuplicatePoints, "points must be pairwise distinct");
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Element u1 = f.sub(b.coords[i], a.coords[i]), u2 = f.sub(b.coords[j], a.coords[j]);
      const Element v1 = f.sub(c.coords[i], a.coords[i]), v2 = f.sub(c.coords[j], a.coords[j]);
      if (f.sub(f.mul(u1, v2), f.mul(u2, v1)).code != 0) return false;
    }
  }
  return true;
}

struct CapCheck {
  bool cap = true;
  std::optional<std::array<PointN, 3>> witness;
};

inline CapCheck is_cap(const Field& f, std::span<const PointN> input) {
  if (input.empty()) return {};
  detail::require_same_dim(input);
  std::vector<PointN> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return {};

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> best(thread_count(), kNone);
  std::vector<std::array<std::size_t, 3>> found(best.size());

  parallel_for(n, [&](std::size_t begin, std::size_t end, unsigned worker) {
    std::vector<std::pair<std::vector<Element>, std::size_t>> dirs;
    for (std::size_t i = begin; i < end; ++i) {
      dirs.clear();
      for (std::size_t j = i + 1; j < n; ++j) {
        std::vector<Element> d(pts[i].dim());
        for (std::size_t c = 0; c < d.size(); ++c) d[c] = f.sub(pts[j].coords[c], pts[i].coords[c]);
        dirs.emplace_back(detail::normalize_direction(f, std::move(d)), j);
      }
      std::sort(dirs.begin(), dirs.end());
      for (std::size_t k = 1; k < dirs.size(); ++k) {
        if (dirs[k].first == dirs[k - 1].first) {
          found[worker] = {i, dirs[k - 1].second, dirs[k].second};
          best[worker] = i;
          return;
        }
      }
    }
  });

  std::size_t w = std::min_element(best.begin(), best.end()) - best.begin();
  if (best[w] == kNone) return {};
  const auto [i, j, k] = found[w];
  return CapCheck{false, std::array<PointN, 3>{pts[i], pts[j], pts[k]}};
}

}  // namespace capforge
