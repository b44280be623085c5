#pragma once

// Lifting a plane arc A to C_A = {(alpha, alpha^2, u, v)} in AG(N,q), with
// alpha in F_{q'}, q' = q^{(N-2)/2}, written in coordinates over the fixed
// basis of F_{q'}; and the parity-check export of a cap.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "capforge/cubic.hpp"
#include "capforge/error.hpp"
#include "capforge/field.hpp"
#include "capforge/parallel.hpp"
#include "capforge/plane.hpp"

namespace capforge {

struct LiftedCap {
  unsigned N = 0;
  ArcSet arc;
  Extension<Field> ext;
  std::vector<PointN> points;

  u64 qprime() const { return ext.order(); }
};

// FNV-1a over q and the dense indices of the arc, sorted.
inline u64 arc_hash(const Field& f, std::span<const Point2> pts) {
  std::vector<u64> idx;
  idx.reserve(pts.size());
  for (auto p : pts) idx.push_back(dense_index(f, p));
  std::sort(idx.begin(), idx.end());
  u64 h = 0xcbf29ce484222325ULL;
  auto mix = [&](u64 v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(f.q());
  for (u64 i : idx) mix(i);
  return h;
}

inline LiftedCap lift_arc(const ArcSet& arc, unsigned N) {
  if (N < 4 || N % 4 != 0) throw Error(Errc::BadDimension, "N must be a positive multiple of 4");
  const Field& f = arc.field;
  if (!is_arc(f, arc.points).arc) throw Error(Errc::NotAnArc, "input is not an arc");
  const unsigned e = (N - 2) / 2;
  LiftedCap cap{N, arc, build_extension(f, e), {}};
  cap.arc.points.erase(std::unique(cap.arc.points.begin(), cap.arc.points.end()), cap.arc.points.end());
  const auto& ext = cap.ext;
  const auto& pts = cap.arc.points;
  const u64 qp = ext.order();
  cap.points.resize(qp * pts.size());

  parallel_for(qp, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t a = begin; a < end; ++a) {
      const Element alpha{a};
      const auto c1 = ext.coords(alpha);
      const auto c2 = ext.coords(ext.mul(alpha, alpha));
      for (std::size_t k = 0; k < pts.size(); ++k) {
        auto& out = cap.points[a * pts.size() + k].coords;
        out.reserve(N);
        out.insert(out.end(), c1.begin(), c1.end());
        out.insert(out.end(), c2.begin(), c2.end());
        out.push_back(pts[k].x);
        out.push_back(pts[k].y);
      }
    }
  });
  return cap;
}

inline LiftedCap lift_arc(const Field& f, std::span<const Point2> pts, unsigned N) {
  return lift_arc(ArcSet{f, 0, {}, f.primitive_root(), {pts.begin(), pts.end()}}, N);
}

// Columns (1, x_1, ..., x_N): the cap embedded in PG(N,q) by its affine chart.
struct ParityCheckMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<u64> entries;  // column-major codes

  u64 at(std::size_t r, std::size_t c) const { return entries[c * rows + r]; }

  struct Parameters {
    u64 length = 0, dimension = 0, distance = 4;
  };
  // [k, k - N - 1, 4]; dimension is 0 when k <= N + 1.
  Parameters parameters() const {
    const u64 k = cols, r = rows;
    return {k, k > r ? k - r : 0, 4};
  }
};

inline ParityCheckMatrix export_parity_check(const Field& f, std::span<const PointN> cap, std::size_t N) {
  ParityCheckMatrix H;
  H.rows = N + 1;
  H.cols = cap.size();
  if (cap.empty()) return H;
  detail::require_same_dim(cap);
  if (cap.front().dim() != N) throw Error(Errc::MixedDimensions, "points do not live in AG(N,q)");
  if (!is_cap(f, cap).cap) throw Error(Errc::NotACap, "input is not a cap");
  std::vector<PointN> sorted(cap.begin(), cap.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(Errc::NotACap, "repeated point");
  H.entries.reserve(H.rows * H.cols);
  for (const auto& p : cap) {
    H.entries.push_back(1);
    for (auto c : p.coords) H.entries.push_back(c.code);
  }
  return H;
}

inline ParityCheckMatrix export_parity_check(const LiftedCap& c) {
  return export_parity_check(c.arc.field, c.points, c.N);
}

// Inverse of the export: the first row must be all ones.
inline std::vector<PointN> decode_columns(const Field& f, const ParityCheckMatrix& H) {
  if (H.rows == 0 || H.entries.size() != H.rows * H.cols)
    throw Error(Errc::MalformedInput, "matrix shape does not match its entries");
  std::vector<PointN> out(H.cols);
  for (std::size_t c = 0; c < H.cols; ++c) {
    if (H.at(0, c) != 1) throw Error(Errc::MalformedInput, "column is not affinely normalized");
    for (std::size_t r = 1; r < H.rows; ++r) out[c].coords.push_back(f.element(H.at(r, c)));
  }
  return out;
}

namespace detail {

// Rank of the rows x 3 submatrix on columns a, b, c, by elimination.
inline unsigned triple_rank(const Field& f, const ParityCheckMatrix& H, std::array<std::size_t, 3> idx) {
  std::vector<std::array<Element, 3>> m(H.rows);
  for (std::size_t r = 0; r < H.rows; ++r)
    for (int k = 0; k < 3; ++k) m[r][k] = Element{H.at(r, idx[k])};
  unsigned rank = 0;
  for (int col = 0; col < 3 && rank < H.rows; ++col) {
    std::size_t piv = rank;
    while (piv < H.rows && m[piv][col].code == 0) ++piv;
    if (piv == H.rows) continue;
    std::swap(m[piv], m[rank]);
    const Element inv = f.inv(m[rank][col]);
    for (std::size_t r = rank + 1; r < H.rows; ++r) {
      if (m[r][col].code == 0) continue;
      const Element factor = f.mul(m[r][col], inv);
      for (int k = col; k < 3; ++k) m[r][k] = f.sub(m[r][k], f.mul(factor, m[rank][k]));
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

struct DistanceCheck {
  bool ok = true;  // no three columns linearly dependent
  std::optional<std::array<std::size_t, 3>> witness;
};

// Exhaustive over column triples in lexicographic order, stopping at the first
// dependent one.
inline DistanceCheck check_distance_ge4(const Field& f, const ParityCheckMatrix& H) {
  for (std::size_t a = 0; a < H.cols; ++a)
    for (std::size_t b = a + 1; b < H.cols; ++b)
      for (std::size_t c = b + 1; c < H.cols; ++c)
        if (detail::triple_rank(f, H, {a, b, c}) < 3) return {false, std::array<std::size_t, 3>{a, b, c}};
  return {};
}

}  // namespace capforge
