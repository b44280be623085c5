#pragma once

// The auxiliary family
//   f(X,Y) = a(t^3 X^2m Y^m + t^3 X^m Y^2m - 3t^2 X^m Y^m + 1) - b t^2 X^m Y^m
//            - t^4 X^2m Y^2m + 3t^2 X^m Y^m - t X^m - t Y^m
// whose rational points (x, y) with x^m != y^m are exactly the secants of the
// coset K_t through P = (a, b), and its quartic shadow g(X,Y) = f with X^m, Y^m
// replaced by X, Y. Since f only sees x^m and y^m, every search here runs
// over values u = x^m and solves g(u, Z) = 0 as a quadratic in Z.

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "capforge/cubic.hpp"
#include "capforge/error.hpp"
#include "capforge/field.hpp"
#include "capforge/plane.hpp"

namespace capforge::aux {

struct CurveParams {
  Element a, b, t;
  u64 m = 1;
};

// g_P(X, Y) for P = (a, b).
inline Element eval_quartic(const Field& f, Element a, Element b, Element t, Element X, Element Y) {
  const Element t2 = f.square(t), t3 = f.mul(t2, t), t4 = f.square(t2);
  const Element xy = f.mul(X, Y);
  const Element three = f.from_integer(3);
  Element inner = f.add(f.mul(t3, f.mul(xy, f.add(X, Y))), f.one());
  inner = f.sub(inner, f.mul(three, f.mul(t2, xy)));
  Element r = f.mul(a, inner);
  r = f.sub(r, f.mul(b, f.mul(t2, xy)));
  r = f.sub(r, f.mul(t4, f.square(xy)));
  r = f.add(r, f.mul(three, f.mul(t2, xy)));
  r = f.sub(r, f.mul(t, f.add(X, Y)));
  return r;
}

inline Element eval_f(const Field& f, const CurveParams& cp, Element x, Element y) {
  return eval_quartic(f, cp.a, cp.b, cp.t, f.pow(x, cp.m), f.pow(y, cp.m));
}

// Coefficients of g(X, Y) = c2 Y^2 + c1 Y + c0 for fixed X.
struct QuadraticInY {
  Element c2, c1, c0;
};

inline QuadraticInY quartic_in_y(const Field& f, Element a, Element b, Element t, Element X) {
  const Element t2 = f.square(t), t3 = f.mul(t2, t), t4 = f.square(t2);
  const Element three = f.from_integer(3);
  QuadraticInY c;
  c.c2 = f.sub(f.mul(f.mul(a, t3), X), f.mul(t4, f.square(X)));
  // a t^3 X^2 - 3a t^2 X - b t^2 X + 3 t^2 X - t
  Element c1 = f.mul(f.mul(a, t3), f.square(X));
  c1 = f.sub(c1, f.mul(f.mul(three, a), f.mul(t2, X)));
  c1 = f.sub(c1, f.mul(b, f.mul(t2, X)));
  c1 = f.add(c1, f.mul(three, f.mul(t2, X)));
  c.c1 = f.sub(c1, t);
  c.c0 = f.sub(a, f.mul(t, X));
  return c;
}

// Roots of c2 Z^2 + c1 Z + c0 in F_q; nullopt when the polynomial vanishes
// identically.
inline std::optional<std::vector<Element>> quadratic_roots(const Field& f, const QuadraticInY& c) {
  if (c.c2.code == 0) {
    if (c.c1.code == 0) {
      if (c.c0.code == 0) return std::nullopt;
      return std::vector<Element>{};
    }
    return std::vector<Element>{f.neg(f.div(c.c0, c.c1))};
  }
  const Element disc = f.sub(f.square(c.c1), f.mul(f.from_integer(4), f.mul(c.c2, c.c0)));
  const auto s = f.sqrt(disc);
  if (!s) return std::vector<Element>{};
  const Element inv2a = f.inv(f.add(c.c2, c.c2));
  const Element r1 = f.mul(f.sub(*s, c.c1), inv2a);
  if (s->code == 0) return std::vector<Element>{r1};
  const Element r2 = f.mul(f.sub(f.neg(*s), c.c1), inv2a);
  return std::vector<Element>{std::min(r1, r2), std::max(r1, r2)};
}

inline bool on_cubic(const Field& f, Element a, Element b) {
  const Element am1 = f.sub(a, f.one());
  return f.mul(a, b) == f.mul(f.square(am1), am1);
}

// t != 0, m | q-1, gcd(m, 6) = 1, t not an m-th power; optionally P off the cubic.
inline void validate(const Field& f, const CurveParams& cp, bool require_off_cubic) {
  if (cp.t.code == 0) throw Error(Errc::PreconditionNotMet, "t must be nonzero");
  if (cp.m == 0 || (f.q() - 1) % cp.m != 0) throw Error(Errc::NonDivisorM, "m must divide q-1");
  if (std::gcd(cp.m, u64{6}) != 1) throw Error(Errc::BadGcd, "m must be coprime to 6");
  if (f.is_mth_power(cp.t, cp.m)) throw Error(Errc::PreconditionNotMet, "t must not be an m-th power");
  if (require_off_cubic && on_cubic(f, cp.a, cp.b)) throw Error(Errc::OnCubicPoint, "P = (a, b) lies on the cubic");
}

struct FactorReport {
  bool holds = true;
  u64 checked = 0;
  std::optional<std::array<Element, 2>> mismatch;
};

// When a^3 = -1 and b = 1 - (a-1)^3, f splits as
//   -(a^2 + t^2 X^m Y^m - a t Y^m)(a^2 + t^2 X^m Y^m - a t X^m).
// Checks every (x, y) in F_q^2, or the first max_points in code order.
inline FactorReport special_factor_check(const Field& f, const CurveParams& cp, u64 max_points = 1ULL << 24) {
  const Element am1 = f.sub(cp.a, f.one());
  const bool cube_ok = f.mul(f.square(cp.a), cp.a) == f.neg(f.one());
  const bool b_ok = cp.b == f.sub(f.one(), f.mul(f.square(am1), am1));
  if (!cube_ok || !b_ok) throw Error(Errc::PreconditionNotMet, "needs a^3 = -1 and b = 1 - (a-1)^3");
  FactorReport rep;
  const Element a2 = f.square(cp.a), t2 = f.square(cp.t), at = f.mul(cp.a, cp.t);
  const u64 q = f.q();
  for (u64 xi = 0; xi < q && rep.checked < max_points; ++xi) {
    const Element xm = f.pow(Element{xi}, cp.m);
    for (u64 yi = 0; yi < q && rep.checked < max_points; ++yi) {
      const Element ym = f.pow(Element{yi}, cp.m);
      const Element common = f.add(a2, f.mul(t2, f.mul(xm, ym)));
      const Element rhs = f.neg(f.mul(f.sub(common, f.mul(at, ym)), f.sub(common, f.mul(at, xm))));
      ++rep.checked;
      if (eval_f(f, cp, Element{xi}, Element{yi}) != rhs) {
        rep.holds = false;
        rep.mismatch = std::array<Element, 2>{Element{xi}, Element{yi}};
        return rep;
      }
    }
  }
  return rep;
}

// x -> x^m tables: multiplicity of each value and the smallest preimage.
struct PowerTable {
  std::vector<std::uint32_t> count;
  std::vector<Element> smallest;  // code q marks "no preimage"
  std::vector<Element> values;    // distinct values, ascending

  PowerTable(const Field& f, u64 m) : count(f.q(), 0), smallest(f.q(), Element{f.q()}) {
    for (u64 x = 0; x < f.q(); ++x) {
      const Element v = f.pow(Element{x}, m);
      if (count[v.code]++ == 0) smallest[v.code] = Element{x};
    }
    for (u64 v = 0; v < f.q(); ++v)
      if (count[v]) values.push_back(Element{v});
  }
};

// Affine points of f = 0, i.e. #{(x, y) in F_q^2 : f(x, y) = 0}.
inline u64 count_curve_points(const Field& f, const CurveParams& cp) {
  const PowerTable tab(f, cp.m);
  u64 total = 0;
  for (Element u : tab.values) {
    const auto roots = quadratic_roots(f, quartic_in_y(f, cp.a, cp.b, cp.t, u));
    u64 per_u = 0;
    if (!roots) {
      per_u = f.q();
    } else {
      for (Element z : *roots) per_u += tab.count[z.code];
    }
    total += tab.count[u.code] * per_u;
  }
  return total;
}

// Affine points of the quartic g_P = 0, counted per X-line by the quadratic
// character of the discriminant.
inline u64 count_quartic_points(const Field& f, Element a, Element b, Element t) {
  if (on_cubic(f, a, b)) throw Error(Errc::OnCubicPoint, "P = (a, b) lies on the cubic");
  const Element four = f.from_integer(4);
  u64 total = 0;
  for (u64 xi = 0; xi < f.q(); ++xi) {
    const auto c = quartic_in_y(f, a, b, t, Element{xi});
    if (c.c2.code != 0) {
      total += static_cast<u64>(1 + f.chi(f.sub(f.square(c.c1), f.mul(four, f.mul(c.c2, c.c0)))));
    } else if (c.c1.code != 0) {
      total += 1;
    } else if (c.c0.code == 0) {
      total += f.q();
    }
  }
  return total;
}

// |count - (q + 1)| <= 2 g sqrt(q) + slack, decided in integers.
inline bool within_hasse_weil(u64 count, u64 q, u64 genus, u64 slack) {
  const u64 center = q + 1;
  const u64 dev = count > center ? count - center : center - count;
  if (dev <= slack) return true;
  const unsigned __int128 d = dev - slack;
  return d * d <= static_cast<unsigned __int128>(4) * genus * genus * q;
}

struct Witness {
  Element x, y;
  SegmentPosition cls = SegmentPosition::External;
  std::array<Point2, 2> secant;
};

struct WitnessSearch {
  std::optional<Witness> witness;
  u64 searched = 0;  // x values examined; q-1 means the domain was exhausted
};

// Pairs (x, y), x ascending, one y per value of y^m (its smallest preimage),
// with f(x, y) = 0, x y != 0 and x^m != y^m.
inline std::vector<std::pair<Element, Element>> collinear_witnesses(const Field& f, const CurveParams& cp,
                                                                    std::size_t limit) {
  validate(f, cp, true);
  const PowerTable tab(f, cp.m);
  std::vector<std::pair<Element, Element>> out;
  for (u64 xi = 1; xi < f.q() && out.size() < limit; ++xi) {
    const Element u = f.pow(Element{xi}, cp.m);
    const auto roots = quadratic_roots(f, quartic_in_y(f, cp.a, cp.b, cp.t, u));
    std::vector<Element> zs;
    if (!roots) {
      zs.assign(tab.values.begin(), tab.values.end());
    } else {
      zs = *roots;
    }
    std::vector<Element> ys;
    for (Element z : zs) {
      if (z.code == 0 || z == u || tab.count[z.code] == 0) continue;
      ys.push_back(tab.smallest[z.code]);
    }
    std::sort(ys.begin(), ys.end());
    for (Element y : ys) {
      if (out.size() >= limit) break;
      out.emplace_back(Element{xi}, y);
    }
  }
  return out;
}

namespace detail {

inline SegmentPosition class_of(int chi) { return chi == 1 ? SegmentPosition::External : SegmentPosition::Internal; }

inline void cross_check(const Field& f, Point2 p, const Witness& w) {
  if (segment_position(f, p, w.secant[0], w.secant[1]) != w.cls)
    throw std::logic_error("square-class witness disagrees with the segment position");
}

}  // namespace detail

// A secant of K_t through P = (a, b) on which P has the requested position:
// chi((a - t x^m)(a - t y^m)) = +1 for External, -1 for Internal.
inline WitnessSearch bicover_witness(const Field& f, const CurveParams& cp, SegmentPosition want) {
  validate(f, cp, true);
  const NodalCubic cubic(f);
  const PowerTable tab(f, cp.m);
  const Point2 p{cp.a, cp.b};
  WitnessSearch res;
  for (u64 xi = 1; xi < f.q(); ++xi) {
    ++res.searched;
    const Element u = f.pow(Element{xi}, cp.m);
    const auto roots = quadratic_roots(f, quartic_in_y(f, cp.a, cp.b, cp.t, u));
    std::vector<Element> zs = roots ? *roots : tab.values;
    const Element v1 = f.mul(cp.t, u);
    const Element left = f.sub(cp.a, v1);
    std::optional<Element> best;
    for (Element z : zs) {
      if (z.code == 0 || z == u || tab.count[z.code] == 0) continue;
      const Element y = tab.smallest[z.code];
      if (detail::class_of(f.chi(f.mul(left, f.sub(cp.a, f.mul(cp.t, z))))) != want) continue;
      if (!best || y < *best) best = y;
    }
    if (best) {
      const Element z = f.pow(*best, cp.m);
      Witness w{Element{xi}, *best, want, {cubic.point_of_param(v1), cubic.point_of_param(f.mul(cp.t, z))}};
      detail::cross_check(f, p, w);
      res.witness = w;
      return res;
    }
  }
  return res;
}

// For P0 = P(u0) on the cubic: a point P(t x^m) of K_t and its partner
// Q = P(1 / (u0 t x^m)) in K_{t2}, collinear with P0, on whose segment P0 has
// the requested position, i.e. chi((u0 - t x^m)(u0 - 1/(u0 t x^m))) matches.
inline WitnessSearch eta_witness(const Field& f, Element u0, Element t, Element t2, u64 m, SegmentPosition want) {
  if (u0.code == 0) throw Error(Errc::PreconditionNotMet, "u0 must be nonzero");
  if (t.code == 0 || t2.code == 0) throw Error(Errc::PreconditionNotMet, "coset representatives must be nonzero");
  if (m == 0 || (f.q() - 1) % m != 0) throw Error(Errc::NonDivisorM, "m must divide q-1");
  if (f.is_mth_power(f.div(u0, t), m) || f.is_mth_power(f.div(u0, t2), m))
    throw Error(Errc::PreconditionNotMet, "P0 must lie outside K_t and K_t'");
  if (!f.is_mth_power(f.mul(u0, f.mul(t, t2)), m))
    throw Error(Errc::BadCosetPair, "the partner of K_t through P0 is not K_t'");
  const NodalCubic cubic(f);
  const Point2 p0 = cubic.point_of_param(u0);
  WitnessSearch res;
  for (u64 xi = 1; xi < f.q(); ++xi) {
    ++res.searched;
    const Element v1 = f.mul(t, f.pow(Element{xi}, m));
    const Element v2 = f.inv(f.mul(u0, v1));
    if (v1 == v2) continue;
    const Element eta = f.mul(f.sub(u0, v1), f.sub(u0, v2));
    if (detail::class_of(f.chi(eta)) != want) continue;
    Witness w{Element{xi}, Element{0}, want, {cubic.point_of_param(v1), cubic.point_of_param(v2)}};
    detail::cross_check(f, p0, w);
    res.witness = w;
    return res;
  }
  return res;
}

}  // namespace capforge::aux
