#pragma once

// The nodal cubic XY = (X - 1)^3. Its node sits at the ideal point (0:1:0),
// so the affine points are exactly (v, (v - 1)^3 / v) for v != 0 and form a
// group isomorphic to F_q^* with neutral element (1, 0). Three of them are
// collinear iff the product of their parameters is 1.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "capforge/error.hpp"
#include "capforge/field.hpp"
#include "capforge/indep.hpp"
#include "capforge/plane.hpp"

namespace capforge {

// A point set in AG(2,q) together with how it was built. m == 0 marks an arc
// that did not come from cosets of the cubic.
struct ArcSet {
  Field field;
  u64 m = 0;
  std::vector<u64> M;
  Element g{};
  std::vector<Point2> points;
};

class NodalCubic {
 public:
  explicit NodalCubic(Field f) : field_(std::move(f)) {
    if (field_.p() <= 3)
      throw Error(Errc::UnsupportedCharacteristic, "the nodal cubic needs characteristic > 3");
  }

  const Field& field() const { return field_; }

  bool contains(Point2 pt) const {
    const Field& f = field_;
    if (pt.x.code == 0) return false;
    const Element xm1 = f.sub(pt.x, f.one());
    return f.mul(pt.x, pt.y) == f.mul(f.square(xm1), xm1);
  }

  Point2 point_of_param(Element v) const {
    const Field& f = field_;
    if (v.code == 0) throw Error(Errc::ZeroParam, "parameter must be nonzero");
    const Element vm1 = f.sub(v, f.one());
    return {v, f.div(f.mul(f.square(vm1), vm1), v)};
  }

  Element param_of_point(Point2 pt) const {
    if (!contains(pt)) throw Error(Errc::NotOnCubic, "point is not on XY = (X-1)^3");
    return pt.x;
  }

  Element neutral() const { return field_.one(); }
  Element group_mul(Element v1, Element v2) const {
    if (v1.code == 0 || v2.code == 0) throw Error(Errc::ZeroParam, "parameter must be nonzero");
    return field_.mul(v1, v2);
  }
  Element group_inv(Element v) const {
    if (v.code == 0) throw Error(Errc::ZeroParam, "parameter must be nonzero");
    return field_.inv(v);
  }

  // Index i with v in g^i K, K the index-m subgroup; requires m | q - 1.
  u64 coset_residue(Element v, u64 m) const {
    const Field& f = field_;
    if (v.code == 0) throw Error(Errc::ZeroParam, "parameter must be nonzero");
    if (m == 0 || (f.q() - 1) % m != 0) throw Error(Errc::NonDivisorM, "m must divide q-1");
    const u64 e = (f.q() - 1) / m;
    const Element target = f.pow(v, e);
    const Element step = f.pow(f.primitive_root(), e);
    Element cur = f.one();
    for (u64 i = 0; i < m; ++i) {
      if (cur == target) return i;
      cur = f.mul(cur, step);
    }
    throw Error(Errc::NonDivisorM, "coset residue not found");
  }

  // K_t = { P(t w^m) : w in F_q^* }, sorted by dense index.
  std::vector<Point2> coset_points(u64 m, Element t) const {
    const Field& f = field_;
    if (m == 0 || (f.q() - 1) % m != 0) throw Error(Errc::NonDivisorM, "m must divide q-1");
    if (t.code == 0) throw Error(Errc::ZeroParam, "coset representative must be nonzero");
    const u64 size = (f.q() - 1) / m;
    const Element step = f.pow(f.primitive_root(), m);
    std::vector<Point2> out;
    out.reserve(size);
    Element v = t;
    for (u64 k = 0; k < size; ++k) {
      out.push_back(point_of_param(v));
      v = f.mul(v, step);
    }
    sort_by_dense_index(f, out);
    return out;
  }

  // Union of the cosets g^i K for i in M. Strict mode insists that M is a
  // maximal 3-independent subset of Z_m.
  ArcSet union_arc(u64 m, std::span<const u64> residues, bool strict = false) const {
    const Field& f = field_;
    if (m == 0 || (f.q() - 1) % m != 0) throw Error(Errc::BadIndex, "m must divide q-1");
    if (m % 3 == 0) throw Error(Errc::BadGcd, "m must be coprime to 3 for cosets to be arcs");
    const auto members = indep::normalize_members(m, residues);
    if (strict && !indep::verify(m, members).flags.valid())
      throw Error(Errc::NotThreeIndependent, "M is not a maximal 3-independent subset of Z_m");

    ArcSet arc{f, m, members, f.primitive_root(), {}};
    arc.points.reserve(members.size() * ((f.q() - 1) / m));
    for (u64 i : members) {
      auto pts = coset_points(m, f.pow(f.primitive_root(), i));
      arc.points.insert(arc.points.end(), pts.begin(), pts.end());
    }
    sort_by_dense_index(f, arc.points);
    return arc;
  }

 private:
  Field field_;
};

// Arithmetic conditions under which a single coset of index m bicovers the
// plane off the cubic. The exact rule is
//   q + 1 - (12m^2 - 8m + 2) sqrt(q) >= 8m^2 + 8m + 1,
// decided without floating point as L >= 0 and L^2 >= (12m^2 - 8m + 2)^2 q
// with L = q + 1 - (8m^2 + 8m + 1). The quartic rule m <= q^{1/4} / 3.5 reads
// 16 q >= 2401 m^4.
namespace gate {

using u128 = unsigned __int128;

inline bool exact_rule(u64 q, u64 m) {
  if (m > (1ULL << 31)) return false;
  const u128 mm = static_cast<u128>(m) * m;
  const u128 d = 8 * mm + 8 * static_cast<u128>(m) + 1;
  if (static_cast<u128>(q) + 1 < d) return false;
  const u128 L = static_cast<u128>(q) + 1 - d;
  const u128 c = 12 * mm - 8 * static_cast<u128>(m) + 2;
  if (c > L) return false;
  return c * c <= (L * L) / q;
}

inline bool quartic_rule(u64 q, u64 m) {
  if (m > (1ULL << 16)) return false;
  const u128 m4 = static_cast<u128>(m) * m * m * m;
  return 16 * static_cast<u128>(q) >= 2401 * m4;
}

// Smallest q >= 1 satisfying the rule; both rules are monotone in q.
template <class Rule>
u64 threshold(u64 m, Rule rule) {
  u64 lo = 1, hi = 1ULL << 62;
  if (!rule(hi, m)) return 0;
  while (lo < hi) {
    const u64 mid = lo + (hi - lo) / 2;
    if (rule(mid, m)) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

inline u64 exact_threshold(u64 m) { return threshold(m, exact_rule); }
inline u64 quartic_threshold(u64 m) { return threshold(m, quartic_rule); }

}  // namespace gate

struct GateReport {
  u64 q = 0, m = 0;
  bool exact = false;
  bool quartic = false;
  u64 exact_threshold = 0;
  u64 quartic_threshold = 0;
};

inline GateReport check_hypotheses(u64 q, u64 m) {
  if (m <= 1 || q < 2 || (q - 1) % m != 0)
    throw Error(Errc::BadDivisibility, "m must be a divisor > 1 of q-1");
  if (std::gcd(m, u64{6}) != 1) throw Error(Errc::BadGcd, "m must be coprime to 6");
  return GateReport{q, m, gate::exact_rule(q, m), gate::quartic_rule(q, m), gate::exact_threshold(m),
                    gate::quartic_threshold(m)};
}

}  // namespace capforge
