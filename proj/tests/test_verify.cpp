#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "capforge/cubic.hpp"
#include "capforge/lift.hpp"
#include "capforge/verify.hpp"

using namespace capforge;

namespace {

Element E(u64 v) { return Element{v}; }

// Per-point classification straight from the definition: for each pair of arc
// points, walk the whole plane and classify collinear points one at a time.
std::vector<std::pair<bool, bool>> oracle_marks(const Field& f, const std::vector<Point2>& arc) {
  const u64 q = f.q();
  std::vector<std::pair<bool, bool>> marks(q * q);
  for (std::size_t i = 0; i < arc.size(); ++i)
    for (std::size_t j = i + 1; j < arc.size(); ++j)
      for (u64 idx = 0; idx < q * q; ++idx) {
        const Point2 p = point_at(f, idx);
        if (p == arc[i] || p == arc[j] || !collinear3(f, p, arc[i], arc[j])) continue;
        (segment_position(f, p, arc[i], arc[j]) == SegmentPosition::External ? marks[idx].first
                                                                            : marks[idx].second) = true;
      }
  return marks;
}

struct ThreadsGuard {
  explicit ThreadsGuard(const char* n) { setenv("CAPFORGE_THREADS", n, 1); }
  ~ThreadsGuard() { unsetenv("CAPFORGE_THREADS"); }
};

}  // namespace

TEST(Verify, CoverageMapMatchesDefinition) {
  for (u64 q : {7ULL, 11ULL, 25ULL}) {
    const Field f = Field::of_order(q);
    for (u64 seed = 0; seed < 3; ++seed) {
      const auto arc = random_complete_arc(f, seed);
      const auto cov = coverage_map(f, arc);
      const auto marks = oracle_marks(f, arc);
      for (u64 idx = 0; idx < q * q; ++idx) {
        ASSERT_EQ(cov.external(idx), marks[idx].first) << q << " " << idx;
        ASSERT_EQ(cov.internal(idx), marks[idx].second) << q << " " << idx;
      }
    }
  }
}

TEST(Verify, ReportCounts) {
  const Field f = Field::build(11);
  const auto arc = random_complete_arc(f, 4);
  const auto rep = verify_bicovering_full(f, arc);
  const auto marks = oracle_marks(f, arc);
  u64 ext = 0, in = 0, both = 0, off = 0;
  for (u64 idx = 0; idx < 121; ++idx) {
    if (std::find(arc.begin(), arc.end(), point_at(f, idx)) != arc.end()) continue;
    ++off;
    ext += marks[idx].first;
    in += marks[idx].second;
    both += marks[idx].first && marks[idx].second;
  }
  EXPECT_EQ(rep.points_checked, off);
  EXPECT_EQ(rep.external, ext);
  EXPECT_EQ(rep.internal, in);
  EXPECT_EQ(rep.both, both);
  EXPECT_EQ(rep.set_size, arc.size());
  EXPECT_EQ(rep.verdict, both == off);
  EXPECT_LE(rep.uncovered.size(), VerifyReport::kMaxWitnesses);
  EXPECT_TRUE(std::is_sorted(rep.uncovered.begin(), rep.uncovered.end()));
  if (!rep.verdict) {
    EXPECT_EQ(rep.first_failure, rep.uncovered.front());
  }
}

// A single coset of index 5 at q = 31 always leaves some point of the cubic
// without both kinds of secant.
TEST(Verify, SingleCosetIsNotBicovering) {
  const Field f = Field::build(31);
  const NodalCubic c(f);
  for (u64 t = 1; t < 31; ++t) {
    if (f.is_mth_power(E(t), 5)) continue;
    const auto k = c.coset_points(5, E(t));
    const auto cov = coverage_map(f, k);
    EXPECT_FALSE(report_from(cov).verdict);
    bool on_cubic_witness = false;
    for (u64 v = 1; v < 31; ++v) {
      const u64 idx = dense_index(f, c.point_of_param(E(v)));
      if (!cov.on_arc(idx) && !cov.bicovered(idx)) on_cubic_witness = true;
    }
    EXPECT_TRUE(on_cubic_witness) << t;
  }
}

TEST(Verify, IndependentOfOrderAndThreads) {
  const Field f = Field::build(31);
  const auto arc = NodalCubic(f).union_arc(5, std::vector<u64>{2, 3}).points;
  const auto base = verify_bicovering_full(f, arc);
  std::mt19937_64 rng(8);
  for (const char* n : {"1", "2", "5"}) {
    ThreadsGuard g(n);
    auto shuffled = arc;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto r = verify_bicovering_full(f, shuffled);
    EXPECT_EQ(r.verdict, base.verdict);
    EXPECT_EQ(r.uncovered, base.uncovered);
    EXPECT_EQ(r.both, base.both);
    const auto s1 = verify_bicovering_sampled(f, shuffled, 300, 17);
    const auto s2 = verify_bicovering_sampled(f, arc, 300, 17);
    EXPECT_EQ(s1.both, s2.both);
    EXPECT_EQ(s1.uncovered, s2.uncovered);
  }
}

// Every sampled verdict must agree with the full coverage map at that point.
TEST(Verify, SampledAgreesWithFull) {
  for (u64 q : {31ULL, 41ULL, 49ULL}) {
    const Field f = Field::of_order(q);
    const auto arc = random_complete_arc(f, q);
    const auto cov = coverage_map(f, arc);
    const auto s = verify_bicovering_sampled(f, arc, 2000, 5);
    EXPECT_EQ(s.mode, "sampled");
    EXPECT_EQ(s.points_checked, 2000u);
    for (u64 idx : s.uncovered) EXPECT_FALSE(cov.bicovered(idx));
    const auto full = report_from(cov);
    // 2000 uniform draws: the uncovered fraction can't drift far from the truth
    const double truth = 1.0 - double(full.both) / double(full.points_checked);
    const double seen = 1.0 - double(s.both) / 2000.0;
    EXPECT_NEAR(seen, truth, 0.06);
  }
}

TEST(Verify, Errors) {
  const Field f = Field::build(7);
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::NotFound;
  };
  const std::vector<Point2> line{{E(0), E(0)}, {E(1), E(1)}, {E(2), E(2)}};
  EXPECT_EQ(code_of([&] { verify_bicovering_full(f, line); }), Errc::NotAnArc);
  EXPECT_EQ(code_of([&] { verify_bicovering_sampled(f, line, 10, 1); }), Errc::NotAnArc);
  VerifyOptions small;
  small.full_q_limit = 5;
  EXPECT_EQ(code_of([&] { verify_bicovering_full(f, std::vector<Point2>{}, small); }), Errc::TooLarge);
  small.cap_space_limit = 1000;
  const std::vector<PointN> cap{{{E(0), E(0), E(0), E(0)}}, {{E(1), E(0), E(0), E(0)}}};
  EXPECT_EQ(code_of([&] { verify_complete_cap(f, cap, small); }), Errc::TooLarge);
  EXPECT_EQ(code_of([&] { verify_complete_cap(f, std::vector<PointN>{}); }), Errc::NotACap);
  const std::vector<PointN> col{{{E(0), E(0), E(0), E(0)}}, {{E(1), E(0), E(0), E(0)}}, {{E(2), E(0), E(0), E(0)}}};
  EXPECT_EQ(code_of([&] { verify_complete_cap(f, col); }), Errc::NotACap);
}

TEST(Verify, RandomCompleteArcsAreCompleteArcs) {
  for (u64 q : {7ULL, 11ULL, 13ULL, 25ULL}) {
    const Field f = Field::of_order(q);
    for (u64 seed = 0; seed < 5; ++seed) {
      const auto arc = random_complete_arc(f, seed);
      ASSERT_TRUE(is_arc(f, arc).arc);
      const auto cov = coverage_map(f, arc);
      for (u64 idx = 0; idx < q * q; ++idx) ASSERT_TRUE(cov.on_arc(idx) || cov.external(idx) || cov.internal(idx));
    }
    EXPECT_EQ(random_complete_arc(f, 3), random_complete_arc(f, 3));
  }
}

// Cap completeness against a direct scan: a point is covered iff it lies on
// the line through two cap points.
TEST(Verify, CapCompletenessMatchesBruteForce) {
  const Field f = Field::build(5);
  const auto arc = random_complete_arc(f, 1);
  const auto cap = lift_arc(f, arc, 4);
  const auto rep = verify_complete_cap(f, cap.points);
  u64 uncovered = 0;
  for (u64 idx = 0; idx < 625; ++idx) {
    const PointN p = point_at(f, idx, 4);
    if (std::find(cap.points.begin(), cap.points.end(), p) != cap.points.end()) continue;
    bool hit = false;
    for (std::size_t i = 0; i < cap.points.size() && !hit; ++i)
      for (std::size_t j = i + 1; j < cap.points.size() && !hit; ++j) hit = collinear3(f, p, cap.points[i], cap.points[j]);
    uncovered += !hit;
  }
  EXPECT_EQ(rep.points_checked - rep.covered, uncovered);
  EXPECT_EQ(rep.verdict, uncovered == 0);
  EXPECT_EQ(rep.dimension, 4u);
}

TEST(Verify, ExhaustiveSearchSmallPlanes) {
  for (u64 q : {5ULL, 7ULL, 9ULL}) {
    const Field f = Field::of_order(q);
    const auto r = exhaustive_bicovering_search(f, 2 * q);
    EXPECT_TRUE(r.complete);
    EXPECT_TRUE(r.found.empty()) << q;
    EXPECT_GT(r.nodes, 0u);
    EXPECT_GT(r.min_deficiency, 0u);
    ASSERT_FALSE(r.closest.empty());
    // the reported deficiency is what the full check sees on the closest arc
    const auto rep = verify_bicovering_full(f, r.closest);
    EXPECT_EQ(rep.points_checked - rep.both, r.min_deficiency);
  }
  EXPECT_THROW(exhaustive_bicovering_search(Field::of_order(67), 10), Error);
}
