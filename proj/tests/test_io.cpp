#include <gtest/gtest.h>

#include "capforge/io.hpp"

using namespace capforge;
using io::json;

namespace {

template <class Fn>
Errc code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::NotFound;
}

}  // namespace

TEST(Io, FieldRoundTrip) {
  for (u64 q : {7ULL, 25ULL, 343ULL}) {
    const Field f = Field::of_order(q);
    const json j = io::to_json(f);
    EXPECT_EQ(j["modulus"].size(), f.h() == 1 ? 0 : f.h() + 1);
    EXPECT_EQ(io::field_from_json(j), f);
  }
  EXPECT_EQ(io::to_json(Field::of_order(25)).dump(), R"({"p":5,"h":2,"modulus":[2,0,1]})");
  EXPECT_EQ(code_of([] { io::field_from_json(json{{"p", 5}, {"h", 2}, {"q", 26}}); }), Errc::MalformedInput);
  EXPECT_EQ(code_of([] { io::field_from_json(json{{"h", 2}}); }), Errc::MalformedInput);
  EXPECT_EQ(code_of([] { io::field_from_json(json{{"p", -5}}); }), Errc::MalformedInput);
  EXPECT_EQ(code_of([] { io::field_from_json(json{{"p", 5}, {"h", 2}, {"modulus", {1, 0, 1}}}); }), Errc::ReducibleModulus);
}

TEST(Io, ArcRoundTrip) {
  const Field f = Field::build(31);
  const auto arc = NodalCubic(f).union_arc(5, std::vector<u64>{2, 3});
  const json j = io::to_json(arc);
  EXPECT_EQ(j["q"], 31);
  EXPECT_EQ(j["points"].size(), 12u);
  const auto back = io::arc_from_json(io::parse(j.dump()));
  EXPECT_EQ(back.m, 5u);
  EXPECT_EQ(back.M, arc.M);
  EXPECT_EQ(back.g, arc.g);
  auto sorted = arc.points;
  sort_by_dense_index(f, sorted);
  EXPECT_EQ(back.points, sorted);
  EXPECT_EQ(io::to_json(back).dump(), j.dump());
}

TEST(Io, CapRoundTrip) {
  const Field f = Field::build(5);
  const std::vector<Point2> arc{{Element{0}, Element{0}}, {Element{0}, Element{1}}, {Element{1}, Element{0}}};
  const auto cap = lift_arc(f, arc, 4);
  const json j = io::to_json(cap);
  EXPECT_TRUE(io::is_cap_json(j));
  EXPECT_FALSE(io::is_cap_json(io::to_json(cap.arc)));
  const auto back = io::cap_from_json(j);
  EXPECT_EQ(back.N, 4u);
  EXPECT_EQ(back.points, cap.points);
  ASSERT_TRUE(back.arc);
  EXPECT_EQ(back.arc->points, arc);

  json bad = j;
  bad["N"] = 8;
  EXPECT_EQ(code_of([&] { io::cap_from_json(bad); }), Errc::MalformedInput);
}

TEST(Io, ParityRoundTrip) {
  const Field f = Field::build(5);
  const std::vector<Point2> arc{{Element{0}, Element{0}}, {Element{0}, Element{1}}, {Element{1}, Element{0}}};
  const auto cap = lift_arc(f, arc, 4);
  const auto H = export_parity_check(cap);
  const json j = io::to_json(H, 4, arc_hash(f, arc));
  EXPECT_EQ(j["metadata"]["parameters"], json::array({15, 10, 4}));
  EXPECT_EQ(j["metadata"]["embedding"], "affine-embedded");
  EXPECT_EQ(j["order"], "column-major");
  const auto back = io::parity_from_json(j);
  EXPECT_EQ(back.entries, H.entries);
  EXPECT_EQ(decode_columns(f, back), cap.points);

  const std::string csv = io::to_csv(H);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "1,1,1,1,1,1,1,1,1,1,1,1,1,1,1");

  json short_entries = j;
  short_entries["entries"].erase(short_entries["entries"].begin());
  EXPECT_EQ(code_of([&] { io::parity_from_json(short_entries); }), Errc::MalformedInput);
}

TEST(Io, MalformedInput) {
  EXPECT_EQ(code_of([] { io::parse("{\"p\": 5,"); }), Errc::MalformedInput);
  EXPECT_EQ(code_of([] { io::arc_from_json(json{{"p", 5}}); }), Errc::MalformedInput);
  EXPECT_EQ(code_of([] { io::arc_from_json(json{{"p", 5}, {"points", {{1, 2, 3}}}}); }), Errc::MalformedInput);
  EXPECT_EQ(code_of([] { io::arc_from_json(json{{"p", 5}, {"points", json::array({json::array({1, 7})})}}); }),
            Errc::ForeignElement);
  EXPECT_EQ(code_of([] { io::arc_from_json(json{{"p", 5}, {"points", "x"}}); }), Errc::MalformedInput);
  EXPECT_EQ(code_of([] { io::cap_from_json(json{{"p", 5}, {"N", 4}, {"points", json::parse("[[1,2,3,4],[1,2]]")}}); }),
            Errc::MixedDimensions);
}

TEST(Io, Reports) {
  const Field f = Field::build(7);
  VerifyReport r;
  r.verdict = false;
  r.uncovered = {0, 8};
  r.points_checked = 40;
  const json j = io::to_json(f, r);
  EXPECT_EQ(j["uncovered"], json::parse("[[0,0],[1,1]]"));
  EXPECT_FALSE(j.contains("seed"));
  r.mode = "sampled";
  r.seed = 3;
  EXPECT_EQ(io::to_json(f, r)["seed"], 3);

  const json s = io::to_json(indep::make_verified(5, std::vector<u64>{3, 2}));
  EXPECT_EQ(s.dump(), R"({"m":5,"members":[2,3],"flags":{"three_independent":true,"maximal":true,"good":false}})");
}
