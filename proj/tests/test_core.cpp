#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "calab/core.hpp"

using namespace calab;

namespace {

PeriodicConfig1D word1d(Alphabet a, std::vector<Sym> cells) {
  return PeriodicConfig1D{a, std::move(cells)};
}

TorusConfig2D single_one(long long w, long long h, Vec2 at) {
  TorusConfig2D c = make_torus(Alphabet(2), w, h);
  c.cell(at.x, at.y) = 1;
  return c;
}

}  // namespace

TEST_CASE("alphabet bounds") {
  CHECK(Alphabet(2).size() == 2);
  CHECK(Alphabet(16).size() == 16);
  CHECK_THROWS_AS(Alphabet(17), Error);
  CHECK(Alphabet(17, 32).size() == 17);
  CHECK_THROWS_AS(Alphabet(0), Error);
  CHECK(Alphabet(3).contains(2));
  CHECK(!Alphabet(3).contains(3));
}

TEST_CASE("rule table packing is leftmost-most-significant") {
  Alphabet a(3);
  std::vector<Sym> t(27, 0);
  // word (2,1,0) -> index 2*9 + 1*3 + 0 = 21
  t[21] = 2;
  Rule1D r = make_rule1d(a, 1, t);
  std::vector<Sym> w{2, 1, 0};
  CHECK(r.pack(w) == 21);
  CHECK(r.eval(w) == 2);
}

TEST_CASE("rule construction rejects bad tables") {
  Alphabet a(2);
  CHECK_THROWS_AS(make_rule1d(a, 1, std::vector<Sym>(7, 0)), Error);
  CHECK_THROWS_AS(make_rule1d(a, 1, std::vector<Sym>(8, 2)), Error);
  CHECK_THROWS_AS(make_rule2d_moore(a, 1, std::vector<Sym>(100, 0)), Error);
}

TEST_CASE("binary xor rule on 1000") {
  Rule1D r = make_xor1d(Alphabet(2));
  PeriodicConfig1D c = word1d(Alphabet(2), {1, 0, 0, 0});
  PeriodicConfig1D d = apply_1d(r, c);
  CHECK(d.cells == std::vector<Sym>{0, 1, 0, 1});
}

TEST_CASE("periodic config wraps negative indexes") {
  PeriodicConfig1D c = word1d(Alphabet(2), {1, 0, 0});
  CHECK(c.at(-1) == 0);
  CHECK(c.at(-3) == 1);
  CHECK(c.at(3) == 1);
  CHECK(c.at(7) == 0);
}

TEST_CASE("torus config wraps both axes") {
  TorusConfig2D c = single_one(3, 2, {2, 1});
  CHECK(c.at({2, 1}) == 1);
  CHECK(c.at({-1, -1}) == 1);
  CHECK(c.at({5, 3}) == 1);
  CHECK(c.at({0, 0}) == 0);
}

TEST_CASE("moore offsets scan rows upward") {
  auto offs = moore_offsets(1);
  REQUIRE(offs.size() == 9);
  CHECK(offs.front() == Vec2{-1, -1});
  CHECK(offs[4] == Vec2{0, 0});
  CHECK(offs.back() == Vec2{1, 1});
}

TEST_CASE("von neumann offsets form the diamond") {
  CHECK(von_neumann_offsets(1, 1).size() == 5);
  CHECK(von_neumann_offsets(2, 2).size() == 13);
  auto offs = von_neumann_offsets(2, 1);
  CHECK(offs.size() == 7);
  for (Vec2 o : offs) CHECK(std::abs(o.x) * 1 + std::abs(o.y) * 2 <= 2);
}

TEST_CASE("corner-sum rule moves a lone cell to both diagonal corners") {
  TorusConfig2D c = single_one(5, 5, {2, 2});
  Rule2D f = make_xor_corners(Alphabet(2), 1);
  TorusConfig2D d = apply_2d(f, c);
  for (long long y = 0; y < 5; ++y)
    for (long long x = 0; x < 5; ++x) {
      bool expect = (x == 1 && y == 1) || (x == 3 && y == 3);
      CHECK(d.cell(x, y) == (expect ? 1u : 0u));
    }
}

TEST_CASE("shift rule agrees with the shift map") {
  TorusConfig2D c = single_one(4, 3, {1, 2});
  c.cell(0, 0) = 1;
  for (Vec2 delta : {Vec2{1, 0}, Vec2{0, 1}, Vec2{-1, 1}, Vec2{1, -1}}) {
    Rule2D f = make_shift_2d(Alphabet(2), 1, delta);
    CHECK(apply_2d(f, c) == shift_2d(c, delta));
  }
}

TEST_CASE("identity rule fixes every configuration") {
  TorusConfig2D c = single_one(4, 4, {3, 0});
  c.cell(1, 2) = 1;
  Rule2D f = make_identity_2d(Alphabet(2), 1);
  CHECK(apply_2d(f, c) == c);
  auto tp = temporal_period(f, c, 10);
  REQUIRE(tp.has_value());
  CHECK(tp->first == 0);
  CHECK(tp->second == 1);
}

TEST_CASE("corner-sum rule dies on the 2x2 torus") {
  // (1,1) and (-1,-1) coincide mod 2, so the two corner reads cancel.
  TorusConfig2D c = single_one(2, 2, {0, 0});
  Rule2D f = make_xor_corners(Alphabet(2), 1);
  auto tp = temporal_period(f, c, 10);
  REQUIRE(tp.has_value());
  CHECK(tp->first == 1);
  CHECK(tp->second == 1);
}

TEST_CASE("1d temporal period of xor on 1000") {
  Rule1D r = make_xor1d(Alphabet(2));
  PeriodicConfig1D c = word1d(Alphabet(2), {1, 0, 0, 0});
  auto tp = temporal_period(r, c, 64);
  REQUIRE(tp.has_value());
  PeriodicConfig1D probe = c;
  for (long long i = 0; i < tp->first; ++i) probe = apply_1d(r, probe);
  PeriodicConfig1D loop = probe;
  for (long long i = 0; i < tp->second; ++i) loop = apply_1d(r, loop);
  CHECK(loop.cells == probe.cells);
}

TEST_CASE("plane equality across torus representations") {
  TorusConfig2D small = make_torus(Alphabet(2), 2, 2);
  small.cell(0, 0) = 1;
  small.cell(1, 1) = 1;
  TorusConfig2D big = make_torus(Alphabet(2), 4, 4);
  for (long long y = 0; y < 4; ++y)
    for (long long x = 0; x < 4; ++x) big.cell(x, y) = small.at({x, y});
  CHECK(same_plane_config(small, big));
  big.cell(0, 0) = 0;
  CHECK(!same_plane_config(small, big));
  CHECK(same_plane_config(small, shift_2d(shift_2d(small, {1, 1}), {1, 1})));
}

TEST_CASE("materialized grid steps match torus evolution") {
  TorusConfig2D c = single_one(5, 5, {2, 2});
  c.cell(4, 1) = 1;
  Rule2D f = make_xor_corners(Alphabet(2), 1);
  Grid2D g = materialize(torus_field(c), Rect{-2, -2, 9, 9}, 1 << 20);
  Grid2D g1 = step_grid(f, g);
  TorusConfig2D d = apply_2d(f, c);
  for (long long y = -1; y < 6; ++y)
    for (long long x = -1; x < 6; ++x) CHECK(g1.at({x, y}) == d.at({x, y}));
}

TEST_CASE("pair validation rejects malformed pairs") {
  TorusConfig2D bg = make_torus(Alphabet(2), 2, 2);
  AsymptoticPair2D same{bg, {{0, 0}}, {1}, {1}, {1, 0}, 5};
  CHECK_THROWS_AS(validate_pair(same), Error);
  AsymptoticPair2D outside{bg, {{9, 0}}, {1}, {0}, {1, 0}, 5};
  CHECK_THROWS_AS(validate_pair(outside), Error);
  AsymptoticPair2D ok{bg, {{0, 0}, {9, 0}}, {1, 1}, {0, 1}, {1, 0}, 5};
  CHECK_NOTHROW(validate_pair(ok));
  CHECK(ok.difference_cells() == std::vector<Vec2>{{0, 0}});
}

TEST_CASE("pair traces expose a spreading difference") {
  TorusConfig2D bg = make_torus(Alphabet(2), 3, 3);
  AsymptoticPair2D pair{bg, {{0, 0}}, {1}, {0}, {1, 1}, 1};
  Rule2D f = make_xor_corners(Alphabet(2), 1);
  PairTrace tr = evolve_pair(f, pair, Rect{-4, -4, 9, 9}, 3);
  REQUIRE(tr.a.size() == 4);
  CHECK(!tr.equal_final);
  REQUIRE(tr.first_diff.has_value());
  // the difference is linear in the overlay: after 3 steps it sits at
  // (-3,-3), (-1,-1), (1,1), (3,3) with binomial parity 1,1,1,1
  for (long long k : {-3LL, -1LL, 1LL, 3LL}) {
    CHECK(tr.a.back().at({k, k}) != tr.b.back().at({k, k}));
  }
  CHECK(tr.a.back().at({0, 0}) == tr.b.back().at({0, 0}));
}

TEST_CASE("pair traces are torus-independent") {
  Rule2D f = make_xor_corners(Alphabet(2), 1);
  for (long long n : {3LL, 4LL, 7LL}) {
    TorusConfig2D bg = make_torus(Alphabet(2), n, n);
    AsymptoticPair2D pair{bg, {{0, 0}}, {1}, {0}, {0, 1}, 2};
    PairTrace tr = evolve_pair(f, pair, Rect{-3, -3, 7, 7}, 2);
    CHECK(tr.a.back().at({-2, -2}) != tr.b.back().at({-2, -2}));
    CHECK(tr.a.back().at({2, 2}) != tr.b.back().at({2, 2}));
    CHECK(tr.a.back().at({1, 1}) == tr.b.back().at({1, 1}));
  }
}

TEST_CASE("evolution respects the cell budget") {
  TorusConfig2D bg = make_torus(Alphabet(2), 2, 2);
  AsymptoticPair2D pair{bg, {{0, 0}}, {1}, {0}, {1, 0}, 1};
  Rule2D f = make_xor_corners(Alphabet(2), 1);
  try {
    evolve_pair(f, pair, Rect{-50, -50, 101, 101}, 30, 100);
    FAIL("expected a budget failure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::cone_overflow);
  }
}

TEST_CASE("rect helpers") {
  Rect r = Rect::centered({0, 0}, 5, 3);
  CHECK(r.x0 == -2);
  CHECK(r.y0 == -1);
  CHECK(r.contains({2, 1}));
  CHECK(!r.contains({3, 1}));
  CHECK(r.cells() == 15);
}
