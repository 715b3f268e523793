#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <variant>

#include "calab/formats.hpp"

using namespace calab;

namespace {

const Rule1D& as_1d(const std::variant<Rule1D, Rule2D>& v) {
  REQUIRE(std::holds_alternative<Rule1D>(v));
  return std::get<Rule1D>(v);
}

const Rule2D& as_2d(const std::variant<Rule1D, Rule2D>& v) {
  REQUIRE(std::holds_alternative<Rule2D>(v));
  return std::get<Rule2D>(v);
}

void expect_parse_error(const std::string& text, const char* line_tag) {
  try {
    parse_rule(text);
    FAIL("malformed rule text unexpectedly parsed: ", text);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
    CHECK(std::string(e.what()).find(line_tag) != std::string::npos);
  }
}

}  // namespace

TEST_CASE("explicit 1d table parses in window order") {
  Rule1D r = as_1d(parse_rule(
      "rule 1d\nalphabet 2\nradius 1\nneighborhood interval\ntable 01110110\n"));
  CHECK(r.radius == 1);
  CHECK(r.alphabet.size() == 2);
  for (int i = 0; i < 8; ++i) CHECK(r.table[static_cast<std::size_t>(i)] == ((110 >> i) & 1));
}

TEST_CASE("builtins match their library constructors") {
  Rule2D xc = as_2d(parse_rule(
      "rule 2d\nalphabet 2\nradius 1\nneighborhood moore\nbuiltin xor-corners\n"));
  CHECK(xc.table == make_xor_corners(Alphabet(2), 1).table);

  Rule2D sh = as_2d(parse_rule(
      "rule 2d\nalphabet 3\nradius 1\nneighborhood moore\nbuiltin shift:1,-1\n"));
  CHECK(sh.table == make_shift_2d(Alphabet(3), 1, {1, -1}).table);

  Rule1D x1 = as_1d(parse_rule(
      "rule 1d\nalphabet 2\nradius 1\nneighborhood interval\nbuiltin xor1d\n"));
  CHECK(x1.table == make_xor1d(Alphabet(2)).table);

  Rule1D am = as_1d(parse_rule(
      "rule 1d\nalphabet 4\nradius 2\nneighborhood interval\nbuiltin and-min\n"));
  CHECK(am.table == make_and_min_1d(Alphabet(4), 2).table);
}

TEST_CASE("emit and parse are mutually inverse") {
  for (const char* text :
       {"rule 1d\nalphabet 2\nradius 1\nneighborhood interval\nbuiltin xor1d\n",
        "rule 2d\nalphabet 2\nradius 1\nneighborhood moore\nbuiltin identity\n",
        "rule 2d\nalphabet 2\nradius 1\nneighborhood von-neumann\ntable "
        "01011010010110100101101001011010\n",
        "rule 1d\nalphabet 12\nradius 0\nneighborhood interval\ntable "
        "0123456789ab\n"}) {
    auto rule = parse_rule(text);
    std::string once = std::holds_alternative<Rule1D>(rule)
                           ? emit_rule(std::get<Rule1D>(rule))
                           : emit_rule(std::get<Rule2D>(rule));
    auto back = parse_rule(once);
    if (std::holds_alternative<Rule1D>(rule)) {
      CHECK(as_1d(back).table == as_1d(rule).table);
      CHECK(emit_rule(as_1d(back)) == once);
    } else {
      CHECK(as_2d(back).table == as_2d(rule).table);
      CHECK(emit_rule(as_2d(back)) == once);
    }
  }
}

TEST_CASE("comments and spacing do not change the parse") {
  Rule1D a = as_1d(parse_rule(
      "# a rule\nrule 1d\n\nalphabet  2\nradius 1  # window 3\nneighborhood "
      "interval\ntable 01110110\n"));
  Rule1D b = as_1d(parse_rule(
      "rule 1d\nalphabet 2\nradius 1\nneighborhood interval\ntable 01110110\n"));
  CHECK(a.table == b.table);
}

TEST_CASE("malformed rule files fail with their line number") {
  expect_parse_error("rule 3d\nalphabet 2\nradius 1\nneighborhood interval\ntable 01\n",
                     "line 1");
  expect_parse_error("rule 1d\nalphabet x\nradius 1\nneighborhood interval\ntable 01\n",
                     "line 2");
  expect_parse_error(
      "rule 1d\nalphabet 2\nradius 1\nneighborhood moore\ntable 01110110\n", "line 4");
  expect_parse_error(
      "rule 1d\nalphabet 2\nradius 1\nneighborhood interval\ntable 0111011\n",
      "line 5");
  expect_parse_error(
      "rule 1d\nalphabet 2\nradius 1\nneighborhood interval\ntable 01110120\n",
      "line 5");
  expect_parse_error(
      "rule 1d\nalphabet 2\nradius 1\nneighborhood interval\nbuiltin mystery\n",
      "line 5");
  expect_parse_error(
      "rule 1d\nalphabet 2\nradius 2\nneighborhood interval\nbuiltin xor1d\n",
      "line 5");
  expect_parse_error(
      "rule 2d\nalphabet 2\nradius 1\nneighborhood moore\nbuiltin shift:1\n",
      "line 5");
}

TEST_CASE("tile files round trip byte for byte") {
  std::string text =
      "tile 0 N=0 S=1 E=0 W=1\n"
      "tile 1 N=1 S=0 E=1 W=0 dir=E\n"
      "tile 7 N=4294967295 S=0 E=3 W=3 dir=N\n";
  TileSet ts = parse_tiles(text);
  REQUIRE(ts.tiles.size() == 3);
  CHECK(ts.tiles[1].direction == TileSide::E);
  CHECK(ts.tiles[2].colors[0] == 4294967295u);
  CHECK(emit_tiles(ts) == text);
  CHECK(emit_tiles(parse_tiles(emit_tiles(ts))) == text);
}

TEST_CASE("malformed tile files fail with their line number") {
  for (auto [text, tag] :
       {std::pair<const char*, const char*>{"tile 0 N=0 S=1 E=0\n", "line 1"},
        {"tile 0 S=0 N=1 E=0 W=1\n", "line 1"},
        {"tile 0 N=0 S=1 E=0 W=1\ntile 0 N=0 S=0 E=0 W=0\n", "line 2"},
        {"tile 0 N=0 S=1 E=0 W=1 dir=Q\n", "line 1"},
        {"tile 0 N=-1 S=1 E=0 W=1\n", "line 1"},
        {"brick 0 N=0 S=1 E=0 W=1\n", "line 1"}}) {
    try {
      parse_tiles(text);
      FAIL("malformed tile text unexpectedly parsed: ", text);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::parse_error);
      CHECK(std::string(e.what()).find(tag) != std::string::npos);
    }
  }
}

TEST_CASE("label and bitmap renders pin the base cross") {
  HierarchicalPattern h = generate_hierarchy(1, Anchor::SWCorner);
  CHECK(render_labels(h) == ".|.\n-+-\n.|.\n");
  CHECK(render_pbm(h) == "P1\n3 3\n010\n111\n010\n");
}

TEST_CASE("larger renders stay consistent with the pattern") {
  HierarchicalPattern h = generate_hierarchy(3, Anchor::Center);
  std::string labels = render_labels(h);
  std::string pbm = render_pbm(h);
  CHECK(labels.size() == static_cast<std::size_t>(h.side * (h.side + 1)));
  std::size_t row = 0;
  std::size_t header = pbm.find("15 15\n");
  REQUIRE(header != std::string::npos);
  std::size_t base = header + 6;
  for (long long y = h.side - 1; y >= 0; --y)
    for (long long x = 0; x < h.side; ++x, ++row) {
      char bit = pbm[base + static_cast<std::size_t>((h.side - 1 - y) * (h.side + 1) + x)];
      CHECK((bit == '1') == (h.at(x, y) != CellLabel::Blank));
    }
}
