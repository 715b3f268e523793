#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdlib>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "calab/reduction.hpp"

using namespace calab;

namespace {

Tile plain(int id, Color n, Color s, Color e, Color w) {
  Tile t;
  t.id = id;
  t.colors = {n, s, e, w};
  return t;
}

Tile arrow(int id, Color n, Color s, Color e, Color w, TileSide dir) {
  Tile t = plain(id, n, s, e, w);
  t.direction = dir;
  return t;
}

// One-cell macro shape over the unit lattice, with a single border edge on
// each of the four sides.
MacroShape unit_shape() {
  MacroShape sh;
  sh.nu = {0, 1};
  sh.mu = {1, 0};
  sh.scale = 1;
  sh.period_nu = {0, 1};
  sh.period_mu = {1, 0};
  sh.cells = {{0, 0}};
  sh.borders[static_cast<std::size_t>(ShapeSide::N)] = {{{0, 0}, TileSide::N}};
  sh.borders[static_cast<std::size_t>(ShapeSide::S)] = {{{0, 0}, TileSide::S}};
  sh.borders[static_cast<std::size_t>(ShapeSide::E)] = {{{0, 0}, TileSide::E}};
  sh.borders[static_cast<std::size_t>(ShapeSide::W)] = {{{0, 0}, TileSide::W}};
  sh.neighbor_count = 4;
  return sh;
}

TileSet singleton_tau() { return make_tileset({plain(0, 7, 7, 7, 7)}); }

// Two tiles that tile the torus only in a checkerboard, never uniformly.
TileSet checker_tau() {
  return make_tileset({plain(0, 0, 1, 0, 1), plain(1, 1, 0, 1, 0)});
}

// Single tile whose north and south colors disagree, so no torus or square
// of side above one carries a valid tiling.
TileSet clashing_tau() { return make_tileset({plain(0, 1, 2, 3, 3)}); }

// Product rule over the one-cell shape: every five-cell window is a valid
// macro arrangement, so the rule is the plain xor with the north neighbor.
ReductionCA unit_reduction(const TileSet& tau) {
  TileSet base = make_tileset({arrow(0, 9, 9, 9, 9, TileSide::N)});
  return build_reduction(tau, stretch_tileset(base, unit_shape()));
}

const ReductionCA& hierarchy_reduction() {
  static ReductionCA red = build_reduction(singleton_tau(), {0, 1}, {1, 0}, 2);
  return red;
}

int pointed_index(TileSide dir) {
  switch (dir) {
    case TileSide::N: return 1;
    case TileSide::S: return 2;
    case TileSide::E: return 3;
    default: return 4;
  }
}

// The rule's contract restated from the definition: locate the five
// macro-tiles through the cell's own layer value, demand exact macro
// contents, matching adjacencies on both tile layers and one bit per
// macro-tile, then xor the cell's bit with the pointed macro-tile's bit.
TorusConfig2D reference_step(const ReductionCA& red, const TorusConfig2D& cfg) {
  const MacroShape& sh = red.K.shape;
  int k = static_cast<int>(sh.cells.size());
  std::array<Vec2, 5> doms{Vec2{0, 0}, sh.period_nu, -sh.period_nu,
                           sh.period_mu, -sh.period_mu};
  TorusConfig2D out = cfg;
  for (long long y = 0; y < cfg.h; ++y)
    for (long long x = 0; x < cfg.w; ++x) {
      Sym s = cfg.cell(x, y);
      int c0 = red.k_layer(s) % k;
      Vec2 origin = Vec2{x, y} - sh.cells[static_cast<std::size_t>(c0)];
      bool ok = true;
      bool uniform = true;
      std::array<int, 5> base{};
      std::array<int, 5> bit{};
      std::set<std::pair<long long, long long>> window;
      for (int d = 0; d < 5 && ok; ++d)
        for (int j = 0; j < k; ++j) {
          Vec2 z = origin + doms[static_cast<std::size_t>(d)] +
                   sh.cells[static_cast<std::size_t>(j)];
          window.insert({z.y, z.x});
          Sym v = cfg.at(z);
          int kid = red.k_layer(v);
          if (j == 0) {
            if (kid % k != 0) {
              ok = false;
              break;
            }
            base[static_cast<std::size_t>(d)] = kid / k;
            bit[static_cast<std::size_t>(d)] = red.bit_layer(v);
          } else if (kid != base[static_cast<std::size_t>(d)] * k + j) {
            ok = false;
            break;
          } else if (red.bit_layer(v) != bit[static_cast<std::size_t>(d)]) {
            uniform = false;
          }
        }
      for (auto it = window.begin(); ok && it != window.end(); ++it)
        for (bool east : {true, false}) {
          auto [zy, zx] = *it;
          if (!window.count(east ? std::pair{zy, zx + 1} : std::pair{zy + 1, zx}))
            continue;
          Sym sa = cfg.at({zx, zy});
          Sym sb = cfg.at({east ? zx + 1 : zx, east ? zy : zy + 1});
          const Tile& ka = red.K.tiles.tiles[static_cast<std::size_t>(red.k_layer(sa))];
          const Tile& kb = red.K.tiles.tiles[static_cast<std::size_t>(red.k_layer(sb))];
          const Tile& ta = red.tau.tiles[static_cast<std::size_t>(red.tau_layer(sa))];
          const Tile& tb = red.tau.tiles[static_cast<std::size_t>(red.tau_layer(sb))];
          TileSide side = east ? TileSide::E : TileSide::N;
          TileSide oppo = east ? TileSide::W : TileSide::S;
          if (ka.color(side) != kb.color(oppo) || ta.color(side) != tb.color(oppo))
            ok = false;
        }
      if (!ok || !uniform) continue;
      TileSide dir = *red.K.base.tiles[static_cast<std::size_t>(base[0])].direction;
      if (bit[static_cast<std::size_t>(pointed_index(dir))]) out.cell(x, y) = s ^ 1;
    }
  return out;
}

TorusConfig2D random_config(const ReductionCA& red, long long w, long long h,
                            std::mt19937& rng) {
  TorusConfig2D cfg = make_torus(red.rule.alphabet, w, h);
  std::uniform_int_distribution<std::uint32_t> pick(0, red.states() - 1);
  for (Sym& c : cfg.cells) c = pick(rng);
  return cfg;
}

}  // namespace

TEST_CASE("one-cell shape reduces to xor with the north neighbor") {
  ReductionCA red = unit_reduction(singleton_tau());
  CHECK(red.states() == 2);
  CHECK(red.rule.ex == 1);
  CHECK(red.rule.ey == 1);
  CHECK(red.m == 1);
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    TorusConfig2D cfg = make_torus(red.rule.alphabet, 4, 4);
    for (Sym& c : cfg.cells) c = red.encode(0, 0, static_cast<int>(rng() & 1));
    TorusConfig2D img = apply_2d(red.rule, cfg);
    for (long long y = 0; y < 4; ++y)
      for (long long x = 0; x < 4; ++x) {
        int expect = red.bit_layer(cfg.cell(x, y)) ^
                     red.bit_layer(cfg.cell(x, (y + 1) % 4));
        CHECK(red.bit_layer(img.cell(x, y)) == expect);
        CHECK(red.k_layer(img.cell(x, y)) == red.k_layer(cfg.cell(x, y)));
        CHECK(red.tau_layer(img.cell(x, y)) == red.tau_layer(cfg.cell(x, y)));
      }
  }
}

TEST_CASE("state encoding round trips and the count is the layer product") {
  const ReductionCA& red = hierarchy_reduction();
  auto n_k = static_cast<int>(red.K.tiles.tiles.size());
  auto n_tau = static_cast<int>(red.tau.tiles.size());
  CHECK(red.states() == static_cast<std::uint32_t>(n_k) * n_tau * 2);
  for (int k = 0; k < n_k; k += 7)
    for (int t = 0; t < n_tau; ++t)
      for (int b : {0, 1}) {
        Sym s = red.encode(k, t, b);
        CHECK(red.k_layer(s) == k);
        CHECK(red.tau_layer(s) == t);
        CHECK(red.bit_layer(s) == b);
      }
}

TEST_CASE("hierarchy reduction records its geometry") {
  const ReductionCA& red = hierarchy_reduction();
  CHECK(red.step == 2);
  CHECK(red.south_mid.pattern.side == 7);
  CHECK(red.south_mid.paths.size() == 2);
  CHECK(red.center.paths.size() == 4);
  CHECK(red.m == 3);

  const MacroShape& sh = red.K.shape;
  long long reach = 0;
  std::set<std::pair<long long, long long>> offsets;
  for (Vec2 o : red.rule.offsets) offsets.insert({o.y, o.x});
  std::array<Vec2, 5> doms{Vec2{0, 0}, sh.period_nu, -sh.period_nu,
                           sh.period_mu, -sh.period_mu};
  for (Vec2 c0 : sh.cells)
    for (Vec2 t : doms)
      for (Vec2 c : sh.cells) {
        Vec2 rel = t + c - c0;
        reach = std::max(reach, std::llabs(rel.x) + std::llabs(rel.y));
        CHECK(offsets.count({rel.y, rel.x}) == 1);
      }
  CHECK(red.rule.ex == reach);
  CHECK(red.rule.ey == reach);
}

TEST_CASE("rule agrees with the restated guard on arbitrary configurations") {
  std::mt19937 rng(77);
  ReductionCA unit = unit_reduction(singleton_tau());
  for (int trial = 0; trial < 10; ++trial) {
    TorusConfig2D cfg = random_config(unit, 4, 4, rng);
    CHECK(apply_2d(unit.rule, cfg) == reference_step(unit, cfg));
  }

  const ReductionCA& red = hierarchy_reduction();
  for (int trial = 0; trial < 4; ++trial) {
    TorusConfig2D cfg = random_config(red, 5, 5, rng);
    CHECK(apply_2d(red.rule, cfg) == reference_step(red, cfg));
  }

  auto k = static_cast<int>(red.K.shape.cells.size());
  for (std::size_t b = 0; b < red.K.base.tiles.size(); b += 9) {
    TorusConfig2D cfg = make_torus(red.rule.alphabet, 3, 3);
    for (int j = 0; j < k; ++j) {
      Vec2 c = red.K.shape.cells[static_cast<std::size_t>(j)];
      cfg.cell(((c.x % 3) + 3) % 3, ((c.y % 3) + 3) % 3) =
          red.encode(red.K.macro_map[b][static_cast<std::size_t>(j)], 0, 1);
    }
    CHECK(apply_2d(red.rule, cfg) == reference_step(red, cfg));
  }
}

TEST_CASE("tile layers survive every step") {
  std::mt19937 rng(5150);
  const ReductionCA& red = hierarchy_reduction();
  for (int trial = 0; trial < 4; ++trial) {
    TorusConfig2D cfg = random_config(red, 6, 6, rng);
    TorusConfig2D img = apply_2d(red.rule, cfg);
    for (std::size_t i = 0; i < cfg.cells.size(); ++i) {
      CHECK(red.k_layer(img.cells[i]) == red.k_layer(cfg.cells[i]));
      CHECK(red.tau_layer(img.cells[i]) == red.tau_layer(cfg.cells[i]));
    }
  }
}

TEST_CASE("rule only reads the five-macro window") {
  ReductionCA red = unit_reduction(singleton_tau());
  TorusConfig2D a = make_torus(red.rule.alphabet, 5, 5);
  TorusConfig2D b = a;
  b.cell(0, 0) = red.encode(0, 0, 1);
  TorusConfig2D ia = apply_2d(red.rule, a);
  TorusConfig2D ib = apply_2d(red.rule, b);
  for (long long y = 0; y < 5; ++y)
    for (long long x = 0; x < 5; ++x) {
      long long dx = std::min(x, 5 - x);
      long long dy = std::min(y, 5 - y);
      if (dx + dy > 1) CHECK(ia.cell(x, y) == ib.cell(x, y));
    }
}

namespace {

void check_witness_shape(const ReductionCA& red, const WitnessPair& w,
                         const AnchoredPattern& ap) {
  auto k = red.K.shape.cells.size();
  long long side = ap.pattern.side;
  REQUIRE(w.pair.domain.size() == static_cast<std::size_t>(side * side) * k);
  std::size_t diffs = 0;
  for (std::size_t i = 0; i < w.pair.domain.size(); ++i) {
    CHECK(red.k_layer(w.pair.a_vals[i]) == red.k_layer(w.pair.b_vals[i]));
    CHECK(red.tau_layer(w.pair.a_vals[i]) == red.tau_layer(w.pair.b_vals[i]));
    CHECK(red.bit_layer(w.pair.a_vals[i]) == 0);
    auto local = i / k;
    bool expect_diff = ap.region[local] == ap.region[0];
    CHECK((w.pair.a_vals[i] != w.pair.b_vals[i]) == expect_diff);
    if (expect_diff) ++diffs;
  }
  CHECK(diffs % k == 0);
  CHECK(diffs > 0);
  CHECK(w.core.w >= 9);
  CHECK(w.core.h >= 9);
}

}  // namespace

TEST_CASE("mu witness cancels its one-sided difference in one step") {
  const ReductionCA& red = hierarchy_reduction();
  WitnessPair w = build_witness(red, WitnessKind::MuAsymptotic);
  CHECK(w.kind == WitnessKind::MuAsymptotic);
  REQUIRE(w.split_lines.size() == 1);
  CHECK(w.split_lines[0].dir == red.K.shape.nu);
  check_witness_shape(red, w, red.south_mid);

  CHECK(check_equal_image(red, w.pair, w.core));
  Vec2 cc{w.core.x0 + w.core.w / 2, w.core.y0 + w.core.h / 2};
  for (auto [ww, wh] : {std::pair{1LL, 1LL}, {3LL, 2LL}, {5LL, 8LL}, {8LL, 8LL}})
    CHECK(check_equal_image(red, w.pair, Rect::centered(cc, ww, wh)));

  PairTrace tr = evolve_pair(red.rule, w.pair, w.core, 1, global_budget());
  CHECK(tr.equal_final);
  const Grid2D& fa = tr.a.back();
  const Grid2D& fb = tr.b.back();
  for (long long y = w.core.y0; y < w.core.y0 + w.core.h; ++y)
    for (long long x = w.core.x0; x < w.core.x0 + w.core.w; ++x) {
      CHECK(red.bit_layer(fa.at({x, y})) == 0);
      CHECK(red.bit_layer(fb.at({x, y})) == 0);
    }
}

TEST_CASE("nu-mu witness splits along both periods and cancels") {
  const ReductionCA& red = hierarchy_reduction();
  WitnessPair w = build_witness(red, WitnessKind::NuMuAsymptotic);
  CHECK(w.kind == WitnessKind::NuMuAsymptotic);
  REQUIRE(w.split_lines.size() == 2);
  CHECK(w.split_lines[0].dir == red.K.shape.nu);
  CHECK(w.split_lines[1].dir == red.K.shape.mu);
  check_witness_shape(red, w, red.center);
  CHECK(check_equal_image(red, w.pair, w.core));
}

TEST_CASE("corrupting the hierarchy layer at a difference breaks cancellation") {
  const ReductionCA& red = hierarchy_reduction();
  WitnessPair w = build_witness(red, WitnessKind::MuAsymptotic);
  auto n_k = static_cast<int>(red.K.tiles.tiles.size());
  auto k = static_cast<int>(red.K.shape.cells.size());
  for (std::size_t i = 0; i < w.pair.domain.size(); ++i) {
    if (w.pair.a_vals[i] == w.pair.b_vals[i]) continue;
    if (!w.core.contains(w.pair.domain[i])) continue;
    int kid = red.k_layer(w.pair.a_vals[i]);
    int other = (kid + k) % n_k;
    int tau = red.tau_layer(w.pair.a_vals[i]);
    AsymptoticPair2D broken = w.pair;
    broken.a_vals[i] = red.encode(other, tau, 0);
    broken.b_vals[i] = red.encode(other, tau, 1);
    CHECK_FALSE(check_equal_image(red, broken, Rect::centered(w.pair.domain[i], 1, 1)));
    return;
  }
  FAIL("no difference cell inside the core");
}

TEST_CASE("a macro-tile with mixed bits keeps them all") {
  const ReductionCA& red = hierarchy_reduction();
  WitnessPair w = build_witness(red, WitnessKind::MuAsymptotic);
  AsymptoticPair2D mixed = w.pair;
  mixed.b_vals = mixed.a_vals;
  std::size_t x0 = 0;
  bool found = false;
  for (std::size_t i = 0; i < mixed.domain.size() && !found; ++i)
    if (w.core.contains(mixed.domain[i])) {
      x0 = i;
      found = true;
    }
  REQUIRE(found);
  mixed.b_vals[x0] = mixed.a_vals[x0] ^ 1;
  Rect spot = Rect::centered(mixed.domain[x0], 1, 1);
  CHECK_FALSE(check_equal_image(red, mixed, spot));
  PairTrace tr = evolve_pair(red.rule, mixed, spot, 1, global_budget());
  CHECK(red.bit_layer(tr.a.back().at(mixed.domain[x0])) == 0);
  CHECK(red.bit_layer(tr.b.back().at(mixed.domain[x0])) == 1);
}

TEST_CASE("a user-layer clash at a difference breaks cancellation") {
  ReductionCA red = build_reduction(checker_tau(), {0, 1}, {1, 0}, 2);
  WitnessPair w = build_witness(red, WitnessKind::MuAsymptotic);
  CHECK(check_equal_image(red, w.pair, w.core));
  for (std::size_t i = 0; i < w.pair.domain.size(); ++i) {
    if (w.pair.a_vals[i] == w.pair.b_vals[i]) continue;
    if (!w.core.contains(w.pair.domain[i])) continue;
    int kid = red.k_layer(w.pair.a_vals[i]);
    int tau = 1 - red.tau_layer(w.pair.a_vals[i]);
    AsymptoticPair2D broken = w.pair;
    broken.a_vals[i] = red.encode(kid, tau, 0);
    broken.b_vals[i] = red.encode(kid, tau, 1);
    CHECK_FALSE(check_equal_image(red, broken, Rect::centered(w.pair.domain[i], 1, 1)));
    return;
  }
  FAIL("no difference cell inside the core");
}

TEST_CASE("construction and witness errors carry the right codes") {
  TileSet base = make_tileset({arrow(0, 9, 9, 9, 9, TileSide::N)});
  StretchedTileSet sts = stretch_tileset(base, unit_shape());

  try {
    build_reduction(make_tileset({}), sts);
    FAIL("empty user tile set unexpectedly accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_argument);
  }

  TileSet undirected = make_tileset({plain(0, 9, 9, 9, 9)});
  try {
    build_reduction(singleton_tau(), stretch_tileset(undirected, unit_shape()));
    FAIL("undirected hierarchy tile unexpectedly accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_argument);
  }

  try {
    build_reduction(singleton_tau(), {0, 1}, {1, 0}, 2, 64);
    FAIL("state cap unexpectedly ignored");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::cap_exceeded);
  }

  try {
    build_witness(unit_reduction(singleton_tau()), WitnessKind::MuAsymptotic);
    FAIL("witness without anchored patterns unexpectedly built");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_argument);
  }

  ReductionCA clash = build_reduction(clashing_tau(), {0, 1}, {1, 0}, 2);
  try {
    build_witness(clash, WitnessKind::MuAsymptotic);
    FAIL("witness over untileable user tiles unexpectedly built");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::incompatible);
  }

  ReductionCA unit = unit_reduction(singleton_tau());
  AsymptoticPair2D same{make_torus(unit.rule.alphabet, 2, 2),
                        {{0, 0}},
                        {unit.encode(0, 0, 1)},
                        {unit.encode(0, 0, 1)},
                        Vec2{1, 0},
                        1};
  CHECK_THROWS_AS(check_equal_image(unit, same, Rect{0, 0, 2, 2}), Error);
}

TEST_CASE("probe pairs complementary bit layers over the one-cell shape") {
  ReductionCA red = unit_reduction(singleton_tau());
  ProbeBounds bounds;
  bounds.p = 2;
  bounds.q = 2;
  ProbeReport rep = bounded_closing_probe(red, bounds);
  CHECK(rep.w == 2);
  CHECK(rep.h == 2);
  CHECK(rep.k_layers == 1);
  CHECK(rep.tau_layers == 1);
  CHECK(rep.fallback_tau_layers == 0);
  CHECK(rep.bit_layers == 16);
  CHECK_FALSE(rep.capped);
  CHECK(rep.equal_image_pairs == 24);
  CHECK(rep.witnesses == 24);
  REQUIRE(rep.example.has_value());
  CHECK(rep.example->differences_valid);
  CHECK(rep.example->a.cells != rep.example->b.cells);
  CHECK(apply_2d(red.rule, rep.example->a) == apply_2d(red.rule, rep.example->b));
}

TEST_CASE("probe finds nothing when the user tiles cannot tile") {
  ReductionCA red = unit_reduction(clashing_tau());
  ProbeBounds bounds;
  bounds.p = 2;
  bounds.q = 2;
  ProbeReport rep = bounded_closing_probe(red, bounds);
  CHECK(rep.tau_layers == 0);
  CHECK(rep.fallback_tau_layers == 1);
  CHECK(rep.equal_image_pairs == 0);
  CHECK(rep.witnesses == 0);
  CHECK_FALSE(rep.example.has_value());
}

TEST_CASE("probe rejects tori above its cell cap") {
  ReductionCA red = unit_reduction(singleton_tau());
  ProbeBounds bounds;
  bounds.p = 5000;
  bounds.q = 1;
  try {
    bounded_closing_probe(red, bounds);
    FAIL("oversized probe torus unexpectedly accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::cap_exceeded);
  }
}
