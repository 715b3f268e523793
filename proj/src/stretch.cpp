#include "calab/stretch.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <tuple>
#include <utility>

namespace calab {

namespace {

long long floor_div(long long a, long long b) {
  if (b < 0) { a = -a; b = -b; }
  long long q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}

long long floor_mod(long long a, long long b) { return a - floor_div(a, b) * b; }

TileSide opposite(TileSide s) {
  switch (s) {
    case TileSide::N: return TileSide::S;
    case TileSide::S: return TileSide::N;
    case TileSide::E: return TileSide::W;
    case TileSide::W: return TileSide::E;
  }
  fail(Errc::internal, "bad side");
}

// Cells met while walking (0,0) -> (a,b) with a,b > 0. Corners claim the
// diagonal-next cell, the far endpoint included.
std::vector<Vec2> sweep_positive(long long a, long long b) {
  std::vector<Vec2> cells{{0, 0}};
  long long cx = 0, cy = 0;
  while (!(cx == a && cy == b)) {
    long long vx = (cx + 1) * b;
    long long vy = (cy + 1) * a;
    if (vx < vy) {
      ++cx;
    } else if (vy < vx) {
      ++cy;
    } else {
      ++cx;
      ++cy;
    }
    cells.push_back({cx, cy});
  }
  return cells;
}

using CellKey = std::pair<long long, long long>;  // (y, x)
using CellSet = std::set<CellKey>;

CellKey key_of(Vec2 c) { return {c.y, c.x}; }
Vec2 vec_of(CellKey k) { return {k.second, k.first}; }

// One family of parallel staircases: the rasterized line through the origin
// with direction w, repeated with period w. member() tells whether a cell
// lies on the staircase or beyond it on the side the companion u points to.
struct Strip {
  Vec2 w;
  bool shallow = true;
  bool low_bound = true;  // compare against lo (>=) instead of hi (<=)
  long long period = 1;
  std::vector<long long> lo, hi;

  Strip(Vec2 dir, Vec2 companion) {
    w = dir;
    if (w.x < 0 || (w.x == 0 && w.y < 0)) w = -w;
    shallow = std::llabs(w.x) >= std::llabs(w.y);
    period = shallow ? w.x : std::llabs(w.y);
    lo.assign(static_cast<std::size_t>(period), 0);
    hi.assign(static_cast<std::size_t>(period), 0);
    std::vector<bool> seen(static_cast<std::size_t>(period), false);
    std::vector<Vec2> staircase = rasterize(w).d_cells;
    std::vector<Vec2> all = staircase;
    for (Vec2 c : staircase) {
      all.push_back(c + w);
      all.push_back(c - w);
    }
    for (Vec2 c : all) {
      long long k, value;
      if (shallow) {
        if (c.x < 0 || c.x >= period) continue;
        k = c.x;
        value = c.y;
      } else {
        k = floor_mod(c.y, period);
        long long m = (c.y - k) / w.y;
        value = c.x - m * w.x;
      }
      auto i = static_cast<std::size_t>(k);
      if (!seen[i]) {
        seen[i] = true;
        lo[i] = hi[i] = value;
      } else {
        lo[i] = std::min(lo[i], value);
        hi[i] = std::max(hi[i], value);
      }
    }
    for (bool s : seen)
      if (!s) fail(Errc::internal, "staircase misses a period class");
    if (shallow) {
      low_bound = det(w, companion) > 0;
    } else {
      low_bound = (det(w, companion) > 0) == (w.y < 0);
    }
  }

  bool member(Vec2 c) const {
    long long k, m, value;
    if (shallow) {
      k = floor_mod(c.x, period);
      m = (c.x - k) / period;
      value = c.y - m * w.y;
    } else {
      k = floor_mod(c.y, period);
      m = (c.y - k) / w.y;
      value = c.x - m * w.x;
    }
    auto i = static_cast<std::size_t>(k);
    return low_bound ? value >= lo[i] : value <= hi[i];
  }
};

std::vector<CellSet> component_split(const CellSet& cells) {
  std::vector<CellSet> comps;
  CellSet rest = cells;
  while (!rest.empty()) {
    CellSet comp;
    std::vector<CellKey> queue{*rest.begin()};
    rest.erase(rest.begin());
    comp.insert(queue.front());
    while (!queue.empty()) {
      Vec2 c = vec_of(queue.back());
      queue.pop_back();
      for (Vec2 d : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}}) {
        auto it = rest.find(key_of(c + d));
        if (it != rest.end()) {
          comp.insert(*it);
          queue.push_back(*it);
          rest.erase(it);
        }
      }
    }
    comps.push_back(std::move(comp));
  }
  std::sort(comps.begin(), comps.end(), [](const CellSet& a, const CellSet& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return *a.begin() < *b.begin();
  });
  return comps;
}

// Lattice coefficients (p, q) with z in cells + p*nu + q*mu, if any.
bool solve_owner(Vec2 z, const CellSet& cells, Vec2 nu, Vec2 mu, Vec2* pq) {
  long long d = det(nu, mu);
  for (const CellKey& k : cells) {
    Vec2 delta = z - vec_of(k);
    long long pn = det(delta, mu);
    long long qn = det(nu, delta);
    if (pn % d == 0 && qn % d == 0) {
      *pq = {pn / d, qn / d};
      return true;
    }
  }
  return false;
}

constexpr Vec2 kDiagonals[4] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};

// The translates the domain touches must be the four lattice units plus at
// most one opposite diagonal pair.
bool neighbor_structure(const CellSet& cells, Vec2 nu, Vec2 mu,
                        std::set<CellKey>* offsets) {
  offsets->clear();
  for (const CellKey& k : cells) {
    Vec2 c = vec_of(k);
    for (Vec2 d : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}}) {
      Vec2 n = c + d;
      if (cells.count(key_of(n))) continue;
      Vec2 pq;
      if (!solve_owner(n, cells, nu, mu, &pq)) return false;
      offsets->insert(key_of(pq));
    }
  }
  for (Vec2 unit : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}})
    if (!offsets->count(key_of(unit))) return false;
  std::set<CellKey> extra = *offsets;
  for (Vec2 unit : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}})
    extra.erase(key_of(unit));
  if (extra.empty()) return true;
  if (extra.size() != 2) return false;
  Vec2 d = vec_of(*extra.begin());
  bool diagonal = false;
  for (Vec2 cand : kDiagonals) diagonal = diagonal || d == cand;
  return diagonal && extra.count(key_of(-d)) > 0;
}

// Move whole pinched-off components to an equivalent spot beside the main
// body until the domain is connected and its neighbor structure is the
// expected one. Depth-first over the candidate moves, first success wins.
bool repair_shape(CellSet& cells, Vec2 nu, Vec2 mu, int depth,
                  std::set<std::vector<CellKey>>& visited) {
  std::vector<CellKey> snapshot(cells.begin(), cells.end());
  if (!visited.insert(snapshot).second) return false;
  std::vector<CellSet> comps = component_split(cells);
  if (comps.size() == 1) {
    std::set<CellKey> offsets;
    return neighbor_structure(cells, nu, mu, &offsets);
  }
  if (depth >= 8) return false;
  static constexpr Vec2 kMoves[8] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                     {0, 1},   {1, -1}, {1, 0},  {1, 1}};
  const CellSet& main = comps.front();
  for (std::size_t ci = 1; ci < comps.size(); ++ci) {
    const CellSet& comp = comps[ci];
    for (Vec2 pq : kMoves) {
      Vec2 g = pq.x * nu + pq.y * mu;
      CellSet moved;
      bool clash = false;
      for (const CellKey& k : comp) moved.insert(key_of(vec_of(k) - g));
      for (const CellKey& k : moved)
        if (cells.count(k) && !comp.count(k)) clash = true;
      if (clash) continue;
      bool touches = false;
      for (const CellKey& k : moved)
        for (Vec2 d : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}})
          touches = touches || main.count(key_of(vec_of(k) + d)) > 0;
      if (!touches) continue;
      CellSet next = cells;
      for (const CellKey& k : comp) next.erase(k);
      for (const CellKey& k : moved) next.insert(k);
      if (repair_shape(next, nu, mu, depth + 1, visited)) {
        cells = std::move(next);
        return true;
      }
    }
  }
  return false;
}

int side_index(TileSide s) { return static_cast<int>(s); }

}  // namespace

Rasterization rasterize(Vec2 v) {
  if (v == Vec2{0, 0}) fail(Errc::invalid_argument, "rasterize: zero vector");
  Rasterization r;
  r.segment = v;
  if (v.y == 0) {
    if (v.x > 0)
      for (long long i = 0; i < v.x; ++i) r.d_cells.push_back({i, 0});
    else
      for (long long i = -1; i >= v.x; --i) r.d_cells.push_back({i, -1});
    r.upper = r.lower = r.d_cells;
    return r;
  }
  if (v.x == 0) {
    if (v.y > 0)
      for (long long j = 0; j < v.y; ++j) r.d_cells.push_back({-1, j});
    else
      for (long long j = -1; j >= v.y; --j) r.d_cells.push_back({0, j});
    r.upper = r.lower = r.d_cells;
    return r;
  }
  for (Vec2 c : sweep_positive(std::llabs(v.x), std::llabs(v.y))) {
    if (v.x < 0) c.x = -1 - c.x;
    if (v.y < 0) c.y = -1 - c.y;
    r.d_cells.push_back(c);
  }
  if (std::llabs(v.x) >= std::llabs(v.y)) {
    std::map<long long, std::pair<long long, long long>> cols;
    for (Vec2 c : r.d_cells) {
      auto it = cols.find(c.x);
      if (it == cols.end())
        cols[c.x] = {c.y, c.y};
      else {
        it->second.first = std::min(it->second.first, c.y);
        it->second.second = std::max(it->second.second, c.y);
      }
    }
    long long from = r.d_cells.front().x, to = r.d_cells.back().x;
    long long step = v.x > 0 ? 1 : -1;
    for (long long x = from; x != to + step; x += step) {
      r.lower.push_back({x, cols[x].first});
      r.upper.push_back({x, cols[x].second});
    }
  } else {
    std::map<long long, std::pair<long long, long long>> rows;
    for (Vec2 c : r.d_cells) {
      auto it = rows.find(c.y);
      if (it == rows.end())
        rows[c.y] = {c.x, c.x};
      else {
        it->second.first = std::min(it->second.first, c.x);
        it->second.second = std::max(it->second.second, c.x);
      }
    }
    long long from = r.d_cells.front().y, to = r.d_cells.back().y;
    long long step = v.y > 0 ? 1 : -1;
    for (long long y = from; y != to + step; y += step) {
      r.upper.push_back({rows[y].first, y});
      r.lower.push_back({rows[y].second, y});
    }
  }
  return r;
}

MacroShape build_shape(Vec2 nu, Vec2 mu, std::uint64_t cell_cap) {
  if (det(nu, mu) == 0)
    fail(Errc::invalid_argument, "build_shape: parallel directions");
  long long scale = 0;
  for (long long i = 1; i <= 64 && scale == 0; ++i) {
    Vec2 vs[4] = {{0, 0}, i * nu, i * mu, i * (nu + mu)};
    bool ok = true;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        Vec2 d = vs[a] - vs[b];
        ok = ok && std::max(std::llabs(d.x), std::llabs(d.y)) >= 3;
      }
    if (ok) scale = i;
  }
  if (scale == 0) fail(Errc::internal, "build_shape: no scale separates vertices");
  Vec2 snu = scale * nu, smu = scale * mu;
  auto area = static_cast<std::uint64_t>(std::llabs(det(snu, smu)));
  if (area > cell_cap) fail(Errc::cap_exceeded, "build_shape: domain too large");

  Strip along_mu(smu, snu);
  Strip along_nu(snu, smu);
  // The domain meets the parallelogram's bounding box for transversal
  // periods but can reach far outside it when the periods are nearly
  // parallel, so the window grows until it holds the full area.
  CellSet cells;
  for (long long margin = 3; margin <= 3072; margin *= 2) {
    cells.clear();
    long long xlo = std::min({0LL, snu.x, smu.x, snu.x + smu.x}) - margin;
    long long xhi = std::max({0LL, snu.x, smu.x, snu.x + smu.x}) + margin;
    long long ylo = std::min({0LL, snu.y, smu.y, snu.y + smu.y}) - margin;
    long long yhi = std::max({0LL, snu.y, smu.y, snu.y + smu.y}) + margin;
    for (long long y = ylo; y <= yhi; ++y)
      for (long long x = xlo; x <= xhi; ++x) {
        Vec2 c{x, y};
        if (along_mu.member(c) && !along_mu.member(c - snu) &&
            along_nu.member(c) && !along_nu.member(c - smu))
          cells.insert(key_of(c));
      }
    if (cells.size() == area) break;
  }
  if (cells.size() != area)
    fail(Errc::internal, "build_shape: strip domain has wrong area");

  std::set<CellKey> offsets;
  bool structured = component_split(cells).size() == 1 &&
                    neighbor_structure(cells, snu, smu, &offsets);
  if (!structured) {
    std::set<std::vector<CellKey>> visited;
    if (!repair_shape(cells, snu, smu, 0, visited))
      fail(Errc::incompatible,
           "build_shape: no connected domain with unit neighbors for " +
               format_vec(nu) + "," + format_vec(mu));
    neighbor_structure(cells, snu, smu, &offsets);
  }

  // Partition check on the smallest axis-aligned torus the lattice divides.
  long long wx = std::llabs(det(snu, smu)) / gcd_ll(snu.y, smu.y);
  long long wy = std::llabs(det(snu, smu)) / gcd_ll(snu.x, smu.x);
  if (static_cast<std::uint64_t>(wx) * static_cast<std::uint64_t>(wy) > 4 * cell_cap)
    fail(Errc::cap_exceeded, "build_shape: torus check too large");
  for (long long y = 0; y < wy; ++y)
    for (long long x = 0; x < wx; ++x) {
      Vec2 pq;
      if (!solve_owner({x, y}, cells, snu, smu, &pq))
        fail(Errc::internal, "build_shape: translates miss a torus cell");
    }

  MacroShape shape;
  shape.nu = nu;
  shape.mu = mu;
  shape.scale = scale;
  shape.period_nu = snu;
  shape.period_mu = smu;
  for (const CellKey& k : cells) shape.cells.push_back(vec_of(k));
  shape.neighbor_count = static_cast<int>(offsets.size());
  Vec2 diag{0, 0};
  for (Vec2 cand : kDiagonals)
    if (diag == Vec2{0, 0} && offsets.count(key_of(cand))) diag = cand;
  shape.extra = diag.x * snu + diag.y * smu;

  auto scan_border = [&](Vec2 pq) {
    std::vector<CellEdge> edges;
    for (const CellKey& k : cells) {
      Vec2 c = vec_of(k);
      for (TileSide s : {TileSide::N, TileSide::S, TileSide::E, TileSide::W}) {
        Vec2 n = c + side_step(s);
        if (cells.count(key_of(n))) continue;
        Vec2 owner;
        solve_owner(n, cells, snu, smu, &owner);
        if (owner == pq) edges.push_back({c, s});
      }
    }
    return edges;
  };
  auto derive_opposite = [&](const std::vector<CellEdge>& src, Vec2 g) {
    std::vector<CellEdge> out;
    for (const CellEdge& e : src)
      out.push_back({e.cell + side_step(e.side) - g, opposite(e.side)});
    return out;
  };
  auto check_match = [&](const std::vector<CellEdge>& derived, Vec2 pq) {
    std::vector<CellEdge> scanned = scan_border(pq);
    auto edge_key = [](const CellEdge& e) {
      return std::make_tuple(e.cell.y, e.cell.x, side_index(e.side));
    };
    std::set<std::tuple<long long, long long, int>> a, b;
    for (const CellEdge& e : derived) a.insert(edge_key(e));
    for (const CellEdge& e : scanned) b.insert(edge_key(e));
    if (a != b) fail(Errc::internal, "build_shape: opposite borders disagree");
  };

  shape.borders[side_index(TileSide::N)] = scan_border({1, 0});
  shape.borders[side_index(TileSide::E)] = scan_border({0, 1});
  auto& north = shape.borders[static_cast<std::size_t>(ShapeSide::N)];
  auto& east = shape.borders[static_cast<std::size_t>(ShapeSide::E)];
  auto& south = shape.borders[static_cast<std::size_t>(ShapeSide::S)];
  auto& west = shape.borders[static_cast<std::size_t>(ShapeSide::W)];
  south = derive_opposite(north, snu);
  west = derive_opposite(east, smu);
  check_match(south, {-1, 0});
  check_match(west, {0, -1});
  if (shape.neighbor_count == 6) {
    auto& r1 = shape.borders[static_cast<std::size_t>(ShapeSide::R1)];
    auto& r2 = shape.borders[static_cast<std::size_t>(ShapeSide::R2)];
    r1 = scan_border(diag);
    r2 = derive_opposite(r1, shape.extra);
    check_match(r2, -diag);
  }
  return shape;
}

ShapeOwner shape_owner(const MacroShape& shape, Vec2 z) {
  long long d = det(shape.period_nu, shape.period_mu);
  for (std::size_t i = 0; i < shape.cells.size(); ++i) {
    Vec2 delta = z - shape.cells[i];
    long long pn = det(delta, shape.period_mu);
    long long qn = det(shape.period_nu, delta);
    if (pn % d == 0 && qn % d == 0)
      return {pn / d, qn / d, static_cast<int>(i)};
  }
  fail(Errc::internal, "shape_owner: no translate of the shape contains " + format_vec(z));
}

StretchedTileSet stretch_tileset(const TileSet& base, const MacroShape& shape) {
  std::size_t k = shape.cells.size();
  std::size_t n = base.tiles.size();
  if (n == 0) fail(Errc::invalid_argument, "stretch_tileset: empty tile set");
  if (k * n > (std::size_t{1} << 20))
    fail(Errc::cap_exceeded, "stretch_tileset: too many tiles");

  std::map<CellKey, std::size_t> index;
  for (std::size_t i = 0; i < k; ++i) index[key_of(shape.cells[i])] = i;

  // Canonical interior edges: each counted once from its N or E endpoint.
  std::map<std::pair<std::size_t, int>, std::size_t> interior;
  for (std::size_t i = 0; i < k; ++i)
    for (TileSide s : {TileSide::N, TileSide::E}) {
      auto it = index.find(key_of(shape.cells[i] + side_step(s)));
      if (it != index.end()) {
        std::size_t ord = interior.size();
        interior[{i, side_index(s)}] = ord;
      }
    }

  std::map<std::pair<std::size_t, int>, std::pair<ShapeSide, std::size_t>> border_at;
  for (ShapeSide bs : {ShapeSide::N, ShapeSide::S, ShapeSide::E, ShapeSide::W,
                       ShapeSide::R1, ShapeSide::R2}) {
    const auto& edges = shape.border(bs);
    for (std::size_t j = 0; j < edges.size(); ++j)
      border_at[{index.at(key_of(edges[j].cell)), side_index(edges[j].side)}] = {bs, j};
  }

  Color next_color = 1;
  std::map<std::pair<Color, std::size_t>, Color> border_colors;
  auto border_color = [&](Color base_color, std::size_t j) {
    auto it = border_colors.find({base_color, j});
    if (it == border_colors.end())
      it = border_colors.insert({{base_color, j}, next_color++}).first;
    return it->second;
  };
  std::size_t interior_count = interior.size();

  StretchedTileSet sts;
  sts.base = base;
  sts.shape = shape;
  sts.neutral_color = 0;
  std::vector<Tile> tiles;
  sts.macro_map.assign(n, std::vector<int>(k, 0));
  Color interior_base = next_color;
  next_color += static_cast<Color>(n * interior_count);
  for (std::size_t b = 0; b < n; ++b) {
    const Tile& bt = base.tiles[b];
    for (std::size_t i = 0; i < k; ++i) {
      Tile t;
      t.id = static_cast<int>(b * k + i);
      t.direction = bt.direction;
      for (TileSide s : {TileSide::N, TileSide::S, TileSide::E, TileSide::W}) {
        auto nb = index.find(key_of(shape.cells[i] + side_step(s)));
        if (nb != index.end()) {
          std::pair<std::size_t, int> canon{i, side_index(s)};
          if (s == TileSide::S) canon = {nb->second, side_index(TileSide::N)};
          if (s == TileSide::W) canon = {nb->second, side_index(TileSide::E)};
          Color c = interior_base +
                    static_cast<Color>(b * interior_count + interior.at(canon));
          t.colors[static_cast<std::size_t>(s)] = c;
          continue;
        }
        auto [bs, j] = border_at.at({i, side_index(s)});
        switch (bs) {
          case ShapeSide::N:
            t.colors[static_cast<std::size_t>(s)] = border_color(bt.color(TileSide::N), j);
            break;
          case ShapeSide::S:
            t.colors[static_cast<std::size_t>(s)] = border_color(bt.color(TileSide::S), j);
            break;
          case ShapeSide::E:
            t.colors[static_cast<std::size_t>(s)] = border_color(bt.color(TileSide::E), j);
            break;
          case ShapeSide::W:
            t.colors[static_cast<std::size_t>(s)] = border_color(bt.color(TileSide::W), j);
            break;
          case ShapeSide::R1:
          case ShapeSide::R2:
            t.colors[static_cast<std::size_t>(s)] = sts.neutral_color;
            break;
        }
      }
      sts.macro_map[b][i] = t.id;
      tiles.push_back(t);
    }
  }
  sts.tiles = make_tileset(std::move(tiles));
  return sts;
}

std::uint64_t count_shape_assemblies(const StretchedTileSet& sts,
                                     std::uint64_t node_cap) {
  const auto& cells = sts.shape.cells;
  std::size_t k = cells.size();
  std::size_t n = sts.base.tiles.size();
  std::map<CellKey, std::size_t> index;
  for (std::size_t i = 0; i < k; ++i) index[key_of(cells[i])] = i;
  struct Link {
    std::size_t other;
    TileSide mine;
  };
  std::vector<std::vector<Link>> links(k);
  std::vector<std::vector<TileSide>> rim(k);
  for (std::size_t i = 0; i < k; ++i)
    for (TileSide s : {TileSide::N, TileSide::S, TileSide::E, TileSide::W}) {
      auto it = index.find(key_of(cells[i] + side_step(s)));
      if (it == index.end())
        rim[i].push_back(s);
      else if (it->second < i)
        links[i].push_back({it->second, s});
    }

  const auto& tiles = sts.tiles.tiles;
  std::uint64_t nodes = 0, found = 0;
  for (std::size_t b = 0; b < n; ++b) {
    std::vector<int> chosen(k, -1);  // candidate = cell whose tile is placed
    std::size_t pos = 0;
    while (true) {
      int next = chosen[pos] + 1;
      chosen[pos] = -1;
      bool advanced = false;
      for (std::size_t t = static_cast<std::size_t>(next); t < k; ++t) {
        if (++nodes > node_cap)
          fail(Errc::cap_exceeded, "count_shape_assemblies: node cap");
        const Tile& mine = tiles[b * k + t];
        const Tile& intended = tiles[b * k + pos];
        bool ok = true;
        // The outside of the arrangement must show the macro-tile border.
        for (TileSide s : rim[pos]) ok = ok && mine.color(s) == intended.color(s);
        for (const Link& l : links[pos]) {
          const Tile& other = tiles[b * k + static_cast<std::size_t>(chosen[l.other])];
          ok = ok && mine.color(l.mine) == other.color(opposite(l.mine));
        }
        if (!ok) continue;
        chosen[pos] = static_cast<int>(t);
        advanced = true;
        break;
      }
      if (advanced) {
        if (pos + 1 == k) {
          ++found;
          continue;  // stay at the last cell, try its next candidate
        }
        ++pos;
        continue;
      }
      if (pos == 0) break;
      --pos;
    }
  }
  return found;
}

std::uint64_t count_torus_tilings(const TileSet& ts, long long p, long long q,
                                  std::uint64_t node_cap) {
  if (p <= 0 || q <= 0) fail(Errc::invalid_argument, "count_torus_tilings: empty torus");
  auto cellcount = static_cast<std::size_t>(p * q);
  struct Link {
    std::size_t other;
    TileSide mine;
  };
  std::vector<std::vector<Link>> links(cellcount);
  std::vector<std::vector<Link>> self(cellcount);
  for (long long y = 0; y < q; ++y)
    for (long long x = 0; x < p; ++x) {
      auto i = static_cast<std::size_t>(y * p + x);
      for (TileSide s : {TileSide::N, TileSide::S, TileSide::E, TileSide::W}) {
        Vec2 d = side_step(s);
        auto j = static_cast<std::size_t>(floor_mod(y + d.y, q) * p +
                                          floor_mod(x + d.x, p));
        if (j == i)
          self[i].push_back({j, s});
        else if (j < i)
          links[i].push_back({j, s});
      }
    }

  const auto& tiles = ts.tiles;
  std::vector<int> chosen(cellcount, -1);
  std::uint64_t nodes = 0, found = 0;
  std::size_t pos = 0;
  while (true) {
    int next = chosen[pos] + 1;
    chosen[pos] = -1;
    bool advanced = false;
    for (std::size_t t = static_cast<std::size_t>(next); t < tiles.size(); ++t) {
      if (++nodes > node_cap)
        fail(Errc::cap_exceeded, "count_torus_tilings: node cap");
      bool ok = true;
      for (const Link& l : self[pos])
        ok = ok && tiles[t].color(l.mine) == tiles[t].color(opposite(l.mine));
      for (const Link& l : links[pos]) {
        const Tile& other = tiles[static_cast<std::size_t>(chosen[l.other])];
        ok = ok && tiles[t].color(l.mine) == other.color(opposite(l.mine));
      }
      if (!ok) continue;
      chosen[pos] = static_cast<int>(t);
      advanced = true;
      break;
    }
    if (advanced) {
      if (pos + 1 == cellcount) {
        ++found;
        continue;
      }
      ++pos;
      continue;
    }
    if (pos == 0) return found;
    --pos;
  }
}

bool verify_isomorphism(const TileSet& base, const StretchedTileSet& sts,
                        long long p, long long q, std::uint64_t node_cap) {
  if (p <= 0 || q <= 0) fail(Errc::invalid_argument, "verify_isomorphism: empty torus");
  std::uint64_t base_count = count_torus_tilings(base, p, q, node_cap);

  const MacroShape& shape = sts.shape;
  Vec2 A = p * shape.period_mu;  // east identification
  Vec2 B = q * shape.period_nu;  // north identification
  long long dl = det(A, B);
  auto torus_cells = static_cast<std::uint64_t>(std::llabs(dl));
  if (torus_cells > (std::uint64_t{1} << 20))
    fail(Errc::cap_exceeded, "verify_isomorphism: torus too large");

  auto lattice_owner = [&](Vec2 z) {
    long long px = 2 * z.x + 1, py = 2 * z.y + 1;
    long long s_num = px * B.y - py * B.x;
    long long t_num = A.x * py - A.y * px;
    return Vec2{floor_div(s_num, 2 * dl), floor_div(t_num, 2 * dl)};
  };
  auto reduce = [&](Vec2 z) {
    Vec2 st = lattice_owner(z);
    return z - st.x * A - st.y * B;
  };

  CellSet shape_cells;
  for (Vec2 c : shape.cells) shape_cells.insert(key_of(c));
  std::map<CellKey, std::size_t> shape_index;
  for (std::size_t i = 0; i < shape.cells.size(); ++i)
    shape_index[key_of(shape.cells[i])] = i;

  struct FCell {
    Vec2 pos;
    long long bx, by;       // base torus coordinates of the owning macro
    std::size_t cell_index; // position inside the shape
  };
  std::vector<FCell> fcells;
  long long xlo = std::min({0LL, A.x, B.x, A.x + B.x}) - 1;
  long long xhi = std::max({0LL, A.x, B.x, A.x + B.x}) + 1;
  long long ylo = std::min({0LL, A.y, B.y, A.y + B.y}) - 1;
  long long yhi = std::max({0LL, A.y, B.y, A.y + B.y}) + 1;
  for (long long y = ylo; y <= yhi; ++y)
    for (long long x = xlo; x <= xhi; ++x) {
      Vec2 z{x, y};
      if (lattice_owner(z) != Vec2{0, 0}) continue;
      Vec2 pq;
      if (!solve_owner(z, shape_cells, shape.period_nu, shape.period_mu, &pq))
        fail(Errc::internal, "verify_isomorphism: cell without macro owner");
      Vec2 local = z - pq.x * shape.period_nu - pq.y * shape.period_mu;
      fcells.push_back({z, floor_mod(pq.y, p), floor_mod(pq.x, q),
                        shape_index.at(key_of(local))});
    }
  if (fcells.size() != torus_cells)
    fail(Errc::internal, "verify_isomorphism: fundamental domain miscount");

  // Place macro by macro, walking each macro from its first cell so every
  // later cell has an interior edge to an earlier one.
  std::vector<std::size_t> order;
  std::map<std::pair<long long, long long>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < fcells.size(); ++i)
    groups[{fcells[i].by, fcells[i].bx}].push_back(i);
  for (auto& [coord, members] : groups) {
    std::map<std::size_t, std::size_t> by_cell;
    for (std::size_t i : members) by_cell[fcells[i].cell_index] = i;
    std::vector<std::size_t> queue{by_cell.begin()->second};
    std::set<std::size_t> seen{queue.front()};
    std::size_t head = 0;
    while (head < queue.size()) {
      std::size_t i = queue[head++];
      order.push_back(i);
      Vec2 local = shape.cells[fcells[i].cell_index];
      for (TileSide s : {TileSide::N, TileSide::S, TileSide::E, TileSide::W}) {
        auto it = shape_index.find(key_of(local + side_step(s)));
        if (it == shape_index.end()) continue;
        auto member = by_cell.find(it->second);
        if (member != by_cell.end() && !seen.count(member->second)) {
          seen.insert(member->second);
          queue.push_back(member->second);
        }
      }
    }
    if (seen.size() != members.size())
      fail(Errc::internal, "verify_isomorphism: macro split across the torus");
  }

  std::map<CellKey, std::size_t> pos_index;
  for (std::size_t i = 0; i < fcells.size(); ++i)
    pos_index[key_of(fcells[i].pos)] = i;
  std::vector<std::size_t> rank(fcells.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;

  struct Link {
    std::size_t other;
    TileSide mine;
  };
  std::vector<std::vector<Link>> links(order.size());
  std::vector<std::vector<TileSide>> self(order.size());
  for (std::size_t i = 0; i < fcells.size(); ++i)
    for (TileSide s : {TileSide::N, TileSide::S, TileSide::E, TileSide::W}) {
      Vec2 n = reduce(fcells[i].pos + side_step(s));
      std::size_t j = pos_index.at(key_of(n));
      if (j == i)
        self[rank[i]].push_back(s);
      else if (rank[j] < rank[i])
        links[rank[i]].push_back({j, s});
    }

  std::size_t k = shape.cells.size();
  const auto& tiles = sts.tiles.tiles;
  std::size_t n = base.tiles.size();
  std::vector<int> chosen(order.size(), -1);  // candidate = base tile index
  std::uint64_t nodes = 0, found = 0;
  std::size_t pos = 0;
  while (true) {
    int next = chosen[pos] + 1;
    chosen[pos] = -1;
    bool advanced = false;
    std::size_t ci = fcells[order[pos]].cell_index;
    for (std::size_t b = static_cast<std::size_t>(next); b < n; ++b) {
      if (++nodes > node_cap)
        fail(Errc::cap_exceeded, "verify_isomorphism: node cap");
      const Tile& mine = tiles[b * k + ci];
      bool ok = true;
      for (TileSide s : self[pos])
        ok = ok && mine.color(s) == mine.color(opposite(s));
      for (const Link& l : links[pos]) {
        std::size_t ob = static_cast<std::size_t>(chosen[rank[l.other]]);
        const Tile& other = tiles[ob * k + fcells[l.other].cell_index];
        ok = ok && mine.color(l.mine) == other.color(opposite(l.mine));
      }
      if (!ok) continue;
      chosen[pos] = static_cast<int>(b);
      advanced = true;
      break;
    }
    if (advanced) {
      if (pos + 1 == order.size()) {
        ++found;
        continue;
      }
      ++pos;
      continue;
    }
    if (pos == 0) break;
    --pos;
  }
  return found == base_count;
}

}  // namespace calab
