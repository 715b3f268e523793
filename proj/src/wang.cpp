#include "calab/wang.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace calab {

namespace {

long long wrap(long long v, long long m) {
  long long r = v % m;
  return r < 0 ? r + m : r;
}

// Index of the tile at (x, y) in the search's id-sorted candidate order, or
// -1 while unplaced.
struct SearchState {
  const TileSet& ts;
  std::vector<std::size_t> order;  // tile indices sorted by id
  long long w, h;
  bool torus;
  std::vector<int> chosen;

  SearchState(const TileSet& set, long long width, long long height, bool wrap_edges)
      : ts(set), w(width), h(height), torus(wrap_edges),
        chosen(static_cast<std::size_t>(width * height), -1) {
    order.resize(ts.tiles.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return ts.tiles[a].id < ts.tiles[b].id;
    });
  }

  const Tile& placed(long long x, long long y) const {
    return ts.tiles[order[static_cast<std::size_t>(
        chosen[static_cast<std::size_t>(y * w + x)])]];
  }

  bool fits(long long x, long long y, const Tile& cand) const {
    if (x > 0 && placed(x - 1, y).color(TileSide::E) != cand.color(TileSide::W))
      return false;
    if (y > 0 && placed(x, y - 1).color(TileSide::N) != cand.color(TileSide::S))
      return false;
    if (torus) {
      if (x == w - 1) {
        const Tile& west_end = w == 1 ? cand : placed(0, y);
        if (cand.color(TileSide::E) != west_end.color(TileSide::W)) return false;
      }
      if (y == h - 1) {
        const Tile& south_end = h == 1 ? cand : placed(x, 0);
        if (cand.color(TileSide::N) != south_end.color(TileSide::S)) return false;
      }
    }
    return true;
  }
};

TilingSearch run_search(const TileSet& ts, long long w, long long h, bool torus,
                        std::uint64_t node_cap) {
  if (w < 1 || h < 1) fail(Errc::invalid_argument, "domain sides must be positive");
  TilingSearch out;
  if (ts.tiles.empty()) {
    out.outcome = SearchOutcome::Exhausted;
    return out;
  }
  SearchState st(ts, w, h, torus);
  long long total = w * h;
  long long pos = 0;
  while (true) {
    std::size_t cell = static_cast<std::size_t>(pos);
    int next = st.chosen[cell] + 1;
    st.chosen[cell] = -1;
    bool advanced = false;
    for (std::size_t i = static_cast<std::size_t>(next); i < st.order.size(); ++i) {
      if (++out.nodes > node_cap) {
        out.outcome = SearchOutcome::Unknown;
        return out;
      }
      long long x = pos % w, y = pos / w;
      if (st.fits(x, y, ts.tiles[st.order[i]])) {
        st.chosen[cell] = static_cast<int>(i);
        advanced = true;
        break;
      }
    }
    if (advanced) {
      if (++pos == total) {
        Tiling t;
        t.kind = torus ? DomainKind::Torus : DomainKind::Rectangle;
        t.w = w;
        t.h = h;
        t.cells.resize(static_cast<std::size_t>(total));
        for (long long c = 0; c < total; ++c)
          t.cells[static_cast<std::size_t>(c)] =
              ts.tiles[st.order[static_cast<std::size_t>(st.chosen[static_cast<std::size_t>(c)])]].id;
        t.valid = true;
        out.outcome = SearchOutcome::Found;
        out.tiling = std::move(t);
        return out;
      }
    } else {
      if (pos == 0) {
        out.outcome = SearchOutcome::Exhausted;
        return out;
      }
      --pos;
    }
  }
}

int trailing_zeros(long long v) {
  int n = 0;
  while ((v & 1) == 0) {
    v >>= 1;
    ++n;
  }
  return n;
}

// Serpentine over rows ya..yb, the first row walked from xa to xb, direction
// alternating per row. Ranges may run in either order.
std::vector<Vec2> snake_rows(long long xa, long long xb, long long ya, long long yb) {
  std::vector<Vec2> out;
  long long dy = yb >= ya ? 1 : -1;
  bool forward = true;
  for (long long y = ya;; y += dy) {
    long long x0 = forward ? xa : xb;
    long long x1 = forward ? xb : xa;
    long long dx = x1 >= x0 ? 1 : -1;
    for (long long x = x0;; x += dx) {
      out.push_back({x, y});
      if (x == x1) break;
    }
    forward = !forward;
    if (y == yb) break;
  }
  return out;
}

// Serpentine over columns xa..xb, the first column walked from ya to yb.
std::vector<Vec2> snake_cols(long long xa, long long xb, long long ya, long long yb) {
  std::vector<Vec2> out;
  long long dx = xb >= xa ? 1 : -1;
  bool forward = true;
  for (long long x = xa;; x += dx) {
    long long y0 = forward ? ya : yb;
    long long y1 = forward ? yb : ya;
    long long dy = y1 >= y0 ? 1 : -1;
    for (long long y = y0;; y += dy) {
      out.push_back({x, y});
      if (y == y1) break;
    }
    forward = !forward;
    if (x == xb) break;
  }
  return out;
}

TileSide step_side(Vec2 from, Vec2 to) {
  Vec2 d = to - from;
  if (d == Vec2{0, 1}) return TileSide::N;
  if (d == Vec2{0, -1}) return TileSide::S;
  if (d == Vec2{1, 0}) return TileSide::E;
  if (d == Vec2{-1, 0}) return TileSide::W;
  fail(Errc::internal, "path step is not a unit step");
}

TileSide exit_side(Vec2 p, long long side) {
  if (p.x == side - 1) return TileSide::E;
  if (p.y == side - 1) return TileSide::N;
  if (p.x == 0) return TileSide::W;
  if (p.y == 0) return TileSide::S;
  fail(Errc::internal, "path ends off the boundary");
}

}  // namespace

Vec2 side_step(TileSide s) {
  switch (s) {
    case TileSide::N: return {0, 1};
    case TileSide::S: return {0, -1};
    case TileSide::E: return {1, 0};
    case TileSide::W: return {-1, 0};
  }
  fail(Errc::internal, "bad side");
}

const Tile& TileSet::tile(int id) const {
  for (const Tile& t : tiles)
    if (t.id == id) return t;
  fail(Errc::invalid_argument, "unknown tile id");
}

TileSet make_tileset(std::vector<Tile> tiles) {
  std::unordered_set<int> ids;
  std::unordered_set<Color> colors;
  for (const Tile& t : tiles) {
    if (!ids.insert(t.id).second) fail(Errc::invalid_argument, "duplicate tile id");
    for (Color c : t.colors) colors.insert(c);
  }
  TileSet ts;
  ts.tiles = std::move(tiles);
  ts.palette.assign(colors.begin(), colors.end());
  std::sort(ts.palette.begin(), ts.palette.end());
  return ts;
}

TilingCheck check_tiling(const TileSet& ts, const Tiling& t) {
  if (t.w < 1 || t.h < 1 || t.cells.size() != static_cast<std::size_t>(t.w * t.h))
    fail(Errc::invalid_argument, "tiling domain does not match its assignment");
  std::unordered_map<int, const Tile*> by_id;
  for (const Tile& tile : ts.tiles) by_id[tile.id] = &tile;
  auto lookup = [&](long long x, long long y) -> const Tile& {
    auto it = by_id.find(t.at(x, y));
    if (it == by_id.end()) fail(Errc::invalid_argument, "unknown tile id");
    return *it->second;
  };
  bool torus = t.kind == DomainKind::Torus;
  for (long long y = 0; y < t.h; ++y)
    for (long long x = 0; x < t.w; ++x) {
      const Tile& own = lookup(x, y);
      if (x + 1 < t.w || torus) {
        const Tile& east = lookup(wrap(x + 1, t.w), y);
        if (own.color(TileSide::E) != east.color(TileSide::W))
          return {false,
                  EdgeViolation{{x, y}, TileSide::E, own.color(TileSide::E),
                                east.color(TileSide::W)}};
      }
      if (y + 1 < t.h || torus) {
        const Tile& north = lookup(x, wrap(y + 1, t.h));
        if (own.color(TileSide::N) != north.color(TileSide::S))
          return {false,
                  EdgeViolation{{x, y}, TileSide::N, own.color(TileSide::N),
                                north.color(TileSide::S)}};
      }
    }
  return {true, std::nullopt};
}

TilingSearch tiles_square(const TileSet& ts, long long n, std::uint64_t node_cap) {
  return run_search(ts, n, n, false, node_cap);
}

TilingSearch tiles_torus(const TileSet& ts, long long p, long long q,
                         std::uint64_t node_cap) {
  return run_search(ts, p, q, true, node_cap);
}

PathTrace follow_path(const TileSet& ts, const Tiling& t, Vec2 start,
                      std::uint64_t max_steps) {
  Rect dom{0, 0, t.w, t.h};
  if (!dom.contains(start)) fail(Errc::invalid_argument, "start cell outside the domain");
  PathTrace out;
  std::unordered_set<long long> seen;
  Vec2 p = start;
  for (std::uint64_t step = 0;; ++step) {
    out.cells.push_back(p);
    seen.insert(p.y * t.w + p.x);
    if (step == max_steps) {
      out.truncated = true;
      return out;
    }
    const Tile& tile = ts.tile(t.at(p.x, p.y));
    if (!tile.direction) fail(Errc::invalid_argument, "undirected tile on the path");
    Vec2 next = p + side_step(*tile.direction);
    if (t.kind == DomainKind::Torus) {
      next = {wrap(next.x, t.w), wrap(next.y, t.h)};
    } else if (!dom.contains(next)) {
      out.left_domain = true;
      return out;
    }
    if (seen.count(next.y * t.w + next.x)) {
      out.cycle = true;
      return out;
    }
    p = next;
  }
}

HierarchicalPattern generate_hierarchy(int step, Anchor anchor, std::uint64_t cell_cap) {
  if (step < 1) fail(Errc::invalid_argument, "step must be at least 1");
  if (step > 30) fail(Errc::cap_exceeded, "hierarchy side overflows");
  long long side = (1LL << (step + 1)) - 1;
  if (static_cast<std::uint64_t>(side) * side > cell_cap)
    fail(Errc::cap_exceeded, "hierarchy exceeds the cell budget");
  long long half = (side - 1) / 2;

  HierarchicalPattern h;
  h.step = step;
  h.side = side;
  h.anchor = anchor;
  switch (anchor) {
    case Anchor::SWCorner: h.origin = {0, 0}; break;
    case Anchor::SouthMid: h.origin = {-half, 0}; break;
    case Anchor::EastMid: h.origin = {-(side - 1), -half}; break;
    case Anchor::Center: h.origin = {-half, -half}; break;
  }
  h.cells.resize(static_cast<std::size_t>(side * side));
  // A cell sits on the vertical (resp. horizontal) middle line of the
  // smallest enclosing sub-square whose level is the number of trailing
  // binary ones of its x (resp. y) coordinate.
  for (long long y = 0; y < side; ++y) {
    int ly = trailing_zeros(y + 1);
    for (long long x = 0; x < side; ++x) {
      int lx = trailing_zeros(x + 1);
      CellLabel label = CellLabel::Blank;
      if (lx > ly) label = CellLabel::ArmV;
      else if (ly > lx) label = CellLabel::ArmH;
      else if (lx > 0) label = CellLabel::Center;
      h.cells[static_cast<std::size_t>(y * side + x)] = label;
    }
  }
  return h;
}

DirectedPattern attach_space_filling_path(const HierarchicalPattern& h) {
  long long s = h.side;
  long long half = (s - 1) / 2;
  std::vector<std::vector<Vec2>> paths;
  switch (h.anchor) {
    case Anchor::SWCorner:
      paths.push_back(snake_rows(0, s - 1, 0, s - 1));
      break;
    case Anchor::SouthMid:
      // The vertical arm joins the east half.
      paths.push_back(snake_cols(half, s - 1, 0, s - 1));
      paths.push_back(snake_cols(half - 1, 0, 0, s - 1));
      break;
    case Anchor::EastMid:
      // The horizontal arm joins the north half.
      paths.push_back(snake_rows(s - 1, 0, half, s - 1));
      paths.push_back(snake_rows(s - 1, 0, half - 1, 0));
      break;
    case Anchor::Center: {
      // NE takes the north arm and the center cell, SE the east arm, SW the
      // south arm, NW the west arm.
      std::vector<Vec2> ne;
      for (long long y = half; y < s; ++y) ne.push_back({half, y});
      for (Vec2 p : snake_cols(half + 1, s - 1, s - 1, half + 1)) ne.push_back(p);
      paths.push_back(std::move(ne));
      paths.push_back(snake_rows(half + 1, s - 1, half, 0));
      paths.push_back(snake_rows(half, 0, half - 1, 0));
      paths.push_back(snake_cols(half - 1, 0, half, s - 1));
      break;
    }
  }

  DirectedPattern out;
  out.pattern = h;
  out.dirs.resize(h.cells.size());
  for (const std::vector<Vec2>& path : paths) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      out.dirs[static_cast<std::size_t>(path[i].y * s + path[i].x)] =
          step_side(path[i], path[i + 1]);
    Vec2 last = path.back();
    out.dirs[static_cast<std::size_t>(last.y * s + last.x)] = exit_side(last, s);
  }
  out.paths = std::move(paths);
  return out;
}

WangifiedPattern wangify(const DirectedPattern& p) {
  const HierarchicalPattern& h = p.pattern;
  long long s = h.side;
  constexpr int kOut = 4;
  auto label = [&](long long x, long long y) -> int {
    if (x < 0 || x >= s || y < 0 || y >= s) return kOut;
    return static_cast<int>(h.at(x, y));
  };
  // Horizontal edges read (west label, east label), vertical edges
  // (south label, north label).
  auto edge = [](int a, int b) { return static_cast<Color>(a * 5 + b); };

  std::map<std::tuple<std::array<Color, 4>, TileSide>, int> classes;
  std::vector<Tile> tiles;
  Tiling tiling;
  tiling.kind = DomainKind::Rectangle;
  tiling.w = s;
  tiling.h = s;
  tiling.cells.resize(static_cast<std::size_t>(s * s));
  for (long long y = 0; y < s; ++y)
    for (long long x = 0; x < s; ++x) {
      int own = label(x, y);
      std::array<Color, 4> colors{};
      colors[static_cast<std::size_t>(TileSide::N)] = edge(own, label(x, y + 1));
      colors[static_cast<std::size_t>(TileSide::S)] = edge(label(x, y - 1), own);
      colors[static_cast<std::size_t>(TileSide::E)] = edge(own, label(x + 1, y));
      colors[static_cast<std::size_t>(TileSide::W)] = edge(label(x - 1, y), own);
      TileSide dir = p.dirs[static_cast<std::size_t>(y * s + x)];
      auto [it, fresh] = classes.try_emplace({colors, dir}, static_cast<int>(tiles.size()));
      if (fresh) tiles.push_back(Tile{it->second, colors, dir});
      tiling.cells[static_cast<std::size_t>(y * s + x)] = it->second;
    }
  tiling.valid = true;
  WangifiedPattern out;
  out.tiles = make_tileset(std::move(tiles));
  out.tiling = std::move(tiling);
  return out;
}

}  // namespace calab
