#include "calab/reduction.hpp"

#include <algorithm>
#include <cstdlib>
#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <tuple>
#include <unordered_map>
#include <utility>

namespace calab {

namespace {

long long floor_mod(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

TileSide opposite(TileSide s) {
  switch (s) {
    case TileSide::N: return TileSide::S;
    case TileSide::S: return TileSide::N;
    case TileSide::E: return TileSide::W;
    default: return TileSide::E;
  }
}

// Relative geometry of the five-macro-tile window, precomputed per cell
// index of the shape so rule evaluation is a flat scan.
struct GuardData {
  int k = 0;               // cells per macro-tile
  std::uint32_t n_base = 0;  // hierarchy base tiles
  std::uint32_t n_tau = 0;
  std::array<Vec2, 5> domains;  // own, +nu, -nu, +mu, -mu translates
  // [c0][d * k + j]: cell j of domain d, relative to the evaluated cell.
  std::vector<std::vector<Vec2>> reads;
  struct Adj {
    Vec2 a;
    bool east = false;  // b = a + (1,0); otherwise b = a + (0,1)
  };
  std::vector<std::vector<Adj>> adj;  // [c0], both cells inside the window
  std::vector<std::array<Color, 4>> k_colors;
  std::vector<std::array<Color, 4>> tau_colors;
  std::vector<int> base_dir;        // TileSide index per hierarchy base tile
  std::array<int, 4> pointed_domain{};  // TileSide index -> domain index
};

struct GuardOutcome {
  bool tiles_valid = false;
  bool bits_uniform = false;
  Sym out = 0;
};

// Reader maps a cell offset relative to the evaluated cell to its state.
template <typename Reader>
GuardOutcome run_guard(const GuardData& gd, Sym s, Reader&& at) {
  GuardOutcome r;
  r.out = s;
  auto k_of = [&](Sym v) { return (v >> 1) / gd.n_tau; };
  auto tau_of = [&](Sym v) { return (v >> 1) % gd.n_tau; };
  std::uint32_t k = static_cast<std::uint32_t>(gd.k);
  std::uint32_t c0 = k_of(s) % k;
  const std::vector<Vec2>& reads = gd.reads[c0];
  std::array<std::uint32_t, 5> bases{};
  std::array<Sym, 5> bits{};
  bool uniform = true;
  for (int d = 0; d < 5; ++d) {
    Sym s0 = at(reads[static_cast<std::size_t>(d) * k]);
    std::uint32_t kid0 = k_of(s0);
    if (kid0 % k != 0) return r;
    bases[static_cast<std::size_t>(d)] = kid0 / k;
    bits[static_cast<std::size_t>(d)] = s0 & 1;
    for (std::uint32_t j = 1; j < k; ++j) {
      Sym sj = at(reads[static_cast<std::size_t>(d) * k + j]);
      if (k_of(sj) != bases[static_cast<std::size_t>(d)] * k + j) return r;
      if ((sj & 1) != bits[static_cast<std::size_t>(d)]) uniform = false;
    }
  }
  for (const GuardData::Adj& e : gd.adj[c0]) {
    Sym sa = at(e.a);
    Sym sb = at(e.a + (e.east ? Vec2{1, 0} : Vec2{0, 1}));
    const std::array<Color, 4>& ka = gd.k_colors[k_of(sa)];
    const std::array<Color, 4>& kb = gd.k_colors[k_of(sb)];
    const std::array<Color, 4>& ta = gd.tau_colors[tau_of(sa)];
    const std::array<Color, 4>& tb = gd.tau_colors[tau_of(sb)];
    auto side = static_cast<std::size_t>(e.east ? TileSide::E : TileSide::N);
    auto oppo = static_cast<std::size_t>(e.east ? TileSide::W : TileSide::S);
    if (ka[side] != kb[oppo] || ta[side] != tb[oppo]) return r;
  }
  r.tiles_valid = true;
  r.bits_uniform = uniform;
  if (!uniform) return r;
  int pd = gd.pointed_domain[static_cast<std::size_t>(gd.base_dir[bases[0]])];
  if (bits[static_cast<std::size_t>(pd)]) r.out = s ^ 1;
  return r;
}

std::shared_ptr<GuardData> make_guard(const StretchedTileSet& K, const TileSet& tau) {
  auto gd = std::make_shared<GuardData>();
  const MacroShape& shape = K.shape;
  gd->k = static_cast<int>(shape.cells.size());
  gd->n_base = static_cast<std::uint32_t>(K.base.tiles.size());
  gd->n_tau = static_cast<std::uint32_t>(tau.tiles.size());
  gd->domains = {Vec2{0, 0}, shape.period_nu, -shape.period_nu, shape.period_mu,
                 -shape.period_mu};
  gd->pointed_domain = {1, 2, 3, 4};  // TileSide order N, S, E, W
  for (const Tile& t : K.tiles.tiles) gd->k_colors.push_back(t.colors);
  for (const Tile& t : tau.tiles) gd->tau_colors.push_back(t.colors);
  for (const Tile& t : K.base.tiles) {
    if (!t.direction)
      fail(Errc::invalid_argument, "every hierarchy tile must carry a direction");
    gd->base_dir.push_back(static_cast<int>(*t.direction));
  }
  std::size_t k = shape.cells.size();
  gd->reads.resize(k);
  gd->adj.resize(k);
  for (std::size_t c0 = 0; c0 < k; ++c0) {
    std::set<std::pair<long long, long long>> window;
    for (int d = 0; d < 5; ++d)
      for (std::size_t j = 0; j < k; ++j) {
        Vec2 rel = gd->domains[static_cast<std::size_t>(d)] + shape.cells[j] -
                   shape.cells[c0];
        gd->reads[c0].push_back(rel);
        window.insert({rel.y, rel.x});
      }
    for (const auto& [y, x] : window) {
      if (window.count({y, x + 1})) gd->adj[c0].push_back({{x, y}, true});
      if (window.count({y + 1, x})) gd->adj[c0].push_back({{x, y}, false});
    }
  }
  return gd;
}

struct WindowHash {
  std::size_t operator()(const std::vector<Sym>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (Sym s : v) {
      h ^= s;
      h *= 1099511628211ull;
    }
    return h;
  }
};

struct Memo {
  std::mutex mu;
  std::unordered_map<std::vector<Sym>, Sym, WindowHash> map;
};

constexpr std::size_t kMemoCap = std::size_t{1} << 15;

Rule2D make_reduction_rule(const StretchedTileSet& K, const TileSet& tau,
                           std::shared_ptr<GuardData> gd, std::uint32_t state_cap) {
  std::uint64_t states = std::uint64_t{2} * K.tiles.tiles.size() * tau.tiles.size();
  if (states > state_cap)
    fail(Errc::cap_exceeded, "state count " + std::to_string(states) +
                                 " exceeds cap " + std::to_string(state_cap));
  Alphabet a(static_cast<std::uint32_t>(states), state_cap);
  long long ext = 0;
  for (const std::vector<Vec2>& list : gd->reads)
    for (Vec2 rel : list) {
      long long l1 = std::llabs(rel.x) + std::llabs(rel.y);
      ext = std::max(ext, l1);
    }
  if (ext > 512) fail(Errc::cap_exceeded, "neighborhood extent above 512");
  int e = static_cast<int>(ext);
  Rule2D rule{a, Neigh2D::VonNeumann, e, e, von_neumann_offsets(e, e), {}, {}};
  long long stride = 2LL * e + 1;
  auto slots = std::make_shared<std::vector<int>>(
      static_cast<std::size_t>(stride * stride), -1);
  for (std::size_t i = 0; i < rule.offsets.size(); ++i) {
    Vec2 o = rule.offsets[i];
    (*slots)[static_cast<std::size_t>((o.y + e) * stride + (o.x + e))] =
        static_cast<int>(i);
  }
  int center = (*slots)[static_cast<std::size_t>(e * stride + e)];
  auto memo = std::make_shared<Memo>();
  rule.proc = [gd, slots, memo, center, e, stride](std::span<const Sym> w) -> Sym {
    std::vector<Sym> key(w.begin(), w.end());
    {
      std::lock_guard<std::mutex> lock(memo->mu);
      auto it = memo->map.find(key);
      if (it != memo->map.end()) return it->second;
    }
    auto at = [&](Vec2 rel) {
      int slot = (*slots)[static_cast<std::size_t>((rel.y + e) * stride + (rel.x + e))];
      return w[static_cast<std::size_t>(slot)];
    };
    Sym out = run_guard(*gd, w[static_cast<std::size_t>(center)], at).out;
    std::lock_guard<std::mutex> lock(memo->mu);
    if (memo->map.size() < kMemoCap) memo->map.emplace(std::move(key), out);
    return out;
  };
  return rule;
}

// Realizes the hierarchy pattern of one anchor over the shared tile pool,
// extending the pool with the tiles the pattern needs.
AnchoredPattern anchored_pattern(int step, Anchor anchor, std::vector<Tile>* pool) {
  HierarchicalPattern h = generate_hierarchy(step, anchor);
  DirectedPattern d = attach_space_filling_path(h);
  WangifiedPattern wp = wangify(d);
  std::map<std::tuple<Color, Color, Color, Color, int>, int> known;
  for (std::size_t i = 0; i < pool->size(); ++i) {
    const Tile& t = (*pool)[i];
    known[{t.colors[0], t.colors[1], t.colors[2], t.colors[3],
           static_cast<int>(*t.direction)}] = static_cast<int>(i);
  }
  std::vector<int> remap(wp.tiles.tiles.size());
  for (std::size_t i = 0; i < wp.tiles.tiles.size(); ++i) {
    const Tile& t = wp.tiles.tiles[i];
    std::tuple<Color, Color, Color, Color, int> key{
        t.colors[0], t.colors[1], t.colors[2], t.colors[3],
        static_cast<int>(*t.direction)};
    auto [it, fresh] = known.try_emplace(key, static_cast<int>(pool->size()));
    if (fresh) pool->push_back({it->second, t.colors, t.direction});
    remap[i] = it->second;
  }
  AnchoredPattern out{std::move(h), {}, {}, std::move(d.paths)};
  out.k_tiles.reserve(wp.tiling.cells.size());
  for (int id : wp.tiling.cells)
    out.k_tiles.push_back(remap[static_cast<std::size_t>(id)]);
  out.region.assign(out.k_tiles.size(), -1);
  for (std::size_t p = 0; p < out.paths.size(); ++p)
    for (Vec2 c : out.paths[p])
      out.region[static_cast<std::size_t>(c.y * out.pattern.side + c.x)] =
          static_cast<int>(p);
  return out;
}

ReductionCA assemble(const TileSet& tau, StretchedTileSet K, int step,
                     AnchoredPattern south_mid, AnchoredPattern center,
                     std::uint32_t state_cap) {
  if (tau.tiles.empty()) fail(Errc::invalid_argument, "empty user tile set");
  std::shared_ptr<GuardData> gd = make_guard(K, tau);
  Rule2D rule = make_reduction_rule(K, tau, gd, state_cap);
  long long m = 0;
  for (const std::vector<CellEdge>& b : K.shape.borders)
    m = std::max(m, static_cast<long long>(b.size()));
  return ReductionCA{tau,  std::move(K),         step,
                     m,    std::move(rule),      std::move(south_mid),
                     std::move(center)};
}

// Validity part of the guard read directly off a torus configuration: the
// five macro-tiles around x hold exact macro-tiles and every adjacency
// inside the window matches on both tile layers.
bool five_macro_valid(const ReductionCA& red, const TorusConfig2D& cfg, Vec2 x) {
  const MacroShape& shape = red.K.shape;
  auto k = static_cast<std::uint32_t>(shape.cells.size());
  std::uint32_t c0 =
      static_cast<std::uint32_t>(red.k_layer(cfg.at(x))) % k;
  Vec2 origin = x - shape.cells[c0];
  std::array<Vec2, 5> domains{Vec2{0, 0}, shape.period_nu, -shape.period_nu,
                              shape.period_mu, -shape.period_mu};
  std::set<std::pair<long long, long long>> window;
  for (Vec2 t : domains) {
    Vec2 anchor = origin + t;
    int base = -1;
    for (std::size_t j = 0; j < shape.cells.size(); ++j) {
      Vec2 cell = anchor + shape.cells[j];
      int kid = red.k_layer(cfg.at(cell));
      if (j == 0) {
        if (kid % static_cast<int>(k) != 0) return false;
        base = kid / static_cast<int>(k);
      } else if (kid != base * static_cast<int>(k) + static_cast<int>(j)) {
        return false;
      }
      window.insert({cell.y, cell.x});
    }
  }
  for (const auto& [y, cx] : window)
    for (bool east : {true, false}) {
      std::pair<long long, long long> nkey =
          east ? std::pair<long long, long long>{y, cx + 1}
               : std::pair<long long, long long>{y + 1, cx};
      if (!window.count(nkey)) continue;
      Sym sa = cfg.at({cx, y});
      Sym sb = cfg.at({east ? cx + 1 : cx, east ? y : y + 1});
      const Tile& ka = red.K.tiles.tiles[static_cast<std::size_t>(red.k_layer(sa))];
      const Tile& kb = red.K.tiles.tiles[static_cast<std::size_t>(red.k_layer(sb))];
      const Tile& ta = red.tau.tiles[static_cast<std::size_t>(red.tau_layer(sa))];
      const Tile& tb = red.tau.tiles[static_cast<std::size_t>(red.tau_layer(sb))];
      TileSide side = east ? TileSide::E : TileSide::N;
      TileSide oppo = east ? TileSide::W : TileSide::S;
      if (ka.color(side) != kb.color(oppo) || ta.color(side) != tb.color(oppo))
        return false;
    }
  return true;
}

// All valid tilings of the torus, up to max_solutions, in lexicographic
// order of the row-major tile id vector.
std::vector<std::vector<int>> torus_solutions(const TileSet& ts, long long w,
                                              long long h,
                                              std::uint64_t max_solutions,
                                              std::uint64_t node_cap) {
  auto cellcount = static_cast<std::size_t>(w * h);
  struct Link {
    std::size_t other;
    TileSide mine;
  };
  std::vector<std::vector<Link>> links(cellcount);
  std::vector<std::vector<Link>> self(cellcount);
  for (long long y = 0; y < h; ++y)
    for (long long x = 0; x < w; ++x) {
      auto i = static_cast<std::size_t>(y * w + x);
      for (TileSide s : {TileSide::N, TileSide::S, TileSide::E, TileSide::W}) {
        Vec2 d = side_step(s);
        auto j = static_cast<std::size_t>(floor_mod(y + d.y, h) * w +
                                          floor_mod(x + d.x, w));
        if (j == i)
          self[i].push_back({j, s});
        else if (j < i)
          links[i].push_back({j, s});
      }
    }
  const auto& tiles = ts.tiles;
  std::vector<std::vector<int>> found;
  std::vector<int> chosen(cellcount, -1);
  std::uint64_t nodes = 0;
  std::size_t pos = 0;
  while (true) {
    int next = chosen[pos] + 1;
    chosen[pos] = -1;
    bool advanced = false;
    for (std::size_t t = static_cast<std::size_t>(next); t < tiles.size(); ++t) {
      if (++nodes > node_cap) fail(Errc::cap_exceeded, "torus_solutions: node cap");
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
        found.push_back(chosen);
        if (found.size() >= max_solutions) return found;
        continue;
      }
      ++pos;
      continue;
    }
    if (pos == 0) return found;
    --pos;
  }
}

}  // namespace

int ReductionCA::k_layer(Sym s) const {
  return static_cast<int>((s >> 1) / tau.tiles.size());
}

int ReductionCA::tau_layer(Sym s) const {
  return static_cast<int>((s >> 1) % tau.tiles.size());
}

Sym ReductionCA::encode(int k_tile, int tau_tile, int bit) const {
  auto idx = static_cast<std::uint64_t>(k_tile) * tau.tiles.size() +
             static_cast<std::uint64_t>(tau_tile);
  return static_cast<Sym>((idx << 1) | static_cast<std::uint64_t>(bit));
}

ReductionCA build_reduction(const TileSet& tau, Vec2 nu, Vec2 mu, int step,
                            std::uint32_t state_cap) {
  if (step < 1) fail(Errc::invalid_argument, "hierarchy step must be at least 1");
  MacroShape shape = build_shape(nu, mu);
  std::vector<Tile> pool;
  AnchoredPattern south_mid = anchored_pattern(step, Anchor::SouthMid, &pool);
  AnchoredPattern center = anchored_pattern(step, Anchor::Center, &pool);
  StretchedTileSet K = stretch_tileset(make_tileset(std::move(pool)), shape);
  return assemble(tau, std::move(K), step, std::move(south_mid), std::move(center),
                  state_cap);
}

ReductionCA build_reduction(const TileSet& tau, StretchedTileSet K,
                            std::uint32_t state_cap) {
  return assemble(tau, std::move(K), 0, {}, {}, state_cap);
}

WitnessPair build_witness(const ReductionCA& red, WitnessKind kind) {
  const AnchoredPattern& ap =
      kind == WitnessKind::MuAsymptotic ? red.south_mid : red.center;
  if (ap.pattern.cells.empty())
    fail(Errc::invalid_argument, "reduction carries no anchored patterns");
  std::optional<Tiling> user;
  for (long long s : {1, 2, 3, 4}) {
    TilingSearch r = tiles_torus(red.tau, s, s);
    if (r.outcome == SearchOutcome::Found) {
      user = std::move(r.tiling);
      break;
    }
  }
  if (!user)
    fail(Errc::incompatible, "user tiles admit no torus tiling up to size 4");
  std::map<int, int> tau_pos;
  for (std::size_t i = 0; i < red.tau.tiles.size(); ++i)
    tau_pos[red.tau.tiles[i].id] = static_cast<int>(i);

  const MacroShape& shape = red.K.shape;
  long long side = ap.pattern.side;
  Vec2 origin = ap.pattern.origin;
  int diff_region = ap.region[0];
  auto k = static_cast<std::size_t>(shape.cells.size());

  AsymptoticPair2D pair{make_torus(red.rule.alphabet, user->w, user->h),
                        {}, {}, {}, Vec2{0, 0}, 0};
  for (long long y = 0; y < user->h; ++y)
    for (long long x = 0; x < user->w; ++x)
      pair.background.cell(x, y) = red.encode(0, tau_pos.at(user->at(x, y)), 0);

  for (long long j = 0; j < side; ++j)
    for (long long i = 0; i < side; ++i) {
      auto local = static_cast<std::size_t>(j * side + i);
      Vec2 g = origin + Vec2{i, j};
      int macro = ap.k_tiles[local];
      int bit_b = ap.region[local] == diff_region ? 1 : 0;
      Vec2 anchor = g.x * shape.period_mu + g.y * shape.period_nu;
      for (std::size_t c = 0; c < k; ++c) {
        Vec2 z = anchor + shape.cells[c];
        int tau_id =
            tau_pos.at(user->at(floor_mod(z.x, user->w), floor_mod(z.y, user->h)));
        int k_id = red.K.macro_map[static_cast<std::size_t>(macro)][c];
        pair.domain.push_back(z);
        pair.a_vals.push_back(red.encode(k_id, tau_id, 0));
        pair.b_vals.push_back(red.encode(k_id, tau_id, bit_b));
      }
    }

  Vec2 n_nu{shape.period_nu.y, -shape.period_nu.x};
  if (dot(n_nu, shape.period_mu) < 0) n_nu = -n_nu;
  Vec2 n_mu{shape.period_mu.y, -shape.period_mu.x};
  if (dot(n_mu, shape.period_nu) < 0) n_mu = -n_mu;
  pair.half_dir = kind == WitnessKind::MuAsymptotic ? n_nu : n_nu + n_mu;
  bool any = false;
  long long max_dot = 0;
  for (std::size_t i = 0; i < pair.domain.size(); ++i)
    if (pair.a_vals[i] != pair.b_vals[i]) {
      long long d = dot(pair.half_dir, pair.domain[i]);
      max_dot = any ? std::max(max_dot, d) : d;
      any = true;
    }
  if (!any) fail(Errc::internal, "witness built without a bit difference");
  pair.half_q = max_dot + 1;

  std::vector<SplitLine> split_lines{{Vec2{0, 0}, shape.nu}};
  if (kind == WitnessKind::NuMuAsymptotic)
    split_lines.push_back({Vec2{0, 0}, shape.mu});

  Vec2 gc = kind == WitnessKind::MuAsymptotic ? Vec2{0, origin.y + side / 2}
                                              : Vec2{0, 0};
  Vec2 zc = gc.x * shape.period_mu + gc.y * shape.period_nu + shape.cells[0];
  auto safe = [&](Vec2 z) {
    ShapeOwner o = shape_owner(shape, z);
    Vec2 local = Vec2{o.q, o.p} - origin;
    for (Vec2 d : {Vec2{0, 0}, Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}}) {
      Vec2 l = local + d;
      if (l.x < 0 || l.x >= side || l.y < 0 || l.y >= side) return false;
    }
    return true;
  };
  Rect core{zc.x, zc.y, 1, 1};
  for (long long r = 0; r <= 4 * side * (std::llabs(shape.period_nu.x) +
                                         std::llabs(shape.period_nu.y) +
                                         std::llabs(shape.period_mu.x) +
                                         std::llabs(shape.period_mu.y));
       ++r) {
    Rect cand = Rect::centered(zc, 2 * r + 1, 2 * r + 1);
    bool ok = true;
    for (long long y = cand.y0; y < cand.y0 + cand.h && ok; ++y)
      for (long long x = cand.x0; x < cand.x0 + cand.w && ok; ++x)
        ok = safe({x, y});
    if (!ok) break;
    core = cand;
  }

  validate_pair(pair);
  return WitnessPair{kind, std::move(pair), std::move(split_lines), core};
}

bool check_equal_image(const ReductionCA& red, const AsymptoticPair2D& pair,
                       Rect window, int steps, std::uint64_t budget) {
  return evolve_pair(red.rule, pair, window, steps, budget).equal_final;
}

ProbeReport bounded_closing_probe(const ReductionCA& red, const ProbeBounds& bounds) {
  const MacroShape& shape = red.K.shape;
  long long d = det(shape.period_nu, shape.period_mu);
  long long area = d < 0 ? -d : d;
  long long wx = area / gcd_ll(shape.period_nu.y, shape.period_mu.y);
  long long wy = area / gcd_ll(shape.period_nu.x, shape.period_mu.x);
  ProbeReport rep;
  rep.w = bounds.p * wx;
  rep.h = bounds.q * wy;
  auto cells = static_cast<std::size_t>(rep.w * rep.h);
  if (cells > 4096) fail(Errc::cap_exceeded, "probe torus above 4096 cells");

  auto k = static_cast<std::size_t>(shape.cells.size());
  std::vector<int> cell_index(cells);
  std::vector<int> macro_of(cells);
  {
    std::map<std::pair<long long, long long>, int> macro_ids;
    for (long long y = 0; y < rep.h; ++y)
      for (long long x = 0; x < rep.w; ++x) {
        ShapeOwner o = shape_owner(shape, {x, y});
        cell_index[static_cast<std::size_t>(y * rep.w + x)] = o.cell;
        Vec2 anchor = Vec2{x, y} - shape.cells[static_cast<std::size_t>(o.cell)];
        std::pair<long long, long long> key{floor_mod(anchor.y, rep.h),
                                            floor_mod(anchor.x, rep.w)};
        auto [it, fresh] =
            macro_ids.try_emplace(key, static_cast<int>(macro_ids.size()));
        macro_of[static_cast<std::size_t>(y * rep.w + x)] = it->second;
      }
    if (macro_ids.size() * k != cells)
      fail(Errc::internal, "probe torus does not split into whole macro-tiles");
  }
  auto macros = cells / k;

  std::vector<std::vector<int>> k_layers;
  for (std::size_t b = 0; b < red.K.base.tiles.size(); ++b) {
    const Tile& t = red.K.base.tiles[b];
    if (t.color(TileSide::N) != t.color(TileSide::S) ||
        t.color(TileSide::E) != t.color(TileSide::W))
      continue;
    std::vector<int> layer(cells);
    for (std::size_t i = 0; i < cells; ++i)
      layer[i] = red.K.macro_map[b][static_cast<std::size_t>(cell_index[i])];
    k_layers.push_back(std::move(layer));
  }
  rep.k_layers = k_layers.size();

  std::vector<std::vector<int>> tau_layers =
      torus_solutions(red.tau, rep.w, rep.h, bounds.max_tau_layers, bounds.node_cap);
  rep.tau_layers = tau_layers.size();
  if (tau_layers.empty()) {
    for (std::size_t t = 0; t < red.tau.tiles.size(); ++t)
      tau_layers.push_back(std::vector<int>(cells, static_cast<int>(t)));
    rep.fallback_tau_layers = tau_layers.size();
  }

  bool full = cells < 20 && (std::uint64_t{1} << cells) <= bounds.max_bit_layers;
  std::uint64_t layer_count;
  std::size_t free_bits = full ? cells : macros;
  if (full) {
    layer_count = std::uint64_t{1} << cells;
  } else if (free_bits < 63 &&
             (std::uint64_t{1} << free_bits) <= bounds.max_bit_layers) {
    layer_count = std::uint64_t{1} << free_bits;
  } else {
    layer_count = bounds.max_bit_layers;
    rep.capped = true;
  }
  rep.bit_layers = layer_count;

  for (const std::vector<int>& kl : k_layers)
    for (const std::vector<int>& tl : tau_layers) {
      std::vector<TorusConfig2D> configs;
      configs.reserve(static_cast<std::size_t>(layer_count));
      std::map<std::vector<Sym>, std::vector<std::size_t>> by_image;
      for (std::uint64_t bits = 0; bits < layer_count; ++bits) {
        TorusConfig2D cfg = make_torus(red.rule.alphabet, rep.w, rep.h);
        for (std::size_t i = 0; i < cells; ++i) {
          std::size_t which = full ? i : static_cast<std::size_t>(macro_of[i]);
          int bit = which < 64 ? static_cast<int>((bits >> which) & 1) : 0;
          cfg.cells[i] = red.encode(kl[i], tl[i], bit);
        }
        TorusConfig2D img = apply_2d(red.rule, cfg);
        by_image[img.cells].push_back(configs.size());
        configs.push_back(std::move(cfg));
      }
      for (const auto& [img, group] : by_image) {
        if (group.size() < 2) continue;
        for (std::size_t i = 0; i < group.size(); ++i)
          for (std::size_t j = i + 1; j < group.size(); ++j) {
            const TorusConfig2D& a = configs[group[i]];
            const TorusConfig2D& b = configs[group[j]];
            ++rep.equal_image_pairs;
            bool valid = true;
            for (long long y = 0; y < rep.h && valid; ++y)
              for (long long x = 0; x < rep.w && valid; ++x)
                if (a.cell(x, y) != b.cell(x, y))
                  valid = five_macro_valid(red, a, {x, y});
            if (valid) {
              ++rep.witnesses;
              if (!rep.example) rep.example = ProbePair{a, b, true};
            }
          }
      }
    }
  return rep;
}

}  // namespace calab
