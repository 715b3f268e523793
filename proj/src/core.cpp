#include "calab/core.hpp"

#include <algorithm>
#include <memory>
#include <unordered_map>

namespace calab {

Alphabet::Alphabet(std::uint32_t size, std::uint32_t cap) : size_(size) {
  if (size < 1) fail(Errc::invalid_argument, "alphabet size must be at least 1");
  if (size > cap) {
    fail(Errc::cap_exceeded, "alphabet size " + std::to_string(size) + " exceeds cap " +
                                 std::to_string(cap));
  }
}

std::uint64_t table_entries(std::uint32_t a, std::uint32_t n, std::uint64_t cap) {
  std::uint64_t entries = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (entries > cap / a + 1) {
      fail(Errc::cap_exceeded, "rule table of " + std::to_string(n) + " cells over " +
                                   std::to_string(a) + " symbols exceeds cap " +
                                   std::to_string(cap));
    }
    entries *= a;
  }
  if (entries > cap) {
    fail(Errc::cap_exceeded, "rule table of " + std::to_string(entries) +
                                 " entries exceeds cap " + std::to_string(cap));
  }
  return entries;
}

// ---------------------------------------------------------------------------
// Rules

std::uint64_t Rule1D::pack(std::span<const Sym> w) const {
  std::uint64_t idx = 0;
  for (Sym s : w) idx = idx * alphabet.size() + s;
  return idx;
}

Sym Rule1D::eval(std::span<const Sym> w) const { return table[pack(w)]; }

Rule1D make_rule1d(Alphabet a, int radius, std::vector<Sym> table) {
  if (radius < 0) fail(Errc::invalid_argument, "negative radius");
  std::uint64_t want = table_entries(a.size(), static_cast<std::uint32_t>(2 * radius + 1),
                                     global_budget());
  if (table.size() != want) {
    fail(Errc::invalid_argument, "rule table has " + std::to_string(table.size()) +
                                     " entries, expected " + std::to_string(want));
  }
  for (Sym s : table) {
    if (!a.contains(s)) fail(Errc::invalid_argument, "table symbol out of alphabet");
  }
  return Rule1D{a, radius, std::move(table)};
}

namespace {

template <typename Fn>
std::vector<Sym> build_table(std::uint32_t a, std::uint32_t n, Fn&& f) {
  std::uint64_t entries = table_entries(a, n, global_budget());
  std::vector<Sym> table(entries);
  std::vector<Sym> w(n, 0);
  for (std::uint64_t idx = 0;; ++idx) {
    table[idx] = f(w);
    std::uint32_t i = n;
    while (i > 0) {
      --i;
      if (++w[i] < a) break;
      w[i] = 0;
      if (i == 0) return table;
    }
  }
}

}  // namespace

Rule1D make_xor1d(Alphabet a) {
  auto t = build_table(a.size(), 3, [&](const std::vector<Sym>& w) {
    return static_cast<Sym>((w[0] + w[2]) % a.size());
  });
  return Rule1D{a, 1, std::move(t)};
}

Rule1D make_identity_1d(Alphabet a, int radius) {
  std::uint32_t n = static_cast<std::uint32_t>(2 * radius + 1);
  auto t = build_table(a.size(), n, [&](const std::vector<Sym>& w) { return w[radius]; });
  return Rule1D{a, radius, std::move(t)};
}

Rule1D make_and_min_1d(Alphabet a, int radius) {
  std::uint32_t n = static_cast<std::uint32_t>(2 * radius + 1);
  auto t = build_table(a.size(), n, [&](const std::vector<Sym>& w) {
    return *std::min_element(w.begin(), w.end());
  });
  return Rule1D{a, radius, std::move(t)};
}

std::vector<Vec2> moore_offsets(int radius) {
  std::vector<Vec2> out;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx) out.push_back({dx, dy});
  return out;
}

std::vector<Vec2> von_neumann_offsets(int ex, int ey) {
  // Diamond with semi-axes ex, ey: |dx|*ey + |dy|*ex <= ex*ey.
  std::vector<Vec2> out;
  for (int dy = -ey; dy <= ey; ++dy)
    for (int dx = -ex; dx <= ex; ++dx) {
      long long lhs = static_cast<long long>(dx < 0 ? -dx : dx) * ey +
                      static_cast<long long>(dy < 0 ? -dy : dy) * ex;
      if (lhs <= static_cast<long long>(ex) * ey) out.push_back({dx, dy});
    }
  return out;
}

std::uint64_t Rule2D::pack(std::span<const Sym> w) const {
  std::uint64_t idx = 0;
  for (Sym s : w) idx = idx * alphabet.size() + s;
  return idx;
}

Sym Rule2D::eval(std::span<const Sym> w) const {
  if (!table.empty()) return table[pack(w)];
  return proc(w);
}

Rule2D make_rule2d_moore(Alphabet a, int radius, std::vector<Sym> table) {
  if (radius < 0) fail(Errc::invalid_argument, "negative radius");
  std::uint32_t n = static_cast<std::uint32_t>(2 * radius + 1) *
                    static_cast<std::uint32_t>(2 * radius + 1);
  std::uint64_t want = table_entries(a.size(), n, global_budget());
  if (table.size() != want) {
    fail(Errc::invalid_argument, "rule table has " + std::to_string(table.size()) +
                                     " entries, expected " + std::to_string(want));
  }
  for (Sym s : table) {
    if (!a.contains(s)) fail(Errc::invalid_argument, "table symbol out of alphabet");
  }
  Rule2D r{a, Neigh2D::Moore, radius, radius, moore_offsets(radius), std::move(table), {}};
  return r;
}

namespace {

Rule2D moore_from_fn(Alphabet a, int radius, std::function<Sym(std::span<const Sym>)> f) {
  std::uint32_t n = static_cast<std::uint32_t>((2 * radius + 1) * (2 * radius + 1));
  std::uint64_t entries;
  bool fits = true;
  try {
    entries = table_entries(a.size(), n, std::uint64_t{1} << 22);
  } catch (const Error&) {
    fits = false;
    entries = 0;
  }
  Rule2D r{a, Neigh2D::Moore, radius, radius, moore_offsets(radius), {}, {}};
  if (fits) {
    std::vector<Sym> table(entries);
    std::vector<Sym> w(n, 0);
    std::uint64_t idx = 0;
    for (;;) {
      table[idx] = f(std::span<const Sym>(w));
      ++idx;
      std::uint32_t i = n;
      bool done = true;
      while (i > 0) {
        --i;
        if (++w[i] < a.size()) {
          done = false;
          break;
        }
        w[i] = 0;
      }
      if (done) break;
    }
    r.table = std::move(table);
  } else {
    r.proc = std::move(f);
  }
  return r;
}

int offset_index(int radius, Vec2 o) {
  return static_cast<int>((o.y + radius) * (2 * radius + 1) + (o.x + radius));
}

}  // namespace

Rule2D make_identity_2d(Alphabet a, int radius) {
  int c = offset_index(radius, {0, 0});
  return moore_from_fn(a, radius, [c](std::span<const Sym> w) { return w[c]; });
}

Rule2D make_xor_corners(Alphabet a, int radius) {
  if (radius < 1) fail(Errc::invalid_argument, "corner rule needs radius >= 1");
  int p = offset_index(radius, {radius, radius});
  int q = offset_index(radius, {-radius, -radius});
  std::uint32_t n = a.size();
  return moore_from_fn(a, radius, [p, q, n](std::span<const Sym> w) {
    return static_cast<Sym>((w[p] + w[q]) % n);
  });
}

Rule2D make_and_min_2d(Alphabet a, int radius) {
  return moore_from_fn(a, radius, [](std::span<const Sym> w) {
    return *std::min_element(w.begin(), w.end());
  });
}

Rule2D make_shift_2d(Alphabet a, int radius, Vec2 delta) {
  if (delta.x < -radius || delta.x > radius || delta.y < -radius || delta.y > radius) {
    fail(Errc::invalid_argument, "shift offset outside the neighborhood");
  }
  int p = offset_index(radius, delta);
  return moore_from_fn(a, radius, [p](std::span<const Sym> w) { return w[p]; });
}

// ---------------------------------------------------------------------------
// Configurations

Sym PeriodicConfig1D::at(long long i) const {
  long long n = period();
  long long r = i % n;
  if (r < 0) r += n;
  return cells[static_cast<std::size_t>(r)];
}

Sym TorusConfig2D::at(Vec2 p) const {
  long long x = p.x % w;
  if (x < 0) x += w;
  long long y = p.y % h;
  if (y < 0) y += h;
  return cells[static_cast<std::size_t>(y * w + x)];
}

bool operator==(const TorusConfig2D& a, const TorusConfig2D& b) {
  return a.w == b.w && a.h == b.h && a.cells == b.cells;
}

TorusConfig2D make_torus(Alphabet a, long long w, long long h, Sym fill) {
  if (w < 1 || h < 1) fail(Errc::invalid_argument, "torus dimensions must be positive");
  require_budget(static_cast<std::uint64_t>(w) * static_cast<std::uint64_t>(h), "torus");
  return TorusConfig2D{a, w, h, std::vector<Sym>(static_cast<std::size_t>(w * h), fill)};
}

bool same_plane_config(const TorusConfig2D& a, const TorusConfig2D& b) {
  long long w = a.w / gcd_ll(a.w, b.w) * b.w;
  long long h = a.h / gcd_ll(a.h, b.h) * b.h;
  for (long long y = 0; y < h; ++y)
    for (long long x = 0; x < w; ++x)
      if (a.at({x, y}) != b.at({x, y})) return false;
  return true;
}

PeriodicConfig1D apply_1d(const Rule1D& rule, const PeriodicConfig1D& c) {
  if (!(rule.alphabet == c.alphabet)) fail(Errc::incompatible, "alphabet mismatch");
  long long n = c.period();
  PeriodicConfig1D out{c.alphabet, std::vector<Sym>(c.cells.size())};
  std::vector<Sym> w(static_cast<std::size_t>(rule.width()));
  for (long long i = 0; i < n; ++i) {
    for (int j = -rule.radius; j <= rule.radius; ++j)
      w[static_cast<std::size_t>(j + rule.radius)] = c.at(i + j);
    out.cells[static_cast<std::size_t>(i)] = rule.eval(w);
  }
  return out;
}

TorusConfig2D apply_2d(const Rule2D& rule, const TorusConfig2D& c) {
  if (!(rule.alphabet == c.alphabet)) fail(Errc::incompatible, "alphabet mismatch");
  TorusConfig2D out{c.alphabet, c.w, c.h, std::vector<Sym>(c.cells.size())};
  std::vector<Sym> w(rule.offsets.size());
  for (long long y = 0; y < c.h; ++y)
    for (long long x = 0; x < c.w; ++x) {
      for (std::size_t k = 0; k < rule.offsets.size(); ++k)
        w[k] = c.at({x + rule.offsets[k].x, y + rule.offsets[k].y});
      out.cell(x, y) = rule.eval(w);
    }
  return out;
}

TorusConfig2D shift_2d(const TorusConfig2D& c, Vec2 v) {
  TorusConfig2D out{c.alphabet, c.w, c.h, std::vector<Sym>(c.cells.size())};
  for (long long y = 0; y < c.h; ++y)
    for (long long x = 0; x < c.w; ++x) out.cell(x, y) = c.at({x + v.x, y + v.y});
  return out;
}

PeriodicConfig1D shift_1d(const PeriodicConfig1D& c, long long k) {
  PeriodicConfig1D out{c.alphabet, std::vector<Sym>(c.cells.size())};
  for (long long i = 0; i < c.period(); ++i)
    out.cells[static_cast<std::size_t>(i)] = c.at(i + k);
  return out;
}

namespace {

// Brent's algorithm over an orbit; equality by full state comparison.
template <typename State, typename Step>
std::optional<std::pair<long long, long long>> brent(State x0, Step step, long long max_steps) {
  long long power = 1, lambda = 1;
  State tortoise = x0;
  State hare = step(x0);
  long long taken = 1;
  while (!(tortoise == hare)) {
    if (taken >= max_steps) return std::nullopt;
    if (power == lambda) {
      tortoise = hare;
      power *= 2;
      lambda = 0;
    }
    hare = step(hare);
    ++taken;
    ++lambda;
  }
  // find preperiod
  State a = x0, b = x0;
  for (long long i = 0; i < lambda; ++i) b = step(b);
  long long mu = 0;
  while (!(a == b)) {
    a = step(a);
    b = step(b);
    ++mu;
  }
  return std::make_pair(mu, lambda);
}

}  // namespace

std::optional<std::pair<long long, long long>> temporal_period(const Rule2D& rule,
                                                               const TorusConfig2D& c,
                                                               long long max_steps) {
  return brent(c, [&](const TorusConfig2D& s) { return apply_2d(rule, s); }, max_steps);
}

std::optional<std::pair<long long, long long>> temporal_period(const Rule1D& rule,
                                                               const PeriodicConfig1D& c,
                                                               long long max_steps) {
  struct Wrap {
    PeriodicConfig1D c;
    bool operator==(const Wrap& o) const { return c.cells == o.c.cells; }
  };
  return brent(Wrap{c}, [&](const Wrap& s) { return Wrap{apply_1d(rule, s.c)}; }, max_steps);
}

// ---------------------------------------------------------------------------
// Plane fields

PlaneField torus_field(const TorusConfig2D& bg) {
  return [bg](Vec2 p) { return bg.at(p); };
}

bool operator==(const Grid2D& a, const Grid2D& b) {
  return a.rect.x0 == b.rect.x0 && a.rect.y0 == b.rect.y0 && a.rect.w == b.rect.w &&
         a.rect.h == b.rect.h && a.cells == b.cells;
}

Grid2D materialize(const PlaneField& f, Rect r, std::uint64_t budget) {
  if (r.w < 0 || r.h < 0) fail(Errc::invalid_argument, "negative window");
  std::uint64_t need = static_cast<std::uint64_t>(r.w) * static_cast<std::uint64_t>(r.h);
  if (need > budget) {
    fail(Errc::cone_overflow, "dependency cone of " + std::to_string(need) +
                                  " cells exceeds budget " + std::to_string(budget));
  }
  Grid2D g{r, std::vector<Sym>(static_cast<std::size_t>(r.w * r.h))};
  std::size_t i = 0;
  for (long long y = r.y0; y < r.y0 + r.h; ++y)
    for (long long x = r.x0; x < r.x0 + r.w; ++x) g.cells[i++] = f({x, y});
  return g;
}

Grid2D step_grid(const Rule2D& rule, const Grid2D& g) {
  Rect r{g.rect.x0 + rule.ex, g.rect.y0 + rule.ey, g.rect.w - 2 * rule.ex,
         g.rect.h - 2 * rule.ey};
  if (r.w <= 0 || r.h <= 0) fail(Errc::cone_overflow, "window too small for another step");
  Grid2D out{r, std::vector<Sym>(static_cast<std::size_t>(r.w * r.h))};
  std::vector<Sym> w(rule.offsets.size());
  std::size_t i = 0;
  for (long long y = r.y0; y < r.y0 + r.h; ++y)
    for (long long x = r.x0; x < r.x0 + r.w; ++x) {
      for (std::size_t k = 0; k < rule.offsets.size(); ++k)
        w[k] = g.at({x + rule.offsets[k].x, y + rule.offsets[k].y});
      out.cells[i++] = rule.eval(w);
    }
  return out;
}

namespace {

struct VecHash {
  std::size_t operator()(const Vec2& v) const {
    return std::hash<long long>()(v.x * 1000003LL + v.y);
  }
};

struct VecEq {
  bool operator()(const Vec2& a, const Vec2& b) const { return a == b; }
};

PlaneField overlay_field(const TorusConfig2D& bg, const std::vector<Vec2>& domain,
                         const std::vector<Sym>& vals) {
  auto map = std::make_shared<std::unordered_map<Vec2, Sym, VecHash, VecEq>>();
  for (std::size_t i = 0; i < domain.size(); ++i) (*map)[domain[i]] = vals[i];
  return [bg, map](Vec2 p) {
    auto it = map->find(p);
    return it != map->end() ? it->second : bg.at(p);
  };
}

}  // namespace

PlaneField AsymptoticPair2D::field_a() const { return overlay_field(background, domain, a_vals); }
PlaneField AsymptoticPair2D::field_b() const { return overlay_field(background, domain, b_vals); }

std::vector<Vec2> AsymptoticPair2D::difference_cells() const {
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < domain.size(); ++i)
    if (a_vals[i] != b_vals[i]) out.push_back(domain[i]);
  return out;
}

void validate_pair(const AsymptoticPair2D& pair) {
  if (pair.domain.size() != pair.a_vals.size() || pair.domain.size() != pair.b_vals.size())
    fail(Errc::invalid_argument, "pair domain and value lists disagree");
  if (pair.half_dir == Vec2{0, 0}) fail(Errc::invalid_argument, "zero half-plane direction");
  auto diff = pair.difference_cells();
  if (diff.empty()) fail(Errc::invalid_argument, "configurations are identical");
  for (Vec2 x : diff) {
    if (dot(pair.half_dir, x) >= pair.half_q) {
      fail(Errc::invalid_argument,
           "difference cell " + format_vec(x) + " outside the stated half-plane");
    }
  }
  for (Sym s : pair.a_vals)
    if (!pair.background.alphabet.contains(s)) fail(Errc::invalid_argument, "symbol out of range");
  for (Sym s : pair.b_vals)
    if (!pair.background.alphabet.contains(s)) fail(Errc::invalid_argument, "symbol out of range");
}

PairTrace evolve_pair(const Rule2D& rule, const AsymptoticPair2D& pair, Rect window, int steps,
                      std::uint64_t budget) {
  validate_pair(pair);
  if (steps < 0) fail(Errc::invalid_argument, "negative step count");
  Rect cover{window.x0 - static_cast<long long>(steps) * rule.ex,
             window.y0 - static_cast<long long>(steps) * rule.ey,
             window.w + 2LL * steps * rule.ex, window.h + 2LL * steps * rule.ey};
  Grid2D ga = materialize(pair.field_a(), cover, budget);
  Grid2D gb = materialize(pair.field_b(), cover, budget);

  auto crop = [&](const Grid2D& g) {
    Grid2D out{window, std::vector<Sym>(static_cast<std::size_t>(window.w * window.h))};
    std::size_t i = 0;
    for (long long y = window.y0; y < window.y0 + window.h; ++y)
      for (long long x = window.x0; x < window.x0 + window.w; ++x) out.cells[i++] = g.at({x, y});
    return out;
  };

  PairTrace trace;
  trace.a.push_back(crop(ga));
  trace.b.push_back(crop(gb));
  for (int t = 0; t < steps; ++t) {
    ga = step_grid(rule, ga);
    gb = step_grid(rule, gb);
    trace.a.push_back(crop(ga));
    trace.b.push_back(crop(gb));
  }
  const Grid2D& fa = trace.a.back();
  const Grid2D& fb = trace.b.back();
  for (long long y = window.y0; y < window.y0 + window.h && trace.equal_final; ++y)
    for (long long x = window.x0; x < window.x0 + window.w; ++x)
      if (fa.at({x, y}) != fb.at({x, y})) {
        trace.equal_final = false;
        trace.first_diff = Vec2{x, y};
        break;
      }
  return trace;
}

}  // namespace calab
