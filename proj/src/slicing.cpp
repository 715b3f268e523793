#include "calab/slicing.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace calab {

namespace {

// det(d, x), constant along lines parallel to d; primitive d makes it hit
// every integer.
long long line_level(Vec2 d, Vec2 x) { return det(d, x); }

// Level of the line with the smallest positive intersection on the
// reference axis. Lines are numbered so that line i has level i * unit.
long long level_unit(Vec2 d, int axis) {
  if (axis == 1) return 1;           // d horizontal: level of (0, s) is s
  return d.y > 0 ? -1 : 1;           // level of (s, 0) is -d.y * s
}

Vec2 smallest_point_on_line_1(Vec2 d, long long target_level) {
  // One solution of d.x * y - d.y * x = target_level via extended gcd.
  long long a = -d.y, b = d.x;  // a*x + b*y = target
  long long old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    long long q = old_r / r;
    long long tmp = old_r - q * r; old_r = r; r = tmp;
    tmp = old_s - q * s; old_s = s; s = tmp;
    tmp = old_t - q * t; old_t = t; t = tmp;
  }
  long long g = old_r;
  if (g < 0) { g = -g; old_s = -old_s; old_t = -old_t; }
  if (target_level % g != 0) fail(Errc::internal, "line level not representable");
  Vec2 x0{old_s * (target_level / g), old_t * (target_level / g)};

  // Minimize the max-norm along x0 + t*d; the optimum sits within a small
  // scan window around the coordinate zero-crossings.
  auto norm = [](Vec2 p) { return std::max(std::llabs(p.x), std::llabs(p.y)); };
  long long span = norm(x0) + 2;
  Vec2 best = x0;
  for (long long t2 = -span; t2 <= span; ++t2) {
    Vec2 cand = x0 + t2 * d;
    if (norm(cand) < norm(best) || (norm(cand) == norm(best) && cand < best)) best = cand;
  }
  return best;
}

}  // namespace

long long LineFamily::line_index(Vec2 x) const {
  return line_level(d, x) / level_unit(d, axis);
}

std::pair<long long, long long> LineFamily::decompose(Vec2 x) const {
  long long den = det(y1, d);
  long long i = det(x, d) / den;
  long long t = det(y1, x) / den;
  return {i, t};
}

LineFamily build_family(Vec2 nu) {
  if (nu == Vec2{0, 0}) fail(Errc::invalid_argument, "zero direction vector");
  Vec2 d{-nu.y, nu.x};
  long long g = gcd_ll(d.x < 0 ? -d.x : d.x, d.y < 0 ? -d.y : d.y);
  d = {d.x / g, d.y / g};
  if (d.x < 0 || (d.x == 0 && d.y < 0)) d = -d;
  int axis = d.y == 0 ? 1 : 0;
  LineFamily fam{nu, d, {0, 0}, axis};
  fam.y1 = smallest_point_on_line_1(d, level_unit(d, axis));
  if (det(fam.y1, fam.d) != 1 && det(fam.y1, fam.d) != -1)
    fail(Errc::internal, "line base point does not complete a unimodular pair");
  return fam;
}

int compute_rstar(const LineFamily& family, int r) {
  if (r < 0) fail(Errc::invalid_argument, "negative radius");
  long long a = family.line_index({r, r});
  long long b = family.line_index({r, -r});
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  return static_cast<int>(a > b ? a : b);
}

Sym pack_slice(std::span<const Sym> vals, std::uint32_t a) {
  std::uint64_t packed = 0;
  for (Sym v : vals) packed = packed * a + v;
  return static_cast<Sym>(packed);
}

std::vector<Sym> unpack_slice(Sym b, std::uint32_t a, long long k) {
  std::vector<Sym> vals(static_cast<std::size_t>(k));
  for (long long t = k - 1; t >= 0; --t) {
    vals[static_cast<std::size_t>(t)] = b % a;
    b /= a;
  }
  return vals;
}

SlicedCA build_sliced_rule(const Rule2D& rule, Vec2 nu, Vec2 v) {
  LineFamily fam = build_family(nu);
  if (dot(v, nu) != 0) fail(Errc::invalid_argument, "slice shift not perpendicular to the direction");
  long long k = fam.d.x != 0 ? v.x / fam.d.x : v.y / fam.d.y;
  if (k < 1 || !(k * fam.d == v))
    fail(Errc::invalid_argument, "slice shift must be a positive multiple of the line step");

  std::uint32_t a = rule.alphabet.size();
  std::uint64_t bsize = 1;
  for (long long i = 0; i < k; ++i) {
    bsize *= a;
    if (bsize > (std::uint64_t{1} << 20))
      fail(Errc::cap_exceeded, "packed slice alphabet exceeds 2^20 symbols");
  }
  Alphabet balpha(static_cast<std::uint32_t>(bsize), std::uint32_t{1} << 20);

  int rstar = compute_rstar(fam, rule.radius());
  int width = 2 * rstar + 1;
  std::uint64_t entries = table_entries(static_cast<std::uint32_t>(bsize),
                                        static_cast<std::uint32_t>(width), global_budget());

  // Offset positions of the base rule, in slice coordinates.
  struct Pos { long long line; long long off; };
  std::vector<Pos> pos(rule.offsets.size());
  for (std::size_t j = 0; j < rule.offsets.size(); ++j) {
    auto [i, t] = fam.decompose(rule.offsets[j]);
    pos[j] = {i, t};
  }

  std::vector<Sym> table(entries);
  std::vector<Sym> word(static_cast<std::size_t>(width), 0);
  std::vector<std::vector<Sym>> slices(static_cast<std::size_t>(width));
  std::vector<Sym> window(rule.offsets.size());
  std::vector<Sym> out(static_cast<std::size_t>(k));
  for (std::uint64_t idx = 0;; ++idx) {
    for (int i = 0; i < width; ++i)
      slices[static_cast<std::size_t>(i)] =
          unpack_slice(word[static_cast<std::size_t>(i)], a, k);
    for (long long t = 0; t < k; ++t) {
      for (std::size_t j = 0; j < pos.size(); ++j) {
        long long line = pos[j].line + rstar;
        long long off = (t + pos[j].off) % k;
        if (off < 0) off += k;
        window[j] = slices[static_cast<std::size_t>(line)][static_cast<std::size_t>(off)];
      }
      out[static_cast<std::size_t>(t)] = rule.eval(window);
    }
    table[idx] = pack_slice(out, a);
    int i = width;
    bool done = true;
    while (i > 0) {
      --i;
      if (++word[static_cast<std::size_t>(i)] < bsize) {
        done = false;
        break;
      }
      word[static_cast<std::size_t>(i)] = 0;
    }
    if (done) break;
  }

  Rule1D sliced{balpha, rstar, std::move(table)};
  return SlicedCA{rule, fam, v, k, balpha, rstar, std::move(sliced)};
}

namespace {

// Smallest P > 0 such that P * y1 lands in the lattice spanned by the torus
// periods and v; that P is a period of the sliced 1D configuration.
long long slice_period(const TorusConfig2D& c, Vec2 y1, Vec2 v) {
  long long bound = c.w * c.h;
  for (long long p = 1; p <= bound; ++p) {
    for (long long m = 0; m < bound; ++m) {
      long long x = p * y1.x + m * v.x;
      long long y = p * y1.y + m * v.y;
      if (x % c.w == 0 && y % c.h == 0) return p;
    }
  }
  fail(Errc::internal, "no slice period within the torus bound");
}

}  // namespace

PeriodicConfig1D slice_config(const TorusConfig2D& c, const SlicedCA& s) {
  if (!(c.alphabet == s.base.alphabet)) fail(Errc::incompatible, "alphabet mismatch");
  if (!(shift_2d(c, s.v) == c))
    fail(Errc::incompatible, "configuration is not invariant under the slice shift");
  long long p = slice_period(c, s.family.y1, s.v);
  PeriodicConfig1D out{s.sliced_alphabet, std::vector<Sym>(static_cast<std::size_t>(p))};
  std::vector<Sym> vals(static_cast<std::size_t>(s.k));
  for (long long i = 0; i < p; ++i) {
    for (long long t = 0; t < s.k; ++t)
      vals[static_cast<std::size_t>(t)] = c.at(s.family.compose(i, t));
    out.cells[static_cast<std::size_t>(i)] = pack_slice(vals, s.base.alphabet.size());
  }
  return out;
}

TorusConfig2D unslice_config(const PeriodicConfig1D& a, const SlicedCA& s) {
  if (!(a.alphabet == s.sliced_alphabet)) fail(Errc::incompatible, "alphabet mismatch");
  Vec2 py1 = a.period() * s.family.y1;
  long long dt = det(s.v, py1);
  if (dt < 0) dt = -dt;
  if (dt == 0) fail(Errc::internal, "degenerate invariance lattice");
  long long w = dt / gcd_ll(s.v.y < 0 ? -s.v.y : s.v.y, py1.y < 0 ? -py1.y : py1.y);
  long long h = dt / gcd_ll(s.v.x < 0 ? -s.v.x : s.v.x, py1.x < 0 ? -py1.x : py1.x);
  TorusConfig2D c = make_torus(s.base.alphabet, w, h);
  for (long long y = 0; y < h; ++y)
    for (long long x = 0; x < w; ++x) {
      auto [i, t] = s.family.decompose({x, y});
      long long off = t % s.k;
      if (off < 0) off += s.k;
      std::vector<Sym> vals = unpack_slice(a.at(i), s.base.alphabet.size(), s.k);
      c.cell(x, y) = vals[static_cast<std::size_t>(off)];
    }
  return c;
}

}  // namespace calab
