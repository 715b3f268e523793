#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "calab/common.hpp"

namespace calab {

using Sym = std::uint32_t;

inline constexpr std::uint32_t kDefaultAlphabetCap = 16;

class Alphabet {
public:
  explicit Alphabet(std::uint32_t size, std::uint32_t cap = kDefaultAlphabetCap);
  std::uint32_t size() const { return size_; }
  bool contains(Sym s) const { return s < size_; }
  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.size_ == b.size_; }

private:
  std::uint32_t size_;
};

// Number of table entries for n cells over alphabet size a; budget-checked.
std::uint64_t table_entries(std::uint32_t a, std::uint32_t n, std::uint64_t cap);

// ---------------------------------------------------------------------------
// Rules

struct Rule1D {
  Alphabet alphabet;
  int radius = 0;
  // Indexed by the neighborhood word (x-r..x+r), leftmost symbol most
  // significant, mixed radix |A|.
  std::vector<Sym> table;

  int width() const { return 2 * radius + 1; }
  Sym eval(std::span<const Sym> w) const;
  std::uint64_t pack(std::span<const Sym> w) const;
};

Rule1D make_rule1d(Alphabet a, int radius, std::vector<Sym> table);
Rule1D make_xor1d(Alphabet a);                       // (x-1 + x+1) mod |A|
Rule1D make_identity_1d(Alphabet a, int radius);
Rule1D make_and_min_1d(Alphabet a, int radius);      // min over the window

enum class Neigh2D { Moore, VonNeumann };

// 2D rule over a fixed offset list. Moore rules of modest size carry a dense
// table; larger state spaces evaluate through `proc`.
struct Rule2D {
  Alphabet alphabet;
  Neigh2D kind = Neigh2D::Moore;
  int ex = 0;  // horizontal extent (Moore: radius)
  int ey = 0;  // vertical extent  (Moore: radius)
  std::vector<Vec2> offsets;  // scan order: dy ascending, then dx ascending
  std::vector<Sym> table;     // dense, empty when procedural
  std::function<Sym(std::span<const Sym>)> proc;

  int radius() const { return ex > ey ? ex : ey; }
  bool dense() const { return !table.empty(); }
  Sym eval(std::span<const Sym> w) const;
  std::uint64_t pack(std::span<const Sym> w) const;
};

std::vector<Vec2> moore_offsets(int radius);
std::vector<Vec2> von_neumann_offsets(int ex, int ey);

Rule2D make_rule2d_moore(Alphabet a, int radius, std::vector<Sym> table);
Rule2D make_identity_2d(Alphabet a, int radius);
// (value at (r,r) + value at (-r,-r)) mod |A|; xor for binary alphabets.
Rule2D make_xor_corners(Alphabet a, int radius);
Rule2D make_and_min_2d(Alphabet a, int radius);
Rule2D make_shift_2d(Alphabet a, int radius, Vec2 delta);

// ---------------------------------------------------------------------------
// Configurations

struct PeriodicConfig1D {
  Alphabet alphabet;
  std::vector<Sym> cells;  // period; cell(i) = cells[i mod n]

  long long period() const { return static_cast<long long>(cells.size()); }
  Sym at(long long i) const;
};

struct TorusConfig2D {
  Alphabet alphabet;
  long long w = 0;
  long long h = 0;
  std::vector<Sym> cells;  // row-major, index = y*w + x

  Sym at(Vec2 p) const;
  Sym& cell(long long x, long long y) { return cells[static_cast<std::size_t>(y * w + x)]; }
  Sym cell(long long x, long long y) const { return cells[static_cast<std::size_t>(y * w + x)]; }
  friend bool operator==(const TorusConfig2D& a, const TorusConfig2D& b);
};

TorusConfig2D make_torus(Alphabet a, long long w, long long h, Sym fill = 0);

// Equality of the biperiodic points two torus representations describe
// (compared on the lcm torus; dimensions may differ).
bool same_plane_config(const TorusConfig2D& a, const TorusConfig2D& b);

PeriodicConfig1D apply_1d(const Rule1D& rule, const PeriodicConfig1D& c);
TorusConfig2D apply_2d(const Rule2D& rule, const TorusConfig2D& c);

// result(x) = c(x + v)
TorusConfig2D shift_2d(const TorusConfig2D& c, Vec2 v);
PeriodicConfig1D shift_1d(const PeriodicConfig1D& c, long long k);

// Brent cycle detection on the orbit of `c`; (preperiod, period) or nullopt
// if no cycle closes within max_steps applications.
std::optional<std::pair<long long, long long>> temporal_period(
    const Rule2D& rule, const TorusConfig2D& c, long long max_steps);
std::optional<std::pair<long long, long long>> temporal_period(
    const Rule1D& rule, const PeriodicConfig1D& c, long long max_steps);

// ---------------------------------------------------------------------------
// Plane fields and finite-difference pairs

using PlaneField = std::function<Sym(Vec2)>;

PlaneField torus_field(const TorusConfig2D& bg);

struct Grid2D {
  Rect rect;
  std::vector<Sym> cells;  // row-major over rect

  Sym at(Vec2 p) const { return cells[static_cast<std::size_t>((p.y - rect.y0) * rect.w + (p.x - rect.x0))]; }
  friend bool operator==(const Grid2D& a, const Grid2D& b);
};

Grid2D materialize(const PlaneField& f, Rect r, std::uint64_t budget);
// One synchronous step; the result rect shrinks by the rule extents.
Grid2D step_grid(const Rule2D& rule, const Grid2D& g);

// Two configurations differing on a finite cell set over a shared periodic
// background. `domain` lists the overlay cells (a_vals/b_vals aligned with
// it); cells where the values differ must satisfy dot(half_dir, x) < half_q.
struct AsymptoticPair2D {
  TorusConfig2D background;
  std::vector<Vec2> domain;
  std::vector<Sym> a_vals;
  std::vector<Sym> b_vals;
  Vec2 half_dir;
  long long half_q = 0;

  PlaneField field_a() const;
  PlaneField field_b() const;
  std::vector<Vec2> difference_cells() const;
};

// Throws Errc::invalid_argument on malformed pairs (empty difference,
// difference cell outside the stated half-plane, domain/value mismatch).
void validate_pair(const AsymptoticPair2D& pair);

struct PairTrace {
  std::vector<Grid2D> a;  // t = 0..steps over the window
  std::vector<Grid2D> b;
  bool equal_final = true;
  std::optional<Vec2> first_diff;  // in the final layer
};

// Exact orbit traces over `window`. The implementation materializes the full
// dependency cone (window grown by steps * extent per axis) so results never
// depend on the torus representation; Errc::cone_overflow if that exceeds the
// budget.
PairTrace evolve_pair(const Rule2D& rule, const AsymptoticPair2D& pair, Rect window,
                      int steps, std::uint64_t budget = global_budget());

}  // namespace calab
