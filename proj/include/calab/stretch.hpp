#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "calab/wang.hpp"

namespace calab {

// Integer cells met by the closed segment (0,0) -> segment. A cell counts
// when the segment crosses its interior, when the segment runs along a
// gridline and the cell lies on the left of the walking direction, or when
// the segment passes through the cell's entry corner (the corner first met
// when walking toward the cell), the far endpoint included.
struct Rasterization {
  Vec2 segment;
  std::vector<Vec2> d_cells;  // walk order
  std::vector<Vec2> upper;    // per-column topmost cells (per-row westmost
                              // when the segment is steeper than diagonal)
  std::vector<Vec2> lower;    // the opposite extreme, same traversal order
};

Rasterization rasterize(Vec2 v);

struct CellEdge {
  Vec2 cell;
  TileSide side = TileSide::N;
};

enum class ShapeSide : std::uint8_t { N, S, E, W, R1, R2 };

// Integer approximation of the parallelogram spanned by the scaled vectors.
// For each side the infinite line through it is rasterized into a periodic
// staircase of cells; the domain keeps every cell between that staircase and
// its translate by the opposite period, staircase included and translate
// excluded, so domain translates partition the plane. A sliver pinched off
// at a sharp corner is moved to the equivalent position next to the main
// body, which preserves the partition and the cell count while making the
// domain edge-connected; the moved sliver adds a diagonal neighbor pair.
struct MacroShape {
  Vec2 nu, mu;               // requested periods
  long long scale = 1;       // minimal factor giving well-separated vertices
  Vec2 period_nu, period_mu; // scale * nu and scale * mu
  std::vector<Vec2> cells;   // sorted by (y, x)
  // Unit edges leading out of the domain, grouped by the neighboring
  // translate: N faces +period_nu, S its opposite, E faces +period_mu, W its
  // opposite, R1/R2 the extra diagonal pair when the parallelogram corners
  // are cut. Opposite sides are listed in matching order: entry j of one
  // touches entry j of the other across the shared boundary.
  std::array<std::vector<CellEdge>, 6> borders;
  int neighbor_count = 4;
  Vec2 extra;  // the R1 translate when neighbor_count == 6

  const std::vector<CellEdge>& border(ShapeSide s) const {
    return borders[static_cast<std::size_t>(s)];
  }
};

// The scale is the smallest i >= 1 putting all distinct vertices of the
// parallelogram spanned by i*nu and i*mu at Chebyshev distance at least 3.
// Parallel input vectors are an error; a domain that comes out disconnected
// or with a neighbor structure other than 4 or 6 translates is reported as
// incompatible.
MacroShape build_shape(Vec2 nu, Vec2 mu,
                       std::uint64_t cell_cap = std::uint64_t{1} << 22);

// Lattice coordinates of the macro-tile containing z together with z's cell
// index within the shape: z = p * period_nu + q * period_mu + cells[cell].
struct ShapeOwner {
  long long p = 0;
  long long q = 0;
  int cell = 0;
};

ShapeOwner shape_owner(const MacroShape& shape, Vec2 z);

// Every base tile turns into one tile per shape cell. Interior edges get a
// fresh color per (base tile, edge) so the pieces assemble only as intended;
// edges toward the N/S/E/W neighbors encode (axis, base color, border
// position) so macro adjacency reproduces base adjacency; edges toward the
// diagonal neighbors all share one neutral color. Directions carry over
// uniformly to every cell of a directed base tile.
struct StretchedTileSet {
  TileSet base;
  MacroShape shape;
  TileSet tiles;  // |base| * |shape.cells| tiles
  std::vector<std::vector<int>> macro_map;  // [base index][cell index] -> tile id
  Color neutral_color = 0;
};

StretchedTileSet stretch_tileset(const TileSet& base, const MacroShape& shape);

// Ways to lay one base tile's cell tiles over the shape so that interior
// edges match and the outside shows that macro-tile's border colors, summed
// over base tiles. Equals the base tile count exactly when every macro-tile
// assembles only in its intended way.
std::uint64_t count_shape_assemblies(const StretchedTileSet& sts,
                                     std::uint64_t node_cap = std::uint64_t{1} << 24);

// Number of valid tilings of the p-by-q torus, all solutions counted.
std::uint64_t count_torus_tilings(const TileSet& ts, long long p, long long q,
                                  std::uint64_t node_cap = std::uint64_t{1} << 24);

// Compares the number of base tilings of the p-by-q torus with the number of
// stretched tilings of the correspondingly scaled torus (periods p*period_mu
// east and q*period_nu north), the macro grid anchored at the origin phase.
bool verify_isomorphism(const TileSet& base, const StretchedTileSet& sts,
                        long long p, long long q,
                        std::uint64_t node_cap = std::uint64_t{1} << 24);

}  // namespace calab
