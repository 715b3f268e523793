#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "calab/common.hpp"

namespace calab {

using Color = std::uint32_t;

enum class TileSide : std::uint8_t { N, S, E, W };

// Unit step taken when leaving a cell through the given side.
Vec2 side_step(TileSide s);

struct Tile {
  int id = 0;
  // Edge colors indexed by TileSide.
  std::array<Color, 4> colors{};
  std::optional<TileSide> direction;

  Color color(TileSide s) const { return colors[static_cast<std::size_t>(s)]; }
};

struct TileSet {
  std::vector<Tile> tiles;
  std::vector<Color> palette;

  const Tile& tile(int id) const;
};

// Builds a set from the given tiles, collecting the palette from the edge
// colors actually used. Duplicate ids are rejected.
TileSet make_tileset(std::vector<Tile> tiles);

enum class DomainKind : std::uint8_t { Rectangle, Torus };

struct Tiling {
  DomainKind kind = DomainKind::Rectangle;
  long long w = 0;
  long long h = 0;
  std::vector<int> cells;  // row-major tile ids, cell (x, y) at y * w + x
  bool valid = false;      // set by the producing search, re-checkable

  int at(long long x, long long y) const {
    return cells[static_cast<std::size_t>(y * w + x)];
  }
};

struct EdgeViolation {
  Vec2 cell;
  TileSide side = TileSide::N;
  Color own = 0;
  Color neighbor = 0;
};

struct TilingCheck {
  bool valid = false;
  std::optional<EdgeViolation> violation;  // first one in row-major scan order
};

// Re-checks every horizontal and vertical adjacency (wrapping on torus
// domains). Unknown tile ids are an error.
TilingCheck check_tiling(const TileSet& ts, const Tiling& t);

enum class SearchOutcome : std::uint8_t { Found, Exhausted, Unknown };

struct TilingSearch {
  SearchOutcome outcome = SearchOutcome::Unknown;
  std::optional<Tiling> tiling;
  std::uint64_t nodes = 0;  // backtracking nodes visited
};

// Backtracking search for an n-by-n tiling with free boundary, row-major cell
// order and ascending tile ids, first solution returned. Exhausted means no
// such square exists, which also rules out tiling the plane; Found is evidence
// only. Node budget overrun yields Unknown.
TilingSearch tiles_square(const TileSet& ts, long long n,
                          std::uint64_t node_cap = std::uint64_t{1} << 24);

// Same search on a p-by-q torus. A found torus tiling unrolls to a valid
// periodic tiling of the plane.
TilingSearch tiles_torus(const TileSet& ts, long long p, long long q,
                         std::uint64_t node_cap = std::uint64_t{1} << 24);

struct PathTrace {
  std::vector<Vec2> cells;   // visited cells in order, start included
  bool left_domain = false;  // stepped off a rectangle boundary
  bool cycle = false;        // next cell was already visited
  bool truncated = false;    // max_steps reached first
};

// Walks the successor directions starting at start. Every tile on the walk
// must be directed. Torus domains wrap; rectangle domains end the walk at the
// boundary.
PathTrace follow_path(const TileSet& ts, const Tiling& t, Vec2 start,
                      std::uint64_t max_steps);

enum class CellLabel : std::uint8_t { Blank, ArmH, ArmV, Center };

enum class Anchor : std::uint8_t { SWCorner, SouthMid, EastMid, Center };

// Square label pattern built from nested crosses: the step-n square has side
// 2^(n+1) - 1 and splits into four step-(n-1) copies separated by a full
// horizontal and a full vertical arm through the center.
struct HierarchicalPattern {
  int step = 1;
  long long side = 3;
  Anchor anchor = Anchor::SWCorner;
  Vec2 origin;  // plane position of the pattern's SW cell
  std::vector<CellLabel> cells;  // row-major, side * side

  CellLabel at(long long x, long long y) const {
    return cells[static_cast<std::size_t>(y * side + x)];
  }
};

// Anchor placement: SWCorner puts the SW cell at the origin; SouthMid centers
// the south side on it; EastMid centers the east side; Center centers the
// whole square, putting the top-level cross center at the origin.
HierarchicalPattern generate_hierarchy(int step, Anchor anchor,
                                       std::uint64_t cell_cap = std::uint64_t{1} << 26);

struct DirectedPattern {
  HierarchicalPattern pattern;
  std::vector<TileSide> dirs;            // row-major successor direction per cell
  std::vector<std::vector<Vec2>> paths;  // local coords, visit order
};

// Assigns one serpentine path per region. Regions split the square along the
// central arms: the whole square for SWCorner, the two sides of the vertical
// arm for SouthMid, the two sides of the horizontal arm for EastMid, and the
// four quadrants for Center. Arm cells join the region clockwise-adjacent to
// their arm and the center cell joins the NE quadrant. Every path starts next
// to the anchor origin and leaves the square at its far boundary, so the
// directions decompose into exactly 1, 2 or 4 maximal disjoint paths covering
// all cells.
DirectedPattern attach_space_filling_path(const HierarchicalPattern& h);

struct WangifiedPattern {
  TileSet tiles;
  Tiling tiling;  // the pattern itself, realized over the derived tile ids
};

// Derives a tile set from a directed label pattern: each edge color is the
// ordered pair of cell labels sharing that edge (off-pattern cells count as a
// fifth label), and cells with equal label, equal edge colors and equal
// direction collapse into one tile. The returned tiling re-checks valid.
WangifiedPattern wangify(const DirectedPattern& p);

}  // namespace calab
