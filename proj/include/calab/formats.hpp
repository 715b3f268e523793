#pragma once

#include <string>
#include <variant>

#include "calab/core.hpp"
#include "calab/wang.hpp"

namespace calab {

// Line-oriented rule format. '#' starts a comment, blank lines are skipped,
// keywords are lowercase:
//
//   rule <1d|2d>
//   alphabet <size>
//   radius <r>
//   neighborhood <interval|moore|von-neumann>
//   table <digits> | builtin <name>
//
// 1d rules use the interval neighborhood, 2d rules moore or von-neumann.
// Explicit tables are base-|alphabet| digit strings (0-9 then a-z, so the
// alphabet tops out at 36 symbols) in the rule's window order, first window
// cell most significant. Builtin names: identity, and-min, xor1d (1d,
// radius 1), xor-corners and shift:<dx>,<dy> (2d).
std::variant<Rule1D, Rule2D> parse_rule(const std::string& text);

// Canonical five-line form with an explicit table; parsing it back yields
// the same rule and emitting that is byte-identical. Procedural rules and
// alphabets above 36 symbols have no table rendering and are errors.
std::string emit_rule(const Rule1D& rule);
std::string emit_rule(const Rule2D& rule);

// Tile format, one tile per line, sides in fixed order:
//
//   tile <id> N=<color> S=<color> E=<color> W=<color> [dir=<N|S|E|W>]
//
// Parse errors carry the offending line number.
TileSet parse_tiles(const std::string& text);
std::string emit_tiles(const TileSet& ts);

// Label grid, one row per line, top row first: '.' blank, '-' horizontal
// arm, '|' vertical arm, '+' cross center.
std::string render_labels(const HierarchicalPattern& h);

// Plain PBM (P1) bitmap, top row first; cross cells are 1, blanks 0.
std::string render_pbm(const HierarchicalPattern& h);

}  // namespace calab
