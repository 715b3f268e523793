#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "calab/core.hpp"
#include "calab/stretch.hpp"
#include "calab/wang.hpp"

namespace calab {

// Directed hierarchy pattern expressed over the shared tile set, with the
// serpentine path decomposition the witness constructions split along.
struct AnchoredPattern {
  HierarchicalPattern pattern;
  std::vector<int> k_tiles;              // row-major base tile ids
  std::vector<int> region;               // row-major path index per cell
  std::vector<std::vector<Vec2>> paths;  // local coords, visit order
};

// Product CA over (hierarchy tile, user tile, bit) states. The rule keeps
// both tile layers fixed; it xors the cell's bit with the bit of the
// macro-tile its own macro-tile's direction points to, but only when the
// five macro-tiles around the cell (own plus the four pointed by the scaled
// periods) each hold one exact macro-tile, all adjacencies inside that
// window match on both tile layers, and each macro-tile carries one bit
// value. Any other neighborhood leaves the bit unchanged.
struct ReductionCA {
  TileSet tau;
  StretchedTileSet K;  // stretched union of both anchored hierarchy patterns
  int step = 0;        // hierarchy depth the anchored patterns come from
  long long m = 0;     // longest macro-tile side, in border edges
  // Procedural rule; the Von Neumann extents are the smallest symmetric pair
  // whose diamond covers the whole five-macro-tile window.
  Rule2D rule;
  AnchoredPattern south_mid;  // two paths, split along the nu axis
  AnchoredPattern center;     // four paths, split along both axes

  std::uint32_t states() const { return rule.alphabet.size(); }
  // Layer values are positions in K.tiles.tiles and tau.tiles respectively.
  int k_layer(Sym s) const;
  int tau_layer(Sym s) const;
  int bit_layer(Sym s) const { return static_cast<int>(s & 1); }
  Sym encode(int k_tile, int tau_tile, int bit) const;
};

// Builds the product CA for the given periods: the hierarchy patterns of the
// requested step at the two splitting anchors are realized over one deduped
// tile set, stretched over build_shape(nu, mu), and combined with the user
// tiles and a bit per cell.
ReductionCA build_reduction(const TileSet& tau, Vec2 nu, Vec2 mu, int step = 3,
                            std::uint32_t state_cap = std::uint32_t{1} << 20);

// Same rule over a caller-supplied stretched tile set. No anchored patterns
// are attached, so build_witness rejects the result; the probe and the rule
// itself work as usual.
ReductionCA build_reduction(const TileSet& tau, StretchedTileSet K,
                            std::uint32_t state_cap = std::uint32_t{1} << 20);

enum class WitnessKind : std::uint8_t { MuAsymptotic, NuMuAsymptotic };

struct SplitLine {
  Vec2 point;
  Vec2 dir;
};

// Pair of configurations with identical tile layers (a valid user tiling
// under the anchored hierarchy pattern) whose bits differ exactly on the
// macro-tiles of one serpentine region: the side holding the pattern's
// southwest corner. Inside `core` every cell's five-macro-tile window lies
// within the pattern, so one rule step cancels the difference there.
struct WitnessPair {
  WitnessKind kind = WitnessKind::MuAsymptotic;
  AsymptoticPair2D pair;
  std::vector<SplitLine> split_lines;  // one line along nu, plus one along mu
  Rect core;
};

// Errors with Errc::incompatible when no valid user tiling is found on the
// probed tori, and with Errc::invalid_argument when `red` carries no
// anchored patterns.
WitnessPair build_witness(const ReductionCA& red, WitnessKind kind);

// True iff the two halves of the pair have identical content over the window
// after the given number of rule steps. Pairs with equal halves are rejected
// by the underlying pair validation.
bool check_equal_image(const ReductionCA& red, const AsymptoticPair2D& pair, Rect window,
                       int steps = 1, std::uint64_t budget = global_budget());

struct ProbeBounds {
  long long p = 1;  // torus size in shape wrap periods, horizontal
  long long q = 1;  // vertical
  std::uint64_t max_tau_layers = 4;
  std::uint64_t max_bit_layers = std::uint64_t{1} << 14;
  std::uint64_t node_cap = std::uint64_t{1} << 22;
};

// One equal-image pair found by the probe. differences_valid reports whether
// every cell where the bits differ sits inside five locally valid
// macro-tiles on both layers, the structural mark the rule forces on any
// pair it maps together.
struct ProbePair {
  TorusConfig2D a;
  TorusConfig2D b;
  bool differences_valid = false;
};

struct ProbeReport {
  long long w = 0;  // torus actually probed
  long long h = 0;
  std::uint64_t k_layers = 0;    // uniform hierarchy layers tried
  std::uint64_t tau_layers = 0;  // valid user layers enumerated
  std::uint64_t fallback_tau_layers = 0;  // probed when no valid layer exists
  std::uint64_t bit_layers = 0;           // per background
  std::uint64_t equal_image_pairs = 0;    // distinct bits, equal images
  std::uint64_t witnesses = 0;            // of those, differences_valid
  bool capped = false;
  std::optional<ProbePair> example;  // first witness found
};

// Exhausts bit layers over backgrounds assembled from uniform hierarchy
// layers and enumerated user layers on a small torus, groups them by their
// one-step image, and checks the found equal-image pairs for the validity
// mark around their differences.
ProbeReport bounded_closing_probe(const ReductionCA& red, const ProbeBounds& bounds = {});

}  // namespace calab
