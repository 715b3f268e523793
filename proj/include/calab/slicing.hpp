#pragma once

#include "calab/core.hpp"

namespace calab {

// Decomposition of the plane into parallel lattice lines. Lines run along d
// (primitive, lexicographically positive); line i is the one through i * y1,
// and every cell decomposes uniquely as x = i * y1 + t * d.
struct LineFamily {
  Vec2 nu;
  Vec2 d;
  Vec2 y1;
  int axis = 0;  // reference axis for line numbering: 0 = x-axis, 1 = y-axis

  long long line_index(Vec2 x) const;
  // (i, t) with x = i * y1 + t * d
  std::pair<long long, long long> decompose(Vec2 x) const;
  Vec2 compose(long long i, long long t) const { return i * y1 + t * d; }

  friend bool operator==(const LineFamily& a, const LineFamily& b) {
    return a.nu == b.nu && a.d == b.d && a.y1 == b.y1 && a.axis == b.axis;
  }
};

LineFamily build_family(Vec2 nu);

// Largest |line index| over the radius-r Moore neighborhood.
int compute_rstar(const LineFamily& family, int r);

// A 2D rule restricted to configurations invariant under the shift by
// v = k * d, rewritten as a 1D rule over the alphabet of packed k-cell
// slice words.
struct SlicedCA {
  Rule2D base;
  LineFamily family;
  Vec2 v;
  long long k = 1;
  Alphabet sliced_alphabet;
  int rstar = 0;
  Rule1D sliced_rule;
};

SlicedCA build_sliced_rule(const Rule2D& rule, Vec2 nu, Vec2 v);

// Packed slice words: vals[0] is the cell on line i at offset 0, most
// significant in the packed symbol.
Sym pack_slice(std::span<const Sym> vals, std::uint32_t a);
std::vector<Sym> unpack_slice(Sym b, std::uint32_t a, long long k);

// Rewrites a torus configuration invariant under the shift by v as the 1D
// configuration of packed slice words (line i at position i).
PeriodicConfig1D slice_config(const TorusConfig2D& c, const SlicedCA& s);

// Inverse of slice_config; picks canonical torus dimensions from the
// invariance lattice generated by v and period * y1.
TorusConfig2D unslice_config(const PeriodicConfig1D& a, const SlicedCA& s);

}  // namespace calab
