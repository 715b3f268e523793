#pragma once

#include <string>

#include "calab/dyn1d.hpp"
#include "calab/slicing.hpp"

namespace calab {

// Corner permutivity: gamma is one of the four diagonal directions; fixing
// every neighborhood cell except the corner (ex*gx, ey*gy) must make the
// output a bijection of that corner's value.
bool is_gamma_permutive(const Rule2D& rule, Vec2 gamma,
                        std::uint64_t context_cap = std::uint64_t{1} << 24);

struct QuasiExpansivityCertificate {
  Vec2 gamma;
  std::string covered;  // slicing directions the certificate speaks for
};

// Issued when some diagonal corner and its opposite are both permutive and
// the sliced rules along that direction (k = 1, plus k = 2 when the table
// fits) are permutive on both ends.
std::optional<QuasiExpansivityCertificate> quasi_expansivity_certificate(const Rule2D& rule);

struct SlicedClosingEntry {
  Vec2 v;
  long long k = 1;
  ClosingVerdict right;
  ClosingVerdict left;
};

// A 1D closing violation of a sliced rule, read as a pair of plane
// configurations: periodic along v, eventually periodic across lines. When
// refutes_nu is set the lifted pair diverges on the nu-positive side only,
// so equal images refute closingness along nu; otherwise along -nu.
struct Sliced2DWitness {
  Vec2 nu;
  Vec2 v;
  Side side = Side::Right;
  bool refutes_nu = true;
  ClosingWitness pair;
};

struct NuClosingReport {
  Vec2 nu;
  std::vector<SlicedClosingEntry> entries;
  bool refuted = false;      // some v: not closing on either side
  bool all_closing = false;  // every v closing on both sides (supporting only)
  std::optional<Sliced2DWitness> witness;
};

// Slices the rule at each v and decides 1D closingness on both sides.
// Closing verdicts across the whole list support (without proving)
// closingness along nu; a v that fails on both sides refutes it and the
// lifted witness is attached.
NuClosingReport nu_closing_evidence(const Rule2D& rule, Vec2 nu, const std::vector<Vec2>& v_list,
                                    std::uint64_t vertex_cap = std::uint64_t{1} << 22);

// Re-checks a lifted witness on the plane: 1D re-verification, in-window
// differences confined to the stated side, and equal images after one step
// over a centered window of the given radius.
bool verify_sliced_witness(const Rule2D& rule, const Sliced2DWitness& w,
                           long long window_radius = 6);

struct NuMuBounds {
  int max_background_period = 2;
  int max_seed_side = 2;
};

// Pair of plane configurations over a torus background that differ exactly
// on `seed` (step == 0) or on the orbit seed + Z*step (step != 0; the step
// must be orthogonal to both nu and mu and a background period, keeping the
// divergence inside the region both asymptotic conditions allow).
struct NuMuWitness {
  Vec2 nu;
  Vec2 mu;
  TorusConfig2D background;
  std::vector<Vec2> seed;
  std::vector<Sym> a_vals;
  std::vector<Sym> b_vals;
  Vec2 step{0, 0};
};

// Bounded deterministic search for a witness pair with exactly equal images;
// nullopt means none exists within the bounds (not a proof of closingness).
std::optional<NuMuWitness> nu_mu_closing_refuter(const Rule2D& rule, Vec2 nu, Vec2 mu,
                                                 const NuMuBounds& bounds = {});

// Exact re-check: well-formed, distinct, and equal images everywhere (the
// image can only differ where a window reaches a difference cell; those
// cells are checked directly, one orbit representative each).
bool verify_nu_mu_witness(const Rule2D& rule, const NuMuWitness& w);

enum class SensitivityAnswer { SensitiveEvidence, NotSensitiveEvidence, Unknown };

struct SensitivityReport {
  Vec2 nu;
  Vec2 v;
  SensitivityAnswer answer = SensitivityAnswer::Unknown;
  std::optional<BlockingReport> blocking;  // confirmed word, or first undecided
};

// Searches the sliced rule for a blocking word of window size r*: a
// confirmed word is evidence against sensitivity along nu, refutation of
// every candidate is evidence for it.
SensitivityReport quasi_sensitivity_check(const Rule2D& rule, Vec2 nu, Vec2 v,
                                          int extra_len = 1, int horizon = 6,
                                          std::uint64_t config_cap = std::uint64_t{1} << 20);

enum class CountMode { Exact, Sample };

struct EntropyEntry {
  int w = 1;
  int t = 1;
  std::uint64_t count = 0;
  bool exact = true;   // false: sampled lower bound
  double ratio = 0.0;  // log2(count) / t
};

struct EntropyTable {
  std::vector<EntropyEntry> rows;
};

// Number of distinct w-by-w-by-t space-time boxes. Exact mode enumerates
// every block of side w + 2*extent*(t-1) (capped at block_cap blocks);
// Sample mode draws `samples` random blocks and yields a lower bound.
EntropyEntry count_rectangles(const Rule2D& rule, int w, int t, CountMode mode,
                              std::uint64_t samples = 1024, std::uint64_t seed = 0,
                              std::uint64_t block_cap = std::uint64_t{1} << 25);

// 1D variant: distinct w-by-t space-time strips.
EntropyEntry count_rectangles_1d(const Rule1D& rule, int w, int t, CountMode mode,
                                 std::uint64_t samples = 1024, std::uint64_t seed = 0,
                                 std::uint64_t block_cap = std::uint64_t{1} << 25);

// One row per (w, t) pair, widths outer, heights inner.
EntropyTable entropy_growth_report(const Rule2D& rule, const std::vector<int>& widths,
                                   const std::vector<int>& heights,
                                   CountMode mode = CountMode::Exact,
                                   std::uint64_t samples = 1024, std::uint64_t seed = 0,
                                   std::uint64_t block_cap = std::uint64_t{1} << 25);

}  // namespace calab
