#pragma once

#include "calab/core.hpp"

namespace calab {

enum class Side { Left, Right };

// Bi-infinite configuration with periodic tails: cells below mid_start repeat
// `left` (anchored so [mid_start - |left|, mid_start) reads `left`), cells
// from mid_end() on repeat `right`.
struct EPConfig1D {
  Alphabet alphabet = Alphabet(1);
  std::vector<Sym> left;
  std::vector<Sym> middle;
  long long mid_start = 0;
  std::vector<Sym> right;

  long long mid_end() const { return mid_start + static_cast<long long>(middle.size()); }
  Sym at(long long i) const;
};

// Exact image; tails keep their periods, the middle widens by the radius.
EPConfig1D apply_ep(const Rule1D& rule, const EPConfig1D& c);
// Exact equality of the described bi-infinite configurations.
bool ep_equal(const EPConfig1D& a, const EPConfig1D& b);
// d with d(i) = c(-i).
EPConfig1D reverse_ep(const EPConfig1D& c);

bool is_rightmost_permutive(const Rule1D& rule);
bool is_leftmost_permutive(const Rule1D& rule);

enum class ClosingAnswer { Closing, NotClosing, Unknown };

// For side Right the two configurations share their left tail and diverge
// rightward; for side Left the mirror image.
struct ClosingWitness {
  EPConfig1D a;
  EPConfig1D b;
};

struct ClosingVerdict {
  Side side;
  ClosingAnswer answer;
  std::optional<ClosingWitness> witness;
};

// Decides side-closingness by reachability in the graph of window pairs
// (exact for radius >= 1; radius 0 reduces to injectivity of the local map).
// |A|^(4r) above vertex_cap yields Unknown.
ClosingVerdict check_closing(const Rule1D& rule, Side side,
                             std::uint64_t vertex_cap = std::uint64_t{1} << 22);

// Independent brute-force search over pairs sharing an anchored periodic
// tail on the asymptotic side: heads of exactly head_len cells, tail periods
// up to max_period. Returns the first witness in enumeration order.
std::optional<ClosingWitness> closing_oracle(const Rule1D& rule, Side side, int head_len,
                                             int max_period);

// Re-checks a witness: distinct configurations, shared tail on the
// asymptotic side, exactly equal images.
bool verify_closing_witness(const Rule1D& rule, Side side, const ClosingWitness& w);

enum class BlockingStatus { Blocking, NotBlockingWithin, UnknownAt };

struct BlockingReport {
  std::vector<Sym> word;
  int s = 1;
  int offset = 0;
  BlockingStatus status = BlockingStatus::UnknownAt;
  int horizon = 0;
};

// Status of one word: Blocking if some offset passes the sound singleton
// fixpoint; NotBlockingWithin if every offset provably leaks within the
// horizon (exact divergence over all extensions); UnknownAt otherwise.
// Exact refutation enumerates free dependency cells and is skipped (leaving
// UnknownAt) when their count exceeds config_cap states.
BlockingReport classify_blocking(const Rule1D& rule, const std::vector<Sym>& word, int s,
                                 int horizon, std::uint64_t config_cap = std::uint64_t{1} << 20);

// Scans words of length s..max_len in lexicographic order: first confirmed
// word wins; if none confirms, the first undecided word is reported as
// UnknownAt; nullopt means every candidate was refuted.
std::optional<BlockingReport> find_blocking_word(const Rule1D& rule, int s, int max_len,
                                                 int horizon,
                                                 std::uint64_t config_cap = std::uint64_t{1}
                                                                            << 20);

struct ExpansivityCertificate1D {
  bool leftmost = false;
  bool rightmost = false;
  int epsilon_exponent = 0;
};

// Issued exactly when the rule is permutive on both ends; the exponent is
// the rule radius.
std::optional<ExpansivityCertificate1D> expansivity_certificate(const Rule1D& rule);

// Mirror rule g(x_-r..x_r) = f(x_r..x_-r); swaps the two closing sides.
Rule1D mirror_rule(const Rule1D& rule);

}  // namespace calab
