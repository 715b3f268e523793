#include "calab/dyn2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>

namespace calab {

namespace {

long long floor_mod(long long x, long long m) {
  long long r = x % m;
  return r < 0 ? r + m : r;
}

bool next_word(std::vector<Sym>& w, std::uint32_t a) {
  for (std::size_t i = w.size(); i > 0; --i) {
    if (++w[i - 1] < a) return true;
    w[i - 1] = 0;
  }
  return false;
}

}  // namespace

bool is_gamma_permutive(const Rule2D& rule, Vec2 gamma, std::uint64_t context_cap) {
  if ((gamma.x != 1 && gamma.x != -1) || (gamma.y != 1 && gamma.y != -1))
    fail(Errc::invalid_argument, "corner direction must be diagonal");
  std::uint32_t a = rule.alphabet.size();
  if (a == 1) return true;
  Vec2 corner{rule.ex * gamma.x, rule.ey * gamma.y};
  std::size_t pos = rule.offsets.size();
  for (std::size_t i = 0; i < rule.offsets.size(); ++i)
    if (rule.offsets[i] == corner) pos = i;
  if (pos == rule.offsets.size()) return false;

  std::uint64_t contexts = 1;
  for (std::size_t i = 0; i + 1 < rule.offsets.size(); ++i) {
    contexts *= a;
    if (contexts > context_cap) fail(Errc::cap_exceeded, "too many fixed contexts");
  }
  std::uint32_t full = (std::uint32_t{1} << a) - 1;
  std::vector<Sym> w(rule.offsets.size(), 0);
  for (std::uint64_t ctx = 0; ctx < contexts; ++ctx) {
    std::uint32_t seen = 0;
    for (Sym alpha = 0; alpha < a; ++alpha) {
      w[pos] = alpha;
      seen |= std::uint32_t{1} << rule.eval(w);
    }
    if (seen != full) return false;
    w[pos] = 0;
    for (std::size_t i = w.size(); i > 0; --i) {
      std::size_t j = i - 1;
      if (j == pos) continue;
      if (++w[j] < a) break;
      w[j] = 0;
    }
  }
  return true;
}

std::optional<QuasiExpansivityCertificate> quasi_expansivity_certificate(const Rule2D& rule) {
  const Vec2 corners[4] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
  for (Vec2 g : corners) {
    bool both = false;
    try {
      both = is_gamma_permutive(rule, g) && is_gamma_permutive(rule, -g);
    } catch (const Error&) {
      continue;
    }
    if (!both) continue;
    LineFamily fam = build_family(g);
    bool checked = false, two_ended = true;
    for (long long k : {1LL, 2LL}) {
      try {
        SlicedCA s = build_sliced_rule(rule, g, k * fam.d);
        checked = true;
        if (!is_rightmost_permutive(s.sliced_rule) || !is_leftmost_permutive(s.sliced_rule)) {
          two_ended = false;
          break;
        }
      } catch (const Error&) {
      }
    }
    if (!checked || !two_ended) continue;
    return QuasiExpansivityCertificate{
        g, "directions sign-compatible with " + format_vec(g) + " or " + format_vec(-g)};
  }
  return std::nullopt;
}

NuClosingReport nu_closing_evidence(const Rule2D& rule, Vec2 nu, const std::vector<Vec2>& v_list,
                                    std::uint64_t vertex_cap) {
  if (v_list.empty()) fail(Errc::invalid_argument, "no slice shifts given");
  NuClosingReport rep;
  rep.nu = nu;
  bool all = true;
  for (Vec2 v : v_list) {
    SlicedCA sca = build_sliced_rule(rule, nu, v);
    SlicedClosingEntry e;
    e.v = v;
    e.k = sca.k;
    e.right = check_closing(sca.sliced_rule, Side::Right, vertex_cap);
    e.left = check_closing(sca.sliced_rule, Side::Left, vertex_cap);
    all = all && e.right.answer == ClosingAnswer::Closing &&
          e.left.answer == ClosingAnswer::Closing;
    if (!rep.refuted && e.right.answer == ClosingAnswer::NotClosing &&
        e.left.answer == ClosingAnswer::NotClosing) {
      rep.refuted = true;
      bool right_lifts_to_nu = dot(nu, sca.family.y1) > 0;
      const ClosingVerdict& cv = right_lifts_to_nu ? e.right : e.left;
      rep.witness = Sliced2DWitness{nu, v, right_lifts_to_nu ? Side::Right : Side::Left, true,
                                    *cv.witness};
    }
    rep.entries.push_back(std::move(e));
  }
  rep.all_closing = all;
  return rep;
}

bool verify_sliced_witness(const Rule2D& rule, const Sliced2DWitness& w,
                           long long window_radius) {
  SlicedCA sca = build_sliced_rule(rule, w.nu, w.v);
  if (!verify_closing_witness(sca.sliced_rule, w.side, w.pair)) return false;
  bool right_lifts_to_nu = dot(w.nu, sca.family.y1) > 0;
  if (w.refutes_nu != ((w.side == Side::Right) == right_lifts_to_nu)) return false;

  std::uint32_t a = rule.alphabet.size();
  auto lifted = [&](const EPConfig1D& ep) {
    return [&, ep](Vec2 x) {
      auto [i, t] = sca.family.decompose(x);
      return unpack_slice(ep.at(i), a, sca.k)[static_cast<std::size_t>(floor_mod(t, sca.k))];
    };
  };
  auto fa = lifted(w.pair.a);
  auto fb = lifted(w.pair.b);

  // Divergence lines: at or after the merged tail for a Right-side witness,
  // strictly before it for a Left-side one.
  long long lo_line = std::min(w.pair.a.mid_start, w.pair.b.mid_start);
  long long hi_line = std::max(w.pair.a.mid_end(), w.pair.b.mid_end());
  for (long long y = -window_radius; y <= window_radius; ++y)
    for (long long x = -window_radius; x <= window_radius; ++x) {
      Vec2 p{x, y};
      if (fa(p) == fb(p)) continue;
      long long line = sca.family.decompose(p).first;
      if (w.side == Side::Right && line < lo_line) return false;
      if (w.side == Side::Left && line >= hi_line) return false;
    }

  Rect r{-window_radius - rule.ex, -window_radius - rule.ey,
         2 * window_radius + 1 + 2 * rule.ex, 2 * window_radius + 1 + 2 * rule.ey};
  Grid2D ga = step_grid(rule, materialize(fa, r, global_budget()));
  Grid2D gb = step_grid(rule, materialize(fb, r, global_budget()));
  return ga == gb;
}

// ---------------------------------------------------------------------------
// nu-mu refuter

namespace {

// Index of the seed cell whose orbit under `step` contains x, or -1.
int orbit_index(const NuMuWitness& w, Vec2 x) {
  for (std::size_t s = 0; s < w.seed.size(); ++s) {
    Vec2 d = x - w.seed[s];
    if (w.step.x == 0 && w.step.y == 0) {
      if (d.x == 0 && d.y == 0) return static_cast<int>(s);
      continue;
    }
    long long n;
    if (w.step.x != 0) {
      if (d.x % w.step.x != 0) continue;
      n = d.x / w.step.x;
    } else {
      if (d.x != 0 || d.y % w.step.y != 0) continue;
      n = d.y / w.step.y;
    }
    if (n * w.step == d) return static_cast<int>(s);
  }
  return -1;
}

}  // namespace

bool verify_nu_mu_witness(const Rule2D& rule, const NuMuWitness& w) {
  if (w.seed.empty() || w.seed.size() != w.a_vals.size() || w.seed.size() != w.b_vals.size())
    return false;
  if ((w.nu.x == 0 && w.nu.y == 0) || (w.mu.x == 0 && w.mu.y == 0)) return false;
  if (w.a_vals == w.b_vals) return false;
  bool periodic = !(w.step.x == 0 && w.step.y == 0);
  if (periodic) {
    if (dot(w.nu, w.step) != 0 || dot(w.mu, w.step) != 0) return false;
    if (w.step.x % w.background.w != 0 || w.step.y % w.background.h != 0) return false;
  }
  for (std::size_t i = 0; i < w.seed.size(); ++i)
    for (std::size_t j = i + 1; j < w.seed.size(); ++j) {
      NuMuWitness probe = w;
      probe.seed = {w.seed[j]};
      if (orbit_index(probe, w.seed[i]) >= 0) return false;
    }

  auto value = [&](const std::vector<Sym>& vals, Vec2 x) {
    int s = orbit_index(w, x);
    return s >= 0 ? vals[static_cast<std::size_t>(s)] : w.background.at(x);
  };
  std::vector<Sym> wa(rule.offsets.size()), wb(rule.offsets.size());
  for (Vec2 p : w.seed)
    for (Vec2 o : rule.offsets) {
      Vec2 y = p - o;
      for (std::size_t i = 0; i < rule.offsets.size(); ++i) {
        wa[i] = value(w.a_vals, y + rule.offsets[i]);
        wb[i] = value(w.b_vals, y + rule.offsets[i]);
      }
      if (rule.eval(wa) != rule.eval(wb)) return false;
    }
  return true;
}

std::optional<NuMuWitness> nu_mu_closing_refuter(const Rule2D& rule, Vec2 nu, Vec2 mu,
                                                 const NuMuBounds& bounds) {
  if ((nu.x == 0 && nu.y == 0) || (mu.x == 0 && mu.y == 0))
    fail(Errc::invalid_argument, "directions must be nonzero");
  std::uint32_t a = rule.alphabet.size();

  std::vector<Vec2> steps{{0, 0}};
  const Vec2 candidates[] = {{1, 0},  {0, 1},  {1, 1}, {1, -1}, {2, 1},
                             {1, 2},  {2, -1}, {1, -2}, {2, 2}, {2, -2}};
  for (Vec2 s : candidates)
    if (dot(nu, s) == 0 && dot(mu, s) == 0) steps.push_back(s);

  for (long long bw = 1; bw <= bounds.max_background_period; ++bw)
    for (long long bh = 1; bh <= bounds.max_background_period; ++bh) {
      std::vector<Sym> fill(static_cast<std::size_t>(bw * bh), 0);
      do {
        TorusConfig2D bg{rule.alphabet, bw, bh, fill};
        for (Vec2 step : steps) {
          if (step.x % bw != 0 || step.y % bh != 0) continue;
          for (int sx = 1; sx <= bounds.max_seed_side; ++sx)
            for (int sy = 1; sy <= bounds.max_seed_side; ++sy)
              for (long long ox = 0; ox < bw; ++ox)
                for (long long oy = 0; oy < bh; ++oy) {
                  std::vector<Vec2> seed;
                  for (int j = 0; j < sy; ++j)
                    for (int i = 0; i < sx; ++i) seed.push_back({ox + i, oy + j});
                  NuMuWitness w{nu, mu, bg, seed,
                                std::vector<Sym>(seed.size(), 0),
                                std::vector<Sym>(seed.size(), 0), step};
                  std::vector<Sym> va(seed.size(), 0);
                  do {
                    std::vector<Sym> vb = va;
                    while (next_word(vb, a)) {
                      w.a_vals = va;
                      w.b_vals = vb;
                      if (verify_nu_mu_witness(rule, w)) return w;
                    }
                  } while (next_word(va, a));
                }
        }
      } while (next_word(fill, a));
    }
  return std::nullopt;
}

SensitivityReport quasi_sensitivity_check(const Rule2D& rule, Vec2 nu, Vec2 v, int extra_len,
                                          int horizon, std::uint64_t config_cap) {
  SlicedCA sca = build_sliced_rule(rule, nu, v);
  int s = sca.rstar < 1 ? 1 : sca.rstar;
  auto found = find_blocking_word(sca.sliced_rule, s, s + extra_len, horizon, config_cap);
  SensitivityReport rep;
  rep.nu = nu;
  rep.v = v;
  if (!found) {
    rep.answer = SensitivityAnswer::SensitiveEvidence;
  } else if (found->status == BlockingStatus::Blocking) {
    rep.answer = SensitivityAnswer::NotSensitiveEvidence;
    rep.blocking = std::move(found);
  } else {
    rep.answer = SensitivityAnswer::Unknown;
    rep.blocking = std::move(found);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Entropy counting

namespace {

// Distinct-box accumulator; packs into 64 bits when the box fits, falls back
// to byte strings otherwise.
class BoxSet {
public:
  BoxSet(std::uint64_t box_cells, std::uint32_t a) {
    std::uint64_t space = 1;
    small_ = true;
    for (std::uint64_t i = 0; i < box_cells; ++i) {
      if (space > (std::numeric_limits<std::uint64_t>::max() / 2) / a) {
        small_ = false;
        break;
      }
      space *= a;
    }
  }

  void start() {
    key_ = 0;
    buf_.clear();
  }
  void push(Sym s, std::uint32_t a) {
    if (small_)
      key_ = key_ * a + s;
    else
      buf_.push_back(static_cast<char>(s));
  }
  void commit() {
    if (small_)
      ints_.insert(key_);
    else
      strs_.insert(buf_);
  }
  std::uint64_t size() const { return small_ ? ints_.size() : strs_.size(); }

private:
  bool small_ = true;
  std::uint64_t key_ = 0;
  std::string buf_;
  std::unordered_set<std::uint64_t> ints_;
  std::unordered_set<std::string> strs_;
};

EntropyEntry make_entry(int w, int t, std::uint64_t count, bool exact) {
  return EntropyEntry{w, t, count, exact,
                      std::log2(static_cast<double>(count)) / static_cast<double>(t)};
}

}  // namespace

EntropyEntry count_rectangles(const Rule2D& rule, int w, int t, CountMode mode,
                              std::uint64_t samples, std::uint64_t seed,
                              std::uint64_t block_cap) {
  if (w < 1 || t < 1) fail(Errc::invalid_argument, "box dimensions must be positive");
  std::uint32_t a = rule.alphabet.size();
  long long sx = w + 2LL * rule.ex * (t - 1);
  long long sy = w + 2LL * rule.ey * (t - 1);
  std::uint64_t cells = static_cast<std::uint64_t>(sx * sy);

  BoxSet boxes(static_cast<std::uint64_t>(w) * w * t, a);
  std::vector<std::vector<Sym>> layers(static_cast<std::size_t>(t));
  for (int tau = 0; tau < t; ++tau)
    layers[static_cast<std::size_t>(tau)].resize(
        static_cast<std::size_t>((sx - 2LL * rule.ex * tau) * (sy - 2LL * rule.ey * tau)));
  std::vector<Sym> win(rule.offsets.size());
  auto run = [&](const std::vector<Sym>& block) {
    boxes.start();
    const std::vector<Sym>* cur = &block;
    for (int tau = 0; tau < t; ++tau) {
      long long cx = sx - 2LL * rule.ex * tau;
      long long bx = rule.ex * (t - 1 - tau), by = rule.ey * (t - 1 - tau);
      for (long long yy = 0; yy < w; ++yy)
        for (long long xx = 0; xx < w; ++xx)
          boxes.push((*cur)[static_cast<std::size_t>((by + yy) * cx + bx + xx)], a);
      if (tau + 1 < t) {
        std::vector<Sym>& next = layers[static_cast<std::size_t>(tau + 1)];
        long long nx = cx - 2 * rule.ex;
        long long ny = sy - 2LL * rule.ey * (tau + 1);
        for (long long yy = 0; yy < ny; ++yy)
          for (long long xx = 0; xx < nx; ++xx) {
            for (std::size_t i = 0; i < rule.offsets.size(); ++i)
              win[i] = (*cur)[static_cast<std::size_t>(
                  (yy + rule.ey + rule.offsets[i].y) * cx + xx + rule.ex + rule.offsets[i].x)];
            next[static_cast<std::size_t>(yy * nx + xx)] = rule.eval(win);
          }
        cur = &next;
      }
    }
    boxes.commit();
  };

  bool exact = mode == CountMode::Exact;
  if (exact) {
    std::uint64_t total = 1;
    for (std::uint64_t i = 0; i < cells; ++i) {
      if (total > block_cap / a) fail(Errc::cap_exceeded, "exact block enumeration too large");
      total *= a;
    }
    std::vector<Sym> block(cells, 0);
    do {
      run(block);
    } while (next_word(block, a));
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> d(0, a - 1);
    for (std::uint64_t n = 0; n < samples; ++n) {
      std::vector<Sym> block(cells);
      for (auto& x : block) x = d(rng);
      run(std::move(block));
    }
  }
  return make_entry(w, t, boxes.size(), exact);
}

EntropyEntry count_rectangles_1d(const Rule1D& rule, int w, int t, CountMode mode,
                                 std::uint64_t samples, std::uint64_t seed,
                                 std::uint64_t block_cap) {
  if (w < 1 || t < 1) fail(Errc::invalid_argument, "box dimensions must be positive");
  std::uint32_t a = rule.alphabet.size();
  int r = rule.radius;
  std::uint64_t cells = static_cast<std::uint64_t>(w) + 2ULL * r * (t - 1);

  BoxSet boxes(static_cast<std::uint64_t>(w) * t, a);
  std::vector<Sym> win(static_cast<std::size_t>(rule.width()));
  std::vector<std::vector<Sym>> layers(static_cast<std::size_t>(t));
  for (int tau = 0; tau < t; ++tau)
    layers[static_cast<std::size_t>(tau)].resize(cells - static_cast<std::size_t>(2 * r * tau));
  auto run = [&](const std::vector<Sym>& row) {
    boxes.start();
    const std::vector<Sym>* cur = &row;
    long long base = r * (t - 1);
    for (int tau = 0; tau < t; ++tau) {
      for (int xx = 0; xx < w; ++xx)
        boxes.push((*cur)[static_cast<std::size_t>(base + xx)], a);
      if (tau + 1 < t) {
        std::vector<Sym>& next = layers[static_cast<std::size_t>(tau + 1)];
        for (std::size_t i = 0; i < next.size(); ++i) {
          for (int j = 0; j < rule.width(); ++j)
            win[static_cast<std::size_t>(j)] = (*cur)[i + static_cast<std::size_t>(j)];
          next[i] = rule.eval(win);
        }
        cur = &next;
        base -= r;
      }
    }
    boxes.commit();
  };

  bool exact = mode == CountMode::Exact;
  if (exact) {
    std::uint64_t total = 1;
    for (std::uint64_t i = 0; i < cells; ++i) {
      if (total > block_cap / a) fail(Errc::cap_exceeded, "exact block enumeration too large");
      total *= a;
    }
    std::vector<Sym> row(cells, 0);
    do {
      run(row);
    } while (next_word(row, a));
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> d(0, a - 1);
    for (std::uint64_t n = 0; n < samples; ++n) {
      std::vector<Sym> row(cells);
      for (auto& x : row) x = d(rng);
      run(std::move(row));
    }
  }
  return make_entry(w, t, boxes.size(), exact);
}

EntropyTable entropy_growth_report(const Rule2D& rule, const std::vector<int>& widths,
                                   const std::vector<int>& heights, CountMode mode,
                                   std::uint64_t samples, std::uint64_t seed,
                                   std::uint64_t block_cap) {
  EntropyTable table;
  for (int w : widths)
    for (int t : heights)
      table.rows.push_back(count_rectangles(rule, w, t, mode, samples, seed, block_cap));
  return table;
}

}  // namespace calab
