#include "calab/dyn1d.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace calab {

namespace {

long long floor_mod(long long x, long long m) {
  long long r = x % m;
  return r < 0 ? r + m : r;
}

long long lcm_ll(long long a, long long b) { return a / gcd_ll(a, b) * b; }

}  // namespace

Sym EPConfig1D::at(long long i) const {
  if (i < mid_start) {
    long long n = static_cast<long long>(left.size());
    return left[static_cast<std::size_t>(floor_mod(i - mid_start, n))];
  }
  if (i < mid_end()) return middle[static_cast<std::size_t>(i - mid_start)];
  long long n = static_cast<long long>(right.size());
  return right[static_cast<std::size_t>((i - mid_end()) % n)];
}

EPConfig1D apply_ep(const Rule1D& rule, const EPConfig1D& c) {
  if (c.left.empty() || c.right.empty()) fail(Errc::invalid_argument, "empty tail period");
  long long r = rule.radius;
  std::vector<Sym> w(static_cast<std::size_t>(rule.width()));
  auto image_at = [&](long long i) {
    for (long long j = -r; j <= r; ++j) w[static_cast<std::size_t>(j + r)] = c.at(i + j);
    return rule.eval(w);
  };
  EPConfig1D out;
  out.alphabet = c.alphabet;
  out.mid_start = c.mid_start - r;
  out.middle.reserve(c.middle.size() + static_cast<std::size_t>(2 * r));
  for (long long i = out.mid_start; i < c.mid_end() + r; ++i) out.middle.push_back(image_at(i));
  long long nl = static_cast<long long>(c.left.size());
  for (long long i = out.mid_start - nl; i < out.mid_start; ++i) out.left.push_back(image_at(i));
  long long nr = static_cast<long long>(c.right.size());
  long long re = c.mid_end() + r;
  for (long long i = re; i < re + nr; ++i) out.right.push_back(image_at(i));
  return out;
}

bool ep_equal(const EPConfig1D& a, const EPConfig1D& b) {
  long long pl = lcm_ll(static_cast<long long>(a.left.size()),
                        static_cast<long long>(b.left.size()));
  long long pr = lcm_ll(static_cast<long long>(a.right.size()),
                        static_cast<long long>(b.right.size()));
  long long lo = std::min(a.mid_start, b.mid_start) - pl;
  long long hi = std::max(a.mid_end(), b.mid_end()) + pr;
  for (long long i = lo; i < hi; ++i)
    if (a.at(i) != b.at(i)) return false;
  return true;
}

EPConfig1D reverse_ep(const EPConfig1D& c) {
  EPConfig1D out;
  out.alphabet = c.alphabet;
  out.mid_start = 1 - c.mid_end();
  out.middle.assign(c.middle.rbegin(), c.middle.rend());
  out.left.assign(c.right.rbegin(), c.right.rend());
  out.right.assign(c.left.rbegin(), c.left.rend());
  return out;
}

Rule1D mirror_rule(const Rule1D& rule) {
  std::uint32_t a = rule.alphabet.size();
  int n = rule.width();
  std::vector<Sym> table(rule.table.size());
  std::vector<Sym> w(static_cast<std::size_t>(n));
  for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
    std::uint64_t m = idx;
    for (int i = n - 1; i >= 0; --i) {
      w[static_cast<std::size_t>(i)] = m % a;
      m /= a;
    }
    std::reverse(w.begin(), w.end());
    table[idx] = rule.table[rule.pack(w)];
  }
  return Rule1D{rule.alphabet, rule.radius, std::move(table)};
}

bool is_rightmost_permutive(const Rule1D& rule) {
  std::uint32_t a = rule.alphabet.size();
  std::uint64_t contexts = rule.table.size() / a;
  for (std::uint64_t u = 0; u < contexts; ++u) {
    std::uint32_t seen = 0;
    for (Sym alpha = 0; alpha < a; ++alpha) seen |= 1u << rule.table[u * a + alpha];
    if (seen != (a >= 32 ? ~0u : (1u << a) - 1)) return false;
  }
  return true;
}

bool is_leftmost_permutive(const Rule1D& rule) {
  std::uint32_t a = rule.alphabet.size();
  std::uint64_t contexts = rule.table.size() / a;
  for (std::uint64_t u = 0; u < contexts; ++u) {
    std::uint32_t seen = 0;
    for (Sym alpha = 0; alpha < a; ++alpha) seen |= 1u << rule.table[alpha * contexts + u];
    if (seen != (a >= 32 ? ~0u : (1u << a) - 1)) return false;
  }
  return true;
}

std::optional<ExpansivityCertificate1D> expansivity_certificate(const Rule1D& rule) {
  bool lm = is_leftmost_permutive(rule);
  bool rm = is_rightmost_permutive(rule);
  if (!(lm && rm)) return std::nullopt;
  return ExpansivityCertificate1D{lm, rm, rule.radius};
}

// ---------------------------------------------------------------------------
// Closingness

namespace {

std::vector<Sym> unpack_word(std::uint64_t p, std::uint32_t a, int len) {
  std::vector<Sym> w(static_cast<std::size_t>(len));
  for (int i = len - 1; i >= 0; --i) {
    w[static_cast<std::size_t>(i)] = p % a;
    p /= a;
  }
  return w;
}

// Right-closing violation for radius 0: two letters with the same image.
std::optional<ClosingWitness> radius0_witness(const Rule1D& rule) {
  std::uint32_t a = rule.alphabet.size();
  for (Sym x = 0; x < a; ++x)
    for (Sym y = static_cast<Sym>(x + 1); y < a; ++y)
      if (rule.table[x] == rule.table[y]) {
        EPConfig1D ca{rule.alphabet, {x}, {x}, 0, {x}};
        EPConfig1D cb{rule.alphabet, {x}, {y}, 0, {x}};
        return ClosingWitness{ca, cb};
      }
  return std::nullopt;
}

// The graph of window pairs scanned rightward: vertex (u, w) holds the last
// 2r cells of each configuration; appending (alpha, alpha') is allowed when
// the two produced image cells agree. A closing violation exists exactly
// when a vertex off the diagonal is reachable from the diagonal and starts
// an infinite path.
std::optional<ClosingWitness> right_violation(const Rule1D& rule, std::uint64_t vertex_cap,
                                              bool& capped) {
  capped = false;
  if (rule.radius == 0) return radius0_witness(rule);
  std::uint32_t a = rule.alphabet.size();
  int wlen = 2 * rule.radius;
  std::uint64_t m = 1;
  for (int i = 0; i < wlen; ++i) {
    m *= a;
    if (m > (std::uint64_t{1} << 31)) {
      capped = true;
      return std::nullopt;
    }
  }
  std::uint64_t nv = m * m;
  if (nv > vertex_cap) {
    capped = true;
    return std::nullopt;
  }
  std::uint64_t mdiv = m / a;  // |A|^(wlen-1)

  auto img_append = [&](std::uint64_t pu, Sym alpha) { return rule.table[pu * a + alpha]; };
  auto img_prepend = [&](Sym beta, std::uint64_t pu) { return rule.table[beta * m + pu]; };

  // Peel vertices without live successors.
  std::vector<std::uint16_t> out(nv);
  std::vector<char> live(nv, 1);
  std::deque<std::uint64_t> dead;
  for (std::uint64_t pu = 0; pu < m; ++pu)
    for (std::uint64_t pw = 0; pw < m; ++pw) {
      std::uint16_t cnt = 0;
      for (Sym x = 0; x < a; ++x)
        for (Sym y = 0; y < a; ++y) cnt += img_append(pu, x) == img_append(pw, y);
      std::uint64_t v = pu * m + pw;
      out[v] = cnt;
      if (cnt == 0) {
        live[v] = 0;
        dead.push_back(v);
      }
    }
  while (!dead.empty()) {
    std::uint64_t v = dead.front();
    dead.pop_front();
    std::uint64_t pu = v / m, pw = v % m;
    for (Sym x = 0; x < a; ++x)
      for (Sym y = 0; y < a; ++y) {
        if (img_prepend(x, pu) != img_prepend(y, pw)) continue;
        std::uint64_t pred = (x * mdiv + pu / a) * m + (y * mdiv + pw / a);
        if (!live[pred]) continue;
        if (--out[pred] == 0) {
          live[pred] = 0;
          dead.push_back(pred);
        }
      }
  }

  // Breadth-first search from the diagonal over live vertices.
  std::vector<char> seen(nv, 0);
  std::vector<std::int64_t> parent(nv, -1);
  std::vector<std::uint16_t> via(nv, 0);
  std::deque<std::uint64_t> queue;
  for (std::uint64_t pu = 0; pu < m; ++pu) {
    std::uint64_t v = pu * m + pu;
    if (!live[v]) continue;
    seen[v] = 1;
    queue.push_back(v);
  }
  std::int64_t target = -1;
  while (!queue.empty() && target < 0) {
    std::uint64_t v = queue.front();
    queue.pop_front();
    std::uint64_t pu = v / m, pw = v % m;
    if (pu != pw) {
      target = static_cast<std::int64_t>(v);
      break;
    }
    for (Sym x = 0; x < a && target < 0; ++x)
      for (Sym y = 0; y < a; ++y) {
        if (img_append(pu, x) != img_append(pw, y)) continue;
        std::uint64_t nxt = (pu % mdiv * a + x) * m + (pw % mdiv * a + y);
        if (!live[nxt] || seen[nxt]) continue;
        seen[nxt] = 1;
        parent[nxt] = static_cast<std::int64_t>(v);
        via[nxt] = static_cast<std::uint16_t>(x * a + y);
        queue.push_back(nxt);
      }
  }
  if (target < 0) return std::nullopt;

  // Labels from the seed to the target.
  std::vector<std::pair<Sym, Sym>> path;
  std::uint64_t v = static_cast<std::uint64_t>(target);
  while (parent[v] >= 0) {
    path.push_back({static_cast<Sym>(via[v] / a), static_cast<Sym>(via[v] % a)});
    v = static_cast<std::uint64_t>(parent[v]);
  }
  std::reverse(path.begin(), path.end());
  std::uint64_t seed = v;

  // Walk greedily from the target until a vertex repeats; the loop forms the
  // right tails.
  std::unordered_map<std::uint64_t, std::size_t> visit;
  std::vector<std::pair<Sym, Sym>> walk;
  v = static_cast<std::uint64_t>(target);
  std::size_t cycle_at = 0;
  for (;;) {
    auto ins = visit.emplace(v, walk.size());
    if (!ins.second) {
      cycle_at = ins.first->second;
      break;
    }
    std::uint64_t pu = v / m, pw = v % m;
    bool advanced = false;
    for (Sym x = 0; x < a && !advanced; ++x)
      for (Sym y = 0; y < a; ++y) {
        if (img_append(pu, x) != img_append(pw, y)) continue;
        std::uint64_t nxt = (pu % mdiv * a + x) * m + (pw % mdiv * a + y);
        if (!live[nxt]) continue;
        walk.push_back({x, y});
        v = nxt;
        advanced = true;
        break;
      }
    if (!advanced) fail(Errc::internal, "live vertex lost all successors");
  }

  std::vector<Sym> base = unpack_word(seed / m, a, wlen);
  EPConfig1D ca{rule.alphabet, base, base, 0, {}};
  EPConfig1D cb = ca;
  for (std::size_t i = 0; i < path.size(); ++i) {
    ca.middle.push_back(path[i].first);
    cb.middle.push_back(path[i].second);
  }
  for (std::size_t i = 0; i < cycle_at; ++i) {
    ca.middle.push_back(walk[i].first);
    cb.middle.push_back(walk[i].second);
  }
  for (std::size_t i = cycle_at; i < walk.size(); ++i) {
    ca.right.push_back(walk[i].first);
    cb.right.push_back(walk[i].second);
  }
  return ClosingWitness{ca, cb};
}

}  // namespace

ClosingVerdict check_closing(const Rule1D& rule, Side side, std::uint64_t vertex_cap) {
  bool capped = false;
  std::optional<ClosingWitness> w;
  if (side == Side::Right) {
    w = right_violation(rule, vertex_cap, capped);
  } else {
    Rule1D mirrored = mirror_rule(rule);
    w = right_violation(mirrored, vertex_cap, capped);
    if (w) w = ClosingWitness{reverse_ep(w->a), reverse_ep(w->b)};
  }
  if (capped) return {side, ClosingAnswer::Unknown, std::nullopt};
  if (w) return {side, ClosingAnswer::NotClosing, std::move(w)};
  return {side, ClosingAnswer::Closing, std::nullopt};
}

namespace {

std::vector<std::vector<Sym>> words_up_to(std::uint32_t a, int max_len) {
  std::vector<std::vector<Sym>> out;
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Sym> w(static_cast<std::size_t>(len), 0);
    for (;;) {
      out.push_back(w);
      int i = len;
      bool done = true;
      while (i > 0) {
        --i;
        if (++w[static_cast<std::size_t>(i)] < a) {
          done = false;
          break;
        }
        w[static_cast<std::size_t>(i)] = 0;
      }
      if (done) break;
    }
  }
  return out;
}

std::optional<ClosingWitness> right_oracle(const Rule1D& rule, int head_len, int max_period) {
  std::uint32_t a = rule.alphabet.size();
  int r = rule.radius;
  long long star = 1;
  for (int p = 2; p <= max_period; ++p) star = lcm_ll(star, p);

  auto tails = words_up_to(a, max_period);
  std::vector<Sym> head(static_cast<std::size_t>(head_len), 0);

  long long wlo = -(r + star + 4);
  long long whi = head_len + r + star + 4;

  struct Entry {
    EPConfig1D config;
    EPConfig1D image;
  };
  std::vector<Entry> entries;
  std::unordered_map<std::string, std::vector<std::size_t>> groups;

  for (const auto& p : tails) {
    for (;;) {
      for (const auto& q : tails) {
        EPConfig1D c{rule.alphabet, p, head, 0, q};
        EPConfig1D img = apply_ep(rule, c);
        std::string key;
        key.reserve(static_cast<std::size_t>(star + whi - wlo) + 2);
        for (long long i = -star; i < 0; ++i) key.push_back(static_cast<char>(c.at(i)));
        key.push_back(char(-1));
        for (long long i = wlo; i < whi; ++i) key.push_back(static_cast<char>(img.at(i)));
        auto& bucket = groups[key];
        for (std::size_t prev : bucket) {
          if (ep_equal(entries[prev].config, c)) continue;
          if (ep_equal(entries[prev].image, img))
            return ClosingWitness{entries[prev].config, c};
        }
        bucket.push_back(entries.size());
        entries.push_back(Entry{std::move(c), std::move(img)});
      }
      int i = head_len;
      bool done = true;
      while (i > 0) {
        --i;
        if (++head[static_cast<std::size_t>(i)] < a) {
          done = false;
          break;
        }
        head[static_cast<std::size_t>(i)] = 0;
      }
      if (done) break;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<ClosingWitness> closing_oracle(const Rule1D& rule, Side side, int head_len,
                                             int max_period) {
  if (head_len < 1 || max_period < 1) fail(Errc::invalid_argument, "oracle bounds must be positive");
  if (side == Side::Right) return right_oracle(rule, head_len, max_period);
  Rule1D mirrored = mirror_rule(rule);
  auto w = right_oracle(mirrored, head_len, max_period);
  if (w) return ClosingWitness{reverse_ep(w->a), reverse_ep(w->b)};
  return std::nullopt;
}

namespace {

bool verify_right_witness(const Rule1D& rule, const EPConfig1D& a, const EPConfig1D& b) {
  if (ep_equal(a, b)) return false;
  long long pl = lcm_ll(static_cast<long long>(a.left.size()),
                        static_cast<long long>(b.left.size()));
  long long n = std::min(a.mid_start, b.mid_start);
  for (long long i = n - pl; i < n; ++i)
    if (a.at(i) != b.at(i)) return false;
  return ep_equal(apply_ep(rule, a), apply_ep(rule, b));
}

}  // namespace

bool verify_closing_witness(const Rule1D& rule, Side side, const ClosingWitness& w) {
  if (side == Side::Right) return verify_right_witness(rule, w.a, w.b);
  return verify_right_witness(mirror_rule(rule), reverse_ep(w.a), reverse_ep(w.b));
}

// ---------------------------------------------------------------------------
// Blocking words

namespace {

// One synchronous step of a finite row; the result is 2r cells shorter.
std::vector<Sym> step_row(const Rule1D& rule, const std::vector<Sym>& row) {
  int r = rule.radius;
  std::vector<Sym> out(row.size() - static_cast<std::size_t>(2 * r));
  std::vector<Sym> w(static_cast<std::size_t>(rule.width()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int j = 0; j < rule.width(); ++j) w[static_cast<std::size_t>(j)] = row[i + static_cast<std::size_t>(j)];
    out[i] = rule.eval(w);
  }
  return out;
}

// Sound confirmation: track the set of width-s windows reachable under any
// environment; a singleton chain that revisits a window proves the column
// is frozen for every extension.
bool confirm_blocking(const Rule1D& rule, const std::vector<Sym>& word, int s, int j) {
  std::uint32_t a = rule.alphabet.size();
  int r = rule.radius;
  std::uint64_t flanks = 1;
  for (int i = 0; i < r; ++i) flanks *= a;
  std::vector<Sym> cur(word.begin() + j, word.begin() + j + s);
  std::unordered_set<std::string> seen;
  for (;;) {
    std::string key(cur.begin(), cur.end());
    if (!seen.insert(key).second) return true;
    std::vector<Sym> row(static_cast<std::size_t>(s + 2 * r));
    std::copy(cur.begin(), cur.end(), row.begin() + r);
    std::optional<std::vector<Sym>> unique;
    for (std::uint64_t lm = 0; lm < flanks; ++lm) {
      std::uint64_t v = lm;
      for (int i = r - 1; i >= 0; --i) {
        row[static_cast<std::size_t>(i)] = v % a;
        v /= a;
      }
      for (std::uint64_t rm = 0; rm < flanks; ++rm) {
        v = rm;
        for (int i = r - 1; i >= 0; --i) {
          row[static_cast<std::size_t>(s + 2 * r - 1 - i)] = v % a;
          v /= a;
        }
        std::vector<Sym> img = step_row(rule, row);
        if (!unique) {
          unique = std::move(img);
        } else if (*unique != img) {
          return false;
        }
      }
    }
    cur = std::move(*unique);
  }
}

enum class OffsetStatus { Refuted, Undecided };

// Exact horizon-bounded refutation: for each step count n, enumerate every
// assignment of the cells the step-n window can depend on and compare the
// produced windows. Cells farther than n*r cannot reach the window by step
// n, so each pass is conclusive for its own depth.
OffsetStatus refute_blocking(const Rule1D& rule, const std::vector<Sym>& word, int s, int j,
                             int horizon, std::uint64_t config_cap) {
  std::uint32_t a = rule.alphabet.size();
  int r = rule.radius;
  long long k = static_cast<long long>(word.size());
  for (int n = 1; n <= horizon; ++n) {
    long long lo = j - static_cast<long long>(n) * r;
    long long hi = j + s + static_cast<long long>(n) * r;
    std::vector<long long> free_pos;
    for (long long i = lo; i < hi; ++i)
      if (i < 0 || i >= k) free_pos.push_back(i);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < free_pos.size(); ++i) {
      total *= a;
      if (total > config_cap) return OffsetStatus::Undecided;
    }

    std::optional<std::vector<Sym>> ref;
    std::vector<Sym> assign(free_pos.size(), 0);
    for (std::uint64_t c = 0; c < total; ++c) {
      std::uint64_t v = c;
      for (std::size_t i = free_pos.size(); i > 0; --i) {
        assign[i - 1] = v % a;
        v /= a;
      }
      std::vector<Sym> row(static_cast<std::size_t>(hi - lo));
      std::size_t fi = 0;
      for (long long i = lo; i < hi; ++i)
        row[static_cast<std::size_t>(i - lo)] =
            (i >= 0 && i < k) ? word[static_cast<std::size_t>(i)] : assign[fi++];
      for (int t = 0; t < n; ++t) row = step_row(rule, row);
      if (!ref) {
        ref = std::move(row);
      } else if (*ref != row) {
        return OffsetStatus::Refuted;
      }
    }
  }
  return OffsetStatus::Undecided;
}

}  // namespace

BlockingReport classify_blocking(const Rule1D& rule, const std::vector<Sym>& word, int s,
                                 int horizon, std::uint64_t config_cap) {
  if (s < 1 || static_cast<std::size_t>(s) > word.size())
    fail(Errc::invalid_argument, "window size must fit inside the word");
  for (Sym x : word)
    if (!rule.alphabet.contains(x)) fail(Errc::invalid_argument, "word symbol out of alphabet");
  int k = static_cast<int>(word.size());
  bool any_unknown = false;
  int unknown_offset = 0;
  for (int j = 0; j + s <= k; ++j) {
    if (confirm_blocking(rule, word, s, j))
      return BlockingReport{word, s, j, BlockingStatus::Blocking, horizon};
    if (refute_blocking(rule, word, s, j, horizon, config_cap) == OffsetStatus::Undecided) {
      if (!any_unknown) unknown_offset = j;
      any_unknown = true;
    }
  }
  if (any_unknown)
    return BlockingReport{word, s, unknown_offset, BlockingStatus::UnknownAt, horizon};
  return BlockingReport{word, s, 0, BlockingStatus::NotBlockingWithin, horizon};
}

std::optional<BlockingReport> find_blocking_word(const Rule1D& rule, int s, int max_len,
                                                 int horizon, std::uint64_t config_cap) {
  if (s < 1 || s > max_len) fail(Errc::invalid_argument, "window size must be within max_len");
  std::uint32_t a = rule.alphabet.size();
  std::optional<BlockingReport> first_unknown;
  for (int len = s; len <= max_len; ++len) {
    std::vector<Sym> word(static_cast<std::size_t>(len), 0);
    for (;;) {
      BlockingReport rep = classify_blocking(rule, word, s, horizon, config_cap);
      if (rep.status == BlockingStatus::Blocking) return rep;
      if (rep.status == BlockingStatus::UnknownAt && !first_unknown) first_unknown = rep;
      int i = len;
      bool done = true;
      while (i > 0) {
        --i;
        if (++word[static_cast<std::size_t>(i)] < a) {
          done = false;
          break;
        }
        word[static_cast<std::size_t>(i)] = 0;
      }
      if (done) break;
    }
  }
  return first_unknown;
}

}  // namespace calab
