#include "calab/calab.h"

#include <cstdio>
#include <cstring>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "calab/dyn1d.hpp"
#include "calab/dyn2d.hpp"
#include "calab/formats.hpp"
#include "calab/reduction.hpp"
#include "calab/slicing.hpp"
#include "calab/stretch.hpp"

using namespace calab;

struct calab_rule {
  std::variant<Rule1D, Rule2D> rule;
};

struct calab_tileset {
  TileSet tiles;
};

struct calab_reduction {
  ReductionCA red;
};

namespace {

thread_local int g_code = CALAB_OK;
thread_local std::string g_message;

int map_code(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return CALAB_E_INVALID_ARGUMENT;
    case Errc::parse_error: return CALAB_E_PARSE;
    case Errc::cap_exceeded: return CALAB_E_CAP;
    case Errc::budget_exceeded: return CALAB_E_BUDGET;
    case Errc::incompatible: return CALAB_E_INCOMPATIBLE;
    case Errc::cone_overflow: return CALAB_E_CONE;
    default: return CALAB_E_INTERNAL;
  }
}

template <typename T, typename F>
T guarded(T on_error, F&& f) {
  g_code = CALAB_OK;
  g_message.clear();
  try {
    return f();
  } catch (const Error& e) {
    g_code = map_code(e.code());
    g_message = e.what();
  } catch (const std::exception& e) {
    g_code = CALAB_E_INTERNAL;
    g_message = e.what();
  }
  return on_error;
}

char* copy_out(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const Rule1D& need_1d(const calab_rule* r) {
  if (!r) fail(Errc::invalid_argument, "null rule handle");
  if (!std::holds_alternative<Rule1D>(r->rule))
    fail(Errc::invalid_argument, "expected a 1d rule");
  return std::get<Rule1D>(r->rule);
}

const Rule2D& need_2d(const calab_rule* r) {
  if (!r) fail(Errc::invalid_argument, "null rule handle");
  if (!std::holds_alternative<Rule2D>(r->rule))
    fail(Errc::invalid_argument, "expected a 2d rule");
  return std::get<Rule2D>(r->rule);
}

const TileSet& need_tiles(const calab_tileset* ts) {
  if (!ts) fail(Errc::invalid_argument, "null tile set handle");
  return ts->tiles;
}

std::string fmt_ratio(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  std::string s = buf;
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

std::string fmt_word(const std::vector<Sym>& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(w[i]);
  }
  return out;
}

std::string fmt_ep(const EPConfig1D& c) {
  return "(" + fmt_word(c.left) + ")* [" + fmt_word(c.middle) + "] at " +
         std::to_string(c.mid_start) + " (" + fmt_word(c.right) + ")*";
}

const char* verdict_name(ClosingAnswer a) {
  switch (a) {
    case ClosingAnswer::Closing: return "closing";
    case ClosingAnswer::NotClosing: return "not-closing";
    default: return "unknown";
  }
}

const char* status_name(BlockingStatus s) {
  switch (s) {
    case BlockingStatus::Blocking: return "blocking";
    case BlockingStatus::NotBlockingWithin: return "not-blocking-within";
    default: return "undecided";
  }
}

Anchor parse_anchor(const char* name) {
  std::string a = name ? name : "";
  if (a == "sw") return Anchor::SWCorner;
  if (a == "south") return Anchor::SouthMid;
  if (a == "east") return Anchor::EastMid;
  if (a == "center") return Anchor::Center;
  fail(Errc::invalid_argument, "anchor must be sw, south, east or center");
}

}  // namespace

int calab_last_error(void) { return g_code; }

const char* calab_last_error_message(void) { return g_message.c_str(); }

void calab_string_free(char* s) { delete[] s; }

calab_rule* calab_rule_parse(const char* text) {
  return guarded<calab_rule*>(nullptr, [&] {
    if (!text) fail(Errc::invalid_argument, "null rule text");
    return new calab_rule{parse_rule(text)};
  });
}

void calab_rule_free(calab_rule* r) { delete r; }

int calab_rule_dim(const calab_rule* r) {
  return guarded(-1, [&] {
    if (!r) fail(Errc::invalid_argument, "null rule handle");
    return std::holds_alternative<Rule2D>(r->rule) ? 2 : 1;
  });
}

char* calab_rule_emit(const calab_rule* r) {
  return guarded<char*>(nullptr, [&] {
    if (!r) fail(Errc::invalid_argument, "null rule handle");
    return copy_out(std::holds_alternative<Rule1D>(r->rule)
                        ? emit_rule(std::get<Rule1D>(r->rule))
                        : emit_rule(std::get<Rule2D>(r->rule)));
  });
}

int calab_gamma_permutive(const calab_rule* r, long long gx, long long gy) {
  return guarded(-1, [&] {
    return is_gamma_permutive(need_2d(r), {gx, gy}) ? 1 : 0;
  });
}

char* calab_quasi_expansivity(const calab_rule* r, int* issued) {
  return guarded<char*>(nullptr, [&] {
    auto cert = quasi_expansivity_certificate(need_2d(r));
    if (issued) *issued = cert ? 1 : 0;
    if (!cert) return copy_out("quasi-expansive: no certificate\n");
    return copy_out("quasi-expansive: yes\ngamma " + format_vec(cert->gamma) +
                    "\ncovered " + cert->covered + "\n");
  });
}

char* calab_closing_evidence(const calab_rule* r, long long nx, long long ny,
                             const long long* v_xy, size_t n_v, int* refuted) {
  return guarded<char*>(nullptr, [&] {
    const Rule2D& rule = need_2d(r);
    if (!v_xy || n_v == 0)
      fail(Errc::invalid_argument, "at least one slicing direction is required");
    std::vector<Vec2> vs;
    for (size_t i = 0; i < n_v; ++i) vs.push_back({v_xy[2 * i], v_xy[2 * i + 1]});
    NuClosingReport rep = nu_closing_evidence(rule, {nx, ny}, vs);
    std::ostringstream out;
    out << "nu " << format_vec(rep.nu) << "\n";
    for (const SlicedClosingEntry& e : rep.entries)
      out << "v " << format_vec(e.v) << " k " << e.k << " right "
          << verdict_name(e.right.answer) << " left " << verdict_name(e.left.answer)
          << "\n";
    if (rep.refuted) {
      out << "closing-evidence: refuted\n";
      const Sliced2DWitness& w = *rep.witness;
      out << "witness v " << format_vec(w.v) << " side "
          << (w.side == Side::Right ? "right" : "left") << " refutes "
          << (w.refutes_nu ? "nu" : "-nu") << "\n";
      out << "  a: " << fmt_ep(w.pair.a) << "\n";
      out << "  b: " << fmt_ep(w.pair.b) << "\n";
      out << "witness re-verified: "
          << (verify_sliced_witness(rule, w) ? "yes" : "no") << "\n";
    } else if (rep.all_closing) {
      out << "closing-evidence: supported\n";
    } else {
      out << "closing-evidence: inconclusive\n";
    }
    if (refuted) *refuted = rep.refuted ? 1 : 0;
    return copy_out(out.str());
  });
}

char* calab_sensitivity(const calab_rule* r, long long nx, long long ny,
                        long long vx, long long vy, int* answer) {
  return guarded<char*>(nullptr, [&] {
    SensitivityReport rep = quasi_sensitivity_check(need_2d(r), {nx, ny}, {vx, vy});
    std::ostringstream out;
    out << "nu " << format_vec(rep.nu) << "\nv " << format_vec(rep.v) << "\n";
    int code = 2;
    if (rep.answer == SensitivityAnswer::SensitiveEvidence) {
      out << "sensitivity: sensitive-evidence\n";
      code = 0;
    } else if (rep.answer == SensitivityAnswer::NotSensitiveEvidence) {
      out << "sensitivity: not-sensitive-evidence\n";
      code = 1;
    } else {
      out << "sensitivity: unknown\n";
    }
    if (rep.blocking)
      out << "word [" << fmt_word(rep.blocking->word) << "] s " << rep.blocking->s
          << " offset " << rep.blocking->offset << " status "
          << status_name(rep.blocking->status) << "\n";
    if (answer) *answer = code;
    return copy_out(out.str());
  });
}

char* calab_slice(const calab_rule* r, long long nx, long long ny, long long vx,
                  long long vy, int emit_rulefile) {
  return guarded<char*>(nullptr, [&] {
    SlicedCA s = build_sliced_rule(need_2d(r), {nx, ny}, {vx, vy});
    if (emit_rulefile) return copy_out(emit_rule(s.sliced_rule));
    std::ostringstream out;
    out << "nu " << format_vec(s.family.nu) << "\nv " << format_vec(s.v) << "\nk "
        << s.k << "\nrstar " << s.rstar << "\nsliced-alphabet "
        << s.sliced_alphabet.size() << "\n";
    return copy_out(out.str());
  });
}

char* calab_entropy(const calab_rule* r, const int* ws, size_t n_w, const int* ts,
                    size_t n_t, int exact, uint64_t samples, uint64_t seed) {
  return guarded<char*>(nullptr, [&] {
    if (!r) fail(Errc::invalid_argument, "null rule handle");
    if (!ws || n_w == 0 || !ts || n_t == 0)
      fail(Errc::invalid_argument, "width and height lists must be nonempty");
    CountMode mode = exact ? CountMode::Exact : CountMode::Sample;
    std::ostringstream out;
    for (size_t i = 0; i < n_w; ++i)
      for (size_t j = 0; j < n_t; ++j) {
        EntropyEntry e =
            std::holds_alternative<Rule2D>(r->rule)
                ? count_rectangles(std::get<Rule2D>(r->rule), ws[i], ts[j], mode,
                                   samples, seed)
                : count_rectangles_1d(std::get<Rule1D>(r->rule), ws[i], ts[j], mode,
                                      samples, seed);
        out << e.w << "\t" << e.t << "\t" << e.count << "\t" << fmt_ratio(e.ratio)
            << (e.exact ? "" : "+") << "\n";
      }
    return copy_out(out.str());
  });
}

char* calab_closing1d(const calab_rule* r, int side_right, int oracle_head,
                      int oracle_period, int* verdict) {
  return guarded<char*>(nullptr, [&] {
    const Rule1D& rule = need_1d(r);
    Side side = side_right ? Side::Right : Side::Left;
    ClosingVerdict v = check_closing(rule, side);
    std::ostringstream out;
    int code = 2;
    if (v.answer == ClosingAnswer::Closing) {
      out << "CLOSING\n";
      code = 0;
    } else if (v.answer == ClosingAnswer::NotClosing) {
      out << "NOT_CLOSING\n";
      code = 1;
    } else {
      out << "UNKNOWN\n";
    }
    if (v.witness) {
      out << "  a: " << fmt_ep(v.witness->a) << "\n";
      out << "  b: " << fmt_ep(v.witness->b) << "\n";
      out << "witness re-verified: "
          << (verify_closing_witness(rule, side, *v.witness) ? "yes" : "no") << "\n";
    }
    if (oracle_head > 0) {
      auto ow = closing_oracle(rule, side, oracle_head, oracle_period);
      if (ow && v.answer == ClosingAnswer::NotClosing)
        out << "oracle: agrees, witness found\n";
      else if (!ow && v.answer == ClosingAnswer::Closing)
        out << "oracle: agrees, none within bounds\n";
      else if (ow)
        out << "oracle: disagrees, witness found\n";
      else
        out << "oracle: none within bounds\n";
    }
    if (verdict) *verdict = code;
    return copy_out(out.str());
  });
}

char* calab_blocking(const calab_rule* r, int s, int max_len, int horizon,
                     int* found) {
  return guarded<char*>(nullptr, [&] {
    auto rep = find_blocking_word(need_1d(r), s, max_len, horizon);
    if (found) *found = rep && rep->status == BlockingStatus::Blocking ? 1 : 0;
    if (!rep)
      return copy_out("all candidates refuted up to length " +
                      std::to_string(max_len) + "\n");
    std::ostringstream out;
    out << status_name(rep->status) << " word [" << fmt_word(rep->word) << "] s "
        << rep->s << " offset " << rep->offset << "\n";
    return copy_out(out.str());
  });
}

calab_tileset* calab_tiles_parse(const char* text) {
  return guarded<calab_tileset*>(nullptr, [&] {
    if (!text) fail(Errc::invalid_argument, "null tile text");
    return new calab_tileset{parse_tiles(text)};
  });
}

void calab_tiles_free(calab_tileset* ts) { delete ts; }

char* calab_tiles_emit(const calab_tileset* ts) {
  return guarded<char*>(nullptr, [&] { return copy_out(emit_tiles(need_tiles(ts))); });
}

char* calab_tile_search(const calab_tileset* ts, int torus, long long p,
                        long long q, int* sat) {
  return guarded<char*>(nullptr, [&] {
    const TileSet& tiles = need_tiles(ts);
    TilingSearch r = torus ? tiles_torus(tiles, p, q) : tiles_square(tiles, p);
    if (r.outcome == SearchOutcome::Exhausted) {
      if (sat) *sat = 1;
      return copy_out("UNSAT\n");
    }
    if (r.outcome == SearchOutcome::Unknown) {
      if (sat) *sat = 2;
      return copy_out("UNKNOWN\n");
    }
    if (sat) *sat = 0;
    const Tiling& t = *r.tiling;
    std::ostringstream out;
    for (long long y = t.h - 1; y >= 0; --y) {
      for (long long x = 0; x < t.w; ++x) {
        if (x) out << ' ';
        out << t.at(x, y);
      }
      out << '\n';
    }
    return copy_out(out.str());
  });
}

char* calab_hierarchy(int step, const char* anchor, int with_path) {
  return guarded<char*>(nullptr, [&] {
    HierarchicalPattern h = generate_hierarchy(step, parse_anchor(anchor));
    std::string out = render_labels(h);
    if (with_path) {
      DirectedPattern d = attach_space_filling_path(h);
      out += "\n";
      std::vector<char> region(static_cast<std::size_t>(h.side * h.side), '?');
      for (std::size_t p = 0; p < d.paths.size(); ++p) {
        const std::vector<Vec2>& path = d.paths[p];
        out += "path " + std::to_string(p) + " start " + format_vec(path.front()) +
               " end " + format_vec(path.back()) + " length " +
               std::to_string(path.size()) + "\n";
        for (Vec2 c : path)
          region[static_cast<std::size_t>(c.y * h.side + c.x)] =
              static_cast<char>('0' + p);
      }
      for (long long y = h.side - 1; y >= 0; --y) {
        for (long long x = 0; x < h.side; ++x)
          out += region[static_cast<std::size_t>(y * h.side + x)];
        out += '\n';
      }
    }
    return copy_out(out);
  });
}

char* calab_hierarchy_pbm(int step, const char* anchor) {
  return guarded<char*>(nullptr, [&] {
    return copy_out(render_pbm(generate_hierarchy(step, parse_anchor(anchor))));
  });
}

char* calab_stretch_report(const calab_tileset* ts, long long nx, long long ny,
                           long long mx, long long my, long long verify_p,
                           long long verify_q, int* verified) {
  return guarded<char*>(nullptr, [&] {
    const TileSet& base = need_tiles(ts);
    MacroShape shape = build_shape({nx, ny}, {mx, my});
    StretchedTileSet sts = stretch_tileset(base, shape);
    std::ostringstream out;
    out << "scale " << shape.scale << "\nperiod-nu " << format_vec(shape.period_nu)
        << "\nperiod-mu " << format_vec(shape.period_mu) << "\ncells "
        << shape.cells.size() << "\nneighbors " << shape.neighbor_count
        << "\nstretched-tiles " << sts.tiles.tiles.size() << "\n";
    if (verified) *verified = -1;
    if (verify_p > 0 && verify_q > 0) {
      bool ok = verify_isomorphism(base, sts, verify_p, verify_q);
      if (verified) *verified = ok ? 1 : 0;
      out << "isomorphism " << verify_p << "x" << verify_q << ": "
          << (ok ? "verified" : "failed") << "\n";
    }
    return copy_out(out.str());
  });
}

calab_reduction* calab_reduction_build(const calab_tileset* tau, long long nx,
                                       long long ny, long long mx, long long my,
                                       int step) {
  return guarded<calab_reduction*>(nullptr, [&] {
    return new calab_reduction{
        build_reduction(need_tiles(tau), {nx, ny}, {mx, my}, step)};
  });
}

void calab_reduction_free(calab_reduction* red) { delete red; }

char* calab_reduction_witness(const calab_reduction* red, int kind_numu,
                              long long window, int check, int* ok) {
  return guarded<char*>(nullptr, [&] {
    if (!red) fail(Errc::invalid_argument, "null reduction handle");
    WitnessPair w = build_witness(
        red->red, kind_numu ? WitnessKind::NuMuAsymptotic : WitnessKind::MuAsymptotic);
    std::ostringstream out;
    out << "states " << red->red.states() << "\nextent " << red->red.rule.ex
        << "\nkind " << (kind_numu ? "numu" : "mu") << "\ncore ("
        << w.core.x0 << "," << w.core.y0 << ") " << w.core.w << "x" << w.core.h
        << "\n";
    for (const SplitLine& s : w.split_lines)
      out << "split " << format_vec(s.point) << " along " << format_vec(s.dir)
          << "\n";
    std::size_t diffs = 0;
    for (std::size_t i = 0; i < w.pair.domain.size(); ++i)
      if (w.pair.a_vals[i] != w.pair.b_vals[i]) ++diffs;
    out << "differences " << diffs << "\n";
    if (ok) *ok = -1;
    if (check) {
      bool all = check_equal_image(red->red, w.pair, w.core);
      out << "equal-image over core: " << (all ? "yes" : "no") << "\n";
      Vec2 cc{w.core.x0 + w.core.w / 2, w.core.y0 + w.core.h / 2};
      long long cap = std::min(window, std::min(w.core.w, w.core.h));
      long long passed = 0;
      for (long long s = 1; s <= cap; ++s) {
        if (!check_equal_image(red->red, w.pair, Rect::centered(cc, s, s))) break;
        passed = s;
      }
      bool windows_ok = passed == cap;
      out << "equal-image windows up to " << cap << "x" << cap << ": "
          << (windows_ok ? "yes" : "no (first failure at " +
                                       std::to_string(passed + 1) + ")")
          << "\n";
      if (cap < window)
        out << "window request " << window << " capped by the core\n";
      if (ok) *ok = all && windows_ok ? 1 : 0;
    }
    return copy_out(out.str());
  });
}
