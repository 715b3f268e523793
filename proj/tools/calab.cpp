// Command-line front end. Every analysis goes through the C API in
// calab/calab.h; this file only parses flags, loads files and maps results
// to exit codes: 0 success, 1 refutation or failed check, 2 usage or
// library error.
#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "calab/calab.h"

namespace {

struct Usage {
  std::string what;
};

long long parse_ll(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw Usage{"not an integer: " + s};
  }
  if (used != s.size()) throw Usage{"not an integer: " + s};
  return v;
}

std::pair<long long, long long> parse_pair(const std::string& s) {
  std::size_t comma = s.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 == s.size())
    throw Usage{"expected a,b but got: " + s};
  return {parse_ll(s.substr(0, comma)), parse_ll(s.substr(comma + 1))};
}

int lib_error() {
  std::fprintf(stderr, "calab: %s\n", calab_last_error_message());
  return 2;
}

struct Str {
  char* s = nullptr;
  ~Str() { calab_string_free(s); }
  bool ok() const { return s != nullptr; }
  void print() const { std::fputs(s, stdout); }
};

struct Rule {
  calab_rule* r = nullptr;
  ~Rule() { calab_rule_free(r); }
};

struct Tiles {
  calab_tileset* t = nullptr;
  ~Tiles() { calab_tiles_free(t); }
};

bool builtin_name(const std::string& s) {
  return s == "identity" || s == "and-min" || s == "xor1d" || s == "xor-corners" ||
         s.rfind("shift:", 0) == 0;
}

// Rule arguments are file paths first; bare builtin names get the canonical
// binary radius-1 header of the dimension the command works in.
std::string rule_text(const std::string& arg, int preferred_dim) {
  std::ifstream in(arg);
  if (in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
  if (!builtin_name(arg)) throw Usage{"cannot read rule file: " + arg};
  int dim = preferred_dim;
  if (arg == "xor1d") dim = 1;
  if (arg == "xor-corners" || arg.rfind("shift:", 0) == 0) dim = 2;
  if (dim == 1)
    return "rule 1d\nalphabet 2\nradius 1\nneighborhood interval\nbuiltin " + arg +
           "\n";
  return "rule 2d\nalphabet 2\nradius 1\nneighborhood moore\nbuiltin " + arg + "\n";
}

std::string tile_text(const std::string& arg) {
  std::ifstream in(arg);
  if (!in) throw Usage{"cannot read tile file: " + arg};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_analyze2d(const std::string& rulearg, bool gamma_perm, bool quasi,
                  bool closing, bool sens, const std::string& nu_s,
                  const std::vector<std::string>& v_s) {
  Rule rule{calab_rule_parse(rule_text(rulearg, 2).c_str())};
  if (!rule.r) return lib_error();
  if ((gamma_perm || closing || sens) && nu_s.empty())
    throw Usage{"--nu is required for the requested analyses"};
  std::pair<long long, long long> nu{0, 0};
  if (!nu_s.empty()) nu = parse_pair(nu_s);
  std::vector<long long> flat;
  for (const std::string& v : v_s) {
    auto [a, b] = parse_pair(v);
    flat.push_back(a);
    flat.push_back(b);
  }
  int rc = 0;
  if (gamma_perm) {
    for (auto [gx, gy] : {nu, std::pair{-nu.first, -nu.second}}) {
      int ans = calab_gamma_permutive(rule.r, gx, gy);
      if (ans < 0) return lib_error();
      std::printf("gamma-permutive (%lld,%lld): %s\n", gx, gy, ans ? "yes" : "no");
    }
  }
  if (quasi) {
    Str rep{calab_quasi_expansivity(rule.r, nullptr)};
    if (!rep.ok()) return lib_error();
    rep.print();
  }
  if (closing) {
    if (flat.empty()) throw Usage{"--closing-evidence needs at least one --v a,b"};
    int refuted = 0;
    Str rep{calab_closing_evidence(rule.r, nu.first, nu.second, flat.data(),
                                   flat.size() / 2, &refuted)};
    if (!rep.ok()) return lib_error();
    rep.print();
    if (refuted) rc = 1;
  }
  if (sens) {
    if (flat.empty()) throw Usage{"--sensitivity needs one --v a,b"};
    Str rep{calab_sensitivity(rule.r, nu.first, nu.second, flat[0], flat[1], nullptr)};
    if (!rep.ok()) return lib_error();
    rep.print();
  }
  return rc;
}

int run_slice(const std::string& rulearg, const std::string& nu_s,
              const std::string& v_s, bool emit) {
  Rule rule{calab_rule_parse(rule_text(rulearg, 2).c_str())};
  if (!rule.r) return lib_error();
  auto [nx, ny] = parse_pair(nu_s);
  auto [vx, vy] = parse_pair(v_s);
  Str rep{calab_slice(rule.r, nx, ny, vx, vy, emit ? 1 : 0)};
  if (!rep.ok()) return lib_error();
  rep.print();
  return 0;
}

int run_entropy(const std::string& rulearg, const std::vector<int>& ws,
                const std::vector<int>& ts, std::uint64_t sample,
                std::uint64_t seed) {
  Rule rule{calab_rule_parse(rule_text(rulearg, 2).c_str())};
  if (!rule.r) return lib_error();
  Str rep{calab_entropy(rule.r, ws.data(), ws.size(), ts.data(), ts.size(),
                        sample == 0 ? 1 : 0, sample, seed)};
  if (!rep.ok()) return lib_error();
  rep.print();
  return 0;
}

int run_closing1d(const std::string& rulearg, const std::string& side,
                  const std::string& oracle_s) {
  Rule rule{calab_rule_parse(rule_text(rulearg, 1).c_str())};
  if (!rule.r) return lib_error();
  if (side != "left" && side != "right") throw Usage{"--side must be left or right"};
  int head = 0, period = 0;
  if (!oracle_s.empty()) {
    auto [h, p] = parse_pair(oracle_s);
    head = static_cast<int>(h);
    period = static_cast<int>(p);
  }
  int verdict = 2;
  Str rep{calab_closing1d(rule.r, side == "right" ? 1 : 0, head, period, &verdict)};
  if (!rep.ok()) return lib_error();
  rep.print();
  return verdict == 1 ? 1 : 0;
}

int run_blocking(const std::string& rulearg, int s, int max_len, int horizon) {
  Rule rule{calab_rule_parse(rule_text(rulearg, 1).c_str())};
  if (!rule.r) return lib_error();
  Str rep{calab_blocking(rule.r, s, max_len, horizon, nullptr)};
  if (!rep.ok()) return lib_error();
  rep.print();
  return 0;
}

int run_tile(const std::string& tilearg, const std::string& square_s,
             const std::string& torus_s) {
  if (square_s.empty() == torus_s.empty())
    throw Usage{"exactly one of --square n or --torus p,q is required"};
  Tiles tiles{calab_tiles_parse(tile_text(tilearg).c_str())};
  if (!tiles.t) return lib_error();
  long long p = 0, q = 0;
  int torus = 0;
  if (!square_s.empty()) {
    p = q = parse_ll(square_s);
  } else {
    auto [a, b] = parse_pair(torus_s);
    p = a;
    q = b;
    torus = 1;
  }
  int sat = 2;
  Str rep{calab_tile_search(tiles.t, torus, p, q, &sat)};
  if (!rep.ok()) return lib_error();
  rep.print();
  return sat == 1 ? 1 : 0;
}

int run_hierarchy(int step, const std::string& anchor, bool path,
                  const std::string& render) {
  if (!render.empty() && render != "pbm") throw Usage{"--render only supports pbm"};
  Str rep{render == "pbm" ? calab_hierarchy_pbm(step, anchor.c_str())
                          : calab_hierarchy(step, anchor.c_str(), path ? 1 : 0)};
  if (!rep.ok()) return lib_error();
  rep.print();
  return 0;
}

int run_stretch(const std::string& tilearg, const std::string& nu_s,
                const std::string& mu_s, const std::string& verify_s) {
  Tiles tiles{calab_tiles_parse(tile_text(tilearg).c_str())};
  if (!tiles.t) return lib_error();
  auto [nx, ny] = parse_pair(nu_s);
  auto [mx, my] = parse_pair(mu_s);
  long long p = 0, q = 0;
  if (!verify_s.empty()) {
    auto [a, b] = parse_pair(verify_s);
    p = a;
    q = b;
  }
  int verified = -1;
  Str rep{calab_stretch_report(tiles.t, nx, ny, mx, my, p, q, &verified)};
  if (!rep.ok()) return lib_error();
  rep.print();
  return verified == 0 ? 1 : 0;
}

int run_reduce(const std::string& tilearg, const std::string& nu_s,
               const std::string& mu_s, int step, const std::string& witness,
               long long window, bool check) {
  if (witness != "mu" && witness != "numu")
    throw Usage{"--witness must be mu or numu"};
  Tiles tiles{calab_tiles_parse(tile_text(tilearg).c_str())};
  if (!tiles.t) return lib_error();
  auto [nx, ny] = parse_pair(nu_s);
  auto [mx, my] = parse_pair(mu_s);
  calab_reduction* red = calab_reduction_build(tiles.t, nx, ny, mx, my, step);
  if (!red) return lib_error();
  int ok = -1;
  Str rep{calab_reduction_witness(red, witness == "numu" ? 1 : 0, window,
                                  check ? 1 : 0, &ok)};
  calab_reduction_free(red);
  if (!rep.ok()) return lib_error();
  rep.print();
  return ok == 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cellular automata and Wang tiling workbench"};
  app.require_subcommand(1);

  std::string rulearg, tilearg, nu_s, mu_s, v_one, side, oracle_s, square_s,
      torus_s, anchor, render, verify_s, witness;
  std::vector<std::string> v_s;
  std::vector<int> ws, ts;
  bool gamma_perm = false, quasi = false, closing = false, sens = false,
       emit = false, exact = false, path = false, check = false;
  std::uint64_t sample = 0, seed = 0;
  int step = 1, s_len = 1, max_len = 2, horizon = 4, red_step = 2;
  long long window = 8;

  CLI::App* analyze = app.add_subcommand("analyze2d", "directional analyses of a 2d rule");
  analyze->add_option("rulefile", rulearg)->required();
  analyze->add_flag("--gamma-permutivity", gamma_perm, "permutivity at nu and -nu");
  analyze->add_flag("--quasi-expansive", quasi, "search for an expansivity certificate");
  analyze->add_option("--nu", nu_s, "slope a,b");
  analyze->add_flag("--closing-evidence", closing, "sliced closingness along nu");
  analyze->add_option("--v", v_s, "slicing direction a,b, repeatable")->delimiter(';');
  analyze->add_flag("--sensitivity", sens, "blocking-word sensitivity probe");

  CLI::App* slice = app.add_subcommand("slice", "1d restatement of a 2d rule along nu");
  slice->add_option("rulefile", rulearg)->required();
  slice->add_option("--nu", nu_s, "slope a,b")->required();
  slice->add_option("--v", v_one, "direction a,b")->required();
  slice->add_flag("--emit-rulefile", emit, "print the sliced rule file");

  CLI::App* entropy = app.add_subcommand("entropy", "spacetime pattern counts");
  entropy->add_option("rulefile", rulearg)->required();
  entropy->add_option("--w", ws, "widths")->required()->delimiter(',');
  entropy->add_option("--t", ts, "heights")->required()->delimiter(',');
  CLI::Option* oexact = entropy->add_flag("--exact", exact, "exhaustive counts");
  entropy->add_option("--sample", sample, "sampled lower bound, n trials")
      ->excludes(oexact);
  entropy->add_option("--seed", seed, "sampling seed");

  CLI::App* closing1d = app.add_subcommand("closing1d", "one-sided closingness of a 1d rule");
  closing1d->add_option("rulefile", rulearg)->required();
  closing1d->add_option("--side", side, "left or right")->required();
  closing1d->add_option("--oracle", oracle_s, "brute-force bounds head,period");

  CLI::App* blocking = app.add_subcommand("blocking", "frozen-word search for a 1d rule");
  blocking->add_option("rulefile", rulearg)->required();
  blocking->add_option("--s", s_len, "word length to certify")->required();
  blocking->add_option("--max-len", max_len, "longest candidate")->required();
  blocking->add_option("--horizon", horizon, "steps checked")->required();

  CLI::App* tile = app.add_subcommand("tile", "backtracking tiling search");
  tile->add_option("tilefile", tilearg)->required();
  tile->add_option("--square", square_s, "free-boundary n x n square");
  tile->add_option("--torus", torus_s, "wrapped p,q torus");

  CLI::App* hierarchy = app.add_subcommand("hierarchy", "nested-cross pattern");
  hierarchy->add_option("--step", step, "nesting depth")->required();
  hierarchy->add_option("--anchor", anchor, "sw, south, east or center")->required();
  hierarchy->add_flag("--path", path, "append serpentine paths");
  hierarchy->add_option("--render", render, "pbm for a bitmap");

  CLI::App* stretch = app.add_subcommand("stretch", "parallelogram macro-tiles");
  stretch->add_option("tilefile", tilearg)->required();
  stretch->add_option("--nu", nu_s, "first period a,b")->required();
  stretch->add_option("--mu", mu_s, "second period a,b")->required();
  stretch->add_option("--verify", verify_s, "compare tiling counts on a p,q torus");

  CLI::App* reduce = app.add_subcommand("reduce", "guarded-xor product automaton");
  reduce->add_option("tilefile", tilearg)->required();
  reduce->add_option("--nu", nu_s, "first period a,b")->required();
  reduce->add_option("--mu", mu_s, "second period a,b")->required();
  reduce->add_option("--step", red_step, "hierarchy depth");
  reduce->add_option("--witness", witness, "mu or numu")->required();
  reduce->add_option("--window", window, "largest checked window side");
  reduce->add_flag("--check", check, "verify equal one-step images");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed())
      return run_analyze2d(rulearg, gamma_perm, quasi, closing, sens, nu_s, v_s);
    if (slice->parsed()) return run_slice(rulearg, nu_s, v_one, emit);
    if (entropy->parsed()) return run_entropy(rulearg, ws, ts, sample, seed);
    if (closing1d->parsed()) return run_closing1d(rulearg, side, oracle_s);
    if (blocking->parsed()) return run_blocking(rulearg, s_len, max_len, horizon);
    if (tile->parsed()) return run_tile(tilearg, square_s, torus_s);
    if (hierarchy->parsed()) return run_hierarchy(step, anchor, path, render);
    if (stretch->parsed()) return run_stretch(tilearg, nu_s, mu_s, verify_s);
    if (reduce->parsed())
      return run_reduce(tilearg, nu_s, mu_s, red_step, witness, window, check);
  } catch (const Usage& u) {
    std::fprintf(stderr, "calab: %s\n", u.what.c_str());
    return 2;
  }
  return 2;
}
