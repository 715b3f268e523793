#include "calab/formats.hpp"

#include <set>
#include <sstream>
#include <utility>
#include <vector>

namespace calab {

namespace {

struct Line {
  int number = 0;
  std::vector<std::string> words;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    Line line{number, {}};
    std::string w;
    while (words >> w) line.words.push_back(w);
    if (!line.words.empty()) out.push_back(std::move(line));
  }
  return out;
}

[[noreturn]] void bad(int line, const std::string& what) {
  fail(Errc::parse_error, "line " + std::to_string(line) + ": " + what);
}

long long parse_number(int line, const std::string& w, long long lo, long long hi) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(w, &pos);
  } catch (...) {
    bad(line, "expected a number, got '" + w + "'");
  }
  if (pos != w.size()) bad(line, "trailing characters in number '" + w + "'");
  if (v < lo || v > hi)
    bad(line, "value " + w + " outside [" + std::to_string(lo) + ", " +
                  std::to_string(hi) + "]");
  return v;
}

int digit_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  return -1;
}

char digit_char(Sym v) {
  return v < 10 ? static_cast<char>('0' + v) : static_cast<char>('a' + (v - 10));
}

const std::string& field(const Line& l, const char* keyword) {
  if (l.words.size() != 2 || l.words[0] != keyword)
    bad(l.number, std::string("expected '") + keyword + " <value>'");
  return l.words[1];
}

std::vector<Sym> parse_table(const Line& l, const std::string& digits,
                             std::uint32_t alphabet, std::uint64_t window) {
  if (alphabet > 36)
    bad(l.number, "explicit tables need an alphabet of at most 36 symbols");
  std::uint64_t entries = 1;
  for (std::uint64_t i = 0; i < window && entries <= digits.size(); ++i)
    entries *= alphabet;
  if (entries != digits.size())
    bad(l.number, "table must have exactly " + std::to_string(entries) +
                      " digits, got " + std::to_string(digits.size()));
  std::vector<Sym> table;
  table.reserve(digits.size());
  for (char c : digits) {
    int v = digit_value(c);
    if (v < 0 || static_cast<std::uint32_t>(v) >= alphabet)
      bad(l.number, std::string("digit '") + c + "' outside the alphabet");
    table.push_back(static_cast<Sym>(v));
  }
  return table;
}

std::string render_table(const std::vector<Sym>& table) {
  std::string out;
  out.reserve(table.size());
  for (Sym s : table) out += digit_char(s);
  return out;
}

std::string header(const char* kind, std::uint32_t alphabet, int radius,
                   const char* neighborhood) {
  return std::string("rule ") + kind + "\nalphabet " + std::to_string(alphabet) +
         "\nradius " + std::to_string(radius) + "\nneighborhood " + neighborhood +
         "\n";
}

}  // namespace

std::variant<Rule1D, Rule2D> parse_rule(const std::string& text) {
  std::vector<Line> lines = tokenize(text);
  if (lines.size() != 5)
    fail(Errc::parse_error,
         "expected 5 lines (rule, alphabet, radius, neighborhood, body), got " +
             std::to_string(lines.size()));
  const std::string& kind = field(lines[0], "rule");
  if (kind != "1d" && kind != "2d") bad(lines[0].number, "rule kind must be 1d or 2d");
  bool two = kind == "2d";
  auto asize = static_cast<std::uint32_t>(
      parse_number(lines[1].number, field(lines[1], "alphabet"), 1, 1 << 20));
  Alphabet a(asize);
  int radius = static_cast<int>(
      parse_number(lines[2].number, field(lines[2], "radius"), 0, 64));
  const std::string& neigh = field(lines[3], "neighborhood");
  if (!two && neigh != "interval")
    bad(lines[3].number, "1d rules use the interval neighborhood");
  if (two && neigh != "moore" && neigh != "von-neumann")
    bad(lines[3].number, "2d rules use moore or von-neumann");
  bool moore = neigh == "moore";

  const Line& body = lines[4];
  if (body.words.size() != 2 || (body.words[0] != "table" && body.words[0] != "builtin"))
    bad(body.number, "expected 'table <digits>' or 'builtin <name>'");

  try {
    if (body.words[0] == "table") {
      std::uint64_t window =
          two ? (moore ? moore_offsets(radius) : von_neumann_offsets(radius, radius))
                    .size()
              : static_cast<std::uint64_t>(2 * radius + 1);
      std::vector<Sym> table = parse_table(body, body.words[1], asize, window);
      if (!two) return make_rule1d(a, radius, std::move(table));
      if (moore) return make_rule2d_moore(a, radius, std::move(table));
      return Rule2D{a,
                    Neigh2D::VonNeumann,
                    radius,
                    radius,
                    von_neumann_offsets(radius, radius),
                    std::move(table),
                    {}};
    }

    const std::string& name = body.words[1];
    if (name == "identity")
      return two ? std::variant<Rule1D, Rule2D>(make_identity_2d(a, radius))
                 : std::variant<Rule1D, Rule2D>(make_identity_1d(a, radius));
    if (name == "and-min")
      return two ? std::variant<Rule1D, Rule2D>(make_and_min_2d(a, radius))
                 : std::variant<Rule1D, Rule2D>(make_and_min_1d(a, radius));
    if (name == "xor1d") {
      if (two) bad(body.number, "xor1d is a 1d builtin");
      if (radius != 1) bad(body.number, "xor1d has radius 1");
      return make_xor1d(a);
    }
    if (name == "xor-corners") {
      if (!two) bad(body.number, "xor-corners is a 2d builtin");
      return make_xor_corners(a, radius);
    }
    if (name.rfind("shift:", 0) == 0) {
      if (!two) bad(body.number, "shift is a 2d builtin");
      std::string args = name.substr(6);
      auto comma = args.find(',');
      if (comma == std::string::npos)
        bad(body.number, "shift needs two offsets, shift:<dx>,<dy>");
      long long dx = parse_number(body.number, args.substr(0, comma), -64, 64);
      long long dy = parse_number(body.number, args.substr(comma + 1), -64, 64);
      return make_shift_2d(a, radius, {dx, dy});
    }
    bad(body.number, "unknown builtin '" + name + "'");
  } catch (const Error& e) {
    if (e.code() == Errc::parse_error) throw;
    bad(body.number, e.what());
  }
}

std::string emit_rule(const Rule1D& rule) {
  if (rule.alphabet.size() > 36)
    fail(Errc::invalid_argument, "no digit rendering for alphabets above 36 symbols");
  return header("1d", rule.alphabet.size(), rule.radius, "interval") + "table " +
         render_table(rule.table) + "\n";
}

std::string emit_rule(const Rule2D& rule) {
  if (rule.alphabet.size() > 36)
    fail(Errc::invalid_argument, "no digit rendering for alphabets above 36 symbols");
  if (!rule.dense())
    fail(Errc::invalid_argument, "procedural rules have no table rendering");
  if (rule.ex != rule.ey)
    fail(Errc::invalid_argument, "asymmetric extents have no file rendering");
  const char* neigh = rule.kind == Neigh2D::Moore ? "moore" : "von-neumann";
  return header("2d", rule.alphabet.size(), rule.ex, neigh) + "table " +
         render_table(rule.table) + "\n";
}

TileSet parse_tiles(const std::string& text) {
  std::vector<Tile> tiles;
  std::set<int> seen;
  for (const Line& l : tokenize(text)) {
    if (l.words[0] != "tile" || (l.words.size() != 6 && l.words.size() != 7))
      bad(l.number, "expected 'tile <id> N=<c> S=<c> E=<c> W=<c> [dir=<side>]'");
    Tile t;
    t.id = static_cast<int>(
        parse_number(l.number, l.words[1], -(1LL << 31), (1LL << 31) - 1));
    if (!seen.insert(t.id).second)
      bad(l.number, "duplicate tile id " + std::to_string(t.id));
    const char* sides = "NSEW";
    for (int i = 0; i < 4; ++i) {
      const std::string& w = l.words[static_cast<std::size_t>(2 + i)];
      if (w.size() < 3 || w[0] != sides[i] || w[1] != '=')
        bad(l.number, std::string("expected ") + sides[i] + "=<color>, got '" + w + "'");
      t.colors[static_cast<std::size_t>(i)] = static_cast<Color>(
          parse_number(l.number, w.substr(2), 0, (1LL << 32) - 1));
    }
    if (l.words.size() == 7) {
      const std::string& w = l.words[6];
      if (w.size() != 5 || w.rfind("dir=", 0) != 0)
        bad(l.number, "expected dir=<N|S|E|W>, got '" + w + "'");
      switch (w[4]) {
        case 'N': t.direction = TileSide::N; break;
        case 'S': t.direction = TileSide::S; break;
        case 'E': t.direction = TileSide::E; break;
        case 'W': t.direction = TileSide::W; break;
        default: bad(l.number, "expected dir=<N|S|E|W>, got '" + w + "'");
      }
    }
    tiles.push_back(t);
  }
  return make_tileset(std::move(tiles));
}

std::string emit_tiles(const TileSet& ts) {
  const char* sides = "NSEW";
  std::string out;
  for (const Tile& t : ts.tiles) {
    out += "tile " + std::to_string(t.id);
    for (int i = 0; i < 4; ++i)
      out += std::string(" ") + sides[i] + "=" +
             std::to_string(t.colors[static_cast<std::size_t>(i)]);
    if (t.direction) {
      out += " dir=";
      out += sides[static_cast<std::size_t>(*t.direction)];
    }
    out += '\n';
  }
  return out;
}

std::string render_labels(const HierarchicalPattern& h) {
  std::string out;
  for (long long y = h.side - 1; y >= 0; --y) {
    for (long long x = 0; x < h.side; ++x) {
      switch (h.at(x, y)) {
        case CellLabel::Blank: out += '.'; break;
        case CellLabel::ArmH: out += '-'; break;
        case CellLabel::ArmV: out += '|'; break;
        case CellLabel::Center: out += '+'; break;
      }
    }
    out += '\n';
  }
  return out;
}

std::string render_pbm(const HierarchicalPattern& h) {
  std::string out =
      "P1\n" + std::to_string(h.side) + " " + std::to_string(h.side) + "\n";
  for (long long y = h.side - 1; y >= 0; --y) {
    for (long long x = 0; x < h.side; ++x)
      out += h.at(x, y) == CellLabel::Blank ? '0' : '1';
    out += '\n';
  }
  return out;
}

}  // namespace calab
