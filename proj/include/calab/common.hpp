#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace calab {

enum class Errc {
  invalid_argument,
  parse_error,
  cap_exceeded,
  budget_exceeded,
  incompatible,
  cone_overflow,
  internal,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

const char* errc_name(Errc code);

struct Vec2 {
  long long x = 0;
  long long y = 0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(long long k, Vec2 a) { return {k * a.x, k * a.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(Vec2 a, Vec2 b) { return !(a == b); }
  // lexicographic, x first; used for canonical tie-breaking
  friend bool operator<(Vec2 a, Vec2 b) { return a.x != b.x ? a.x < b.x : a.y < b.y; }
};

inline long long dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline long long det(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

long long gcd_ll(long long a, long long b);

// Axis-aligned half-open cell rectangle [x0, x0+w) x [y0, y0+h).
struct Rect {
  long long x0 = 0;
  long long y0 = 0;
  long long w = 0;
  long long h = 0;

  bool contains(Vec2 p) const {
    return p.x >= x0 && p.x < x0 + w && p.y >= y0 && p.y < y0 + h;
  }
  long long cells() const { return w * h; }
  static Rect centered(Vec2 c, long long w, long long h) {
    return {c.x - w / 2, c.y - h / 2, w, h};
  }
};

// Global enumeration budget; CA_LAB_MAX_CELLS overrides the default (2^25).
std::uint64_t global_budget();

void require_budget(std::uint64_t need, const char* what);

std::string format_vec(Vec2 v);

}  // namespace calab
