#include "calab/common.hpp"

#include <cstdlib>

namespace calab {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::parse_error: return "parse_error";
    case Errc::cap_exceeded: return "cap_exceeded";
    case Errc::budget_exceeded: return "budget_exceeded";
    case Errc::incompatible: return "incompatible";
    case Errc::cone_overflow: return "cone_overflow";
    case Errc::internal: return "internal";
  }
  return "unknown";
}

long long gcd_ll(long long a, long long b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::uint64_t global_budget() {
  static const std::uint64_t value = [] {
    if (const char* env = std::getenv("CA_LAB_MAX_CELLS")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && v > 0) return static_cast<std::uint64_t>(v);
    }
    return std::uint64_t{1} << 25;
  }();
  return value;
}

void require_budget(std::uint64_t need, const char* what) {
  if (need > global_budget()) {
    fail(Errc::budget_exceeded,
         std::string(what) + ": needs " + std::to_string(need) + " items, budget " +
             std::to_string(global_budget()) + " (set CA_LAB_MAX_CELLS to raise)");
  }
}

std::string format_vec(Vec2 v) {
  return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + ")";
}

}  // namespace calab
