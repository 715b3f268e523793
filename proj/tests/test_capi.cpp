#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "calab/calab.h"

namespace {

std::string owned(char* s) {
  REQUIRE(s != nullptr);
  std::string out = s;
  calab_string_free(s);
  return out;
}

struct RuleHandle {
  calab_rule* r;
  explicit RuleHandle(const char* text) : r(calab_rule_parse(text)) {
    REQUIRE(r != nullptr);
  }
  ~RuleHandle() { calab_rule_free(r); }
  operator calab_rule*() const { return r; }
};

struct TilesHandle {
  calab_tileset* t;
  explicit TilesHandle(const char* text) : t(calab_tiles_parse(text)) {
    REQUIRE(t != nullptr);
  }
  ~TilesHandle() { calab_tiles_free(t); }
  operator calab_tileset*() const { return t; }
};

constexpr const char* kXorCorners =
    "rule 2d\nalphabet 2\nradius 1\nneighborhood moore\nbuiltin xor-corners\n";
constexpr const char* kXor1D =
    "rule 1d\nalphabet 2\nradius 1\nneighborhood interval\nbuiltin xor1d\n";
constexpr const char* kAndMin1D =
    "rule 1d\nalphabet 2\nradius 1\nneighborhood interval\nbuiltin and-min\n";

bool contains(const std::string& s, const std::string& part) {
  return s.find(part) != std::string::npos;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("rule handles round trip through parse and emit") {
  RuleHandle eca("rule 1d\nalphabet 2\nradius 1\nneighborhood interval\ntable 01110110\n");
  CHECK(calab_rule_dim(eca) == 1);
  CHECK(calab_last_error() == CALAB_OK);
  std::string once = owned(calab_rule_emit(eca));
  RuleHandle again(once.c_str());
  CHECK(owned(calab_rule_emit(again)) == once);

  RuleHandle xc(kXorCorners);
  CHECK(calab_rule_dim(xc) == 2);
}

TEST_CASE("failures set the thread error slot") {
  CHECK(calab_rule_parse("rule 3d\nalphabet 2\nradius 1\nneighborhood interval\n"
                         "builtin identity\n") == nullptr);
  CHECK(calab_last_error() == CALAB_E_PARSE);
  CHECK(contains(calab_last_error_message(), "line 1"));

  CHECK(calab_rule_parse(nullptr) == nullptr);
  CHECK(calab_last_error() == CALAB_E_INVALID_ARGUMENT);

  CHECK(calab_rule_dim(nullptr) == -1);
  CHECK(calab_last_error() == CALAB_E_INVALID_ARGUMENT);

  RuleHandle eca(kXor1D);
  CHECK(calab_gamma_permutive(eca, 1, 1) == -1);
  CHECK(calab_last_error() == CALAB_E_INVALID_ARGUMENT);
  CHECK(contains(calab_last_error_message(), "2d"));

  CHECK(calab_rule_dim(eca) == 1);
  CHECK(calab_last_error() == CALAB_OK);
}

TEST_CASE("gamma permutivity and the expansivity certificate") {
  RuleHandle xc(kXorCorners);
  CHECK(calab_gamma_permutive(xc, 1, 1) == 1);
  CHECK(calab_gamma_permutive(xc, -1, -1) == 1);
  CHECK(calab_gamma_permutive(xc, 1, -1) == 0);

  int issued = 0;
  std::string report = owned(calab_quasi_expansivity(xc, &issued));
  CHECK(issued == 1);
  CHECK(contains(report, "quasi-expansive: yes"));
  CHECK(contains(report, "gamma"));
}

TEST_CASE("closing evidence reports a re-verified refutation") {
  RuleHandle xc(kXorCorners);
  long long bad_v[] = {1, 1};
  int refuted = -1;
  std::string report = owned(calab_closing_evidence(xc, 1, -1, bad_v, 1, &refuted));
  CHECK(refuted == 1);
  CHECK(contains(report, "closing-evidence: refuted"));
  CHECK(contains(report, "witness re-verified: yes"));

  long long good_v[] = {1, -1};
  report = owned(calab_closing_evidence(xc, 1, 1, good_v, 1, &refuted));
  CHECK(refuted == 0);
  CHECK(contains(report, "closing-evidence: supported"));
}

TEST_CASE("sensitivity answers at both slopes") {
  RuleHandle xc(kXorCorners);
  int answer = -1;
  std::string hot = owned(calab_sensitivity(xc, 1, 1, 1, -1, &answer));
  CHECK(answer == 0);
  CHECK(contains(hot, "sensitivity: sensitive-evidence"));

  std::string cold = owned(calab_sensitivity(xc, 1, -1, 1, 1, &answer));
  CHECK(answer == 1);
  CHECK(contains(cold, "sensitivity: not-sensitive-evidence"));
}

TEST_CASE("slice summary and rulefile emission agree") {
  RuleHandle xc(kXorCorners);
  std::string summary = owned(calab_slice(xc, 1, 1, 3, -3, 0));
  CHECK(contains(summary, "k 3"));
  CHECK(contains(summary, "sliced-alphabet 8"));

  std::string file = owned(calab_slice(xc, 1, 1, 3, -3, 1));
  RuleHandle sliced(file.c_str());
  CHECK(calab_rule_dim(sliced) == 1);
  CHECK(owned(calab_rule_emit(sliced)) == file);
}

TEST_CASE("entropy rows are tab separated with trimmed ratios") {
  RuleHandle xc(kXorCorners);
  int ws[] = {1, 2};
  int ts[] = {2};
  std::string rows = owned(calab_entropy(xc, ws, 2, ts, 1, 1, 0, 0));
  CHECK(first_line(rows) == "1\t2\t4\t1.0");
  CHECK(contains(rows, "\n2\t2\t"));
  CHECK_FALSE(contains(rows, "+"));

  std::string sampled = owned(calab_entropy(xc, ws, 1, ts, 1, 0, 64, 7));
  CHECK(contains(first_line(sampled), "+"));
}

TEST_CASE("closing1d prints the verdict first") {
  RuleHandle xr(kXor1D);
  int verdict = -1;
  std::string report = owned(calab_closing1d(xr, 1, 6, 4, &verdict));
  CHECK(verdict == 0);
  CHECK(first_line(report) == "CLOSING");
  CHECK(contains(report, "oracle: agrees, none within bounds"));

  RuleHandle am(kAndMin1D);
  report = owned(calab_closing1d(am, 1, 6, 4, &verdict));
  CHECK(verdict == 1);
  CHECK(first_line(report) == "NOT_CLOSING");
  CHECK(contains(report, "witness re-verified: yes"));
  CHECK(contains(report, "oracle: agrees, witness found"));
}

TEST_CASE("blocking finds the frozen zero word") {
  RuleHandle am(kAndMin1D);
  int found = -1;
  std::string report = owned(calab_blocking(am, 1, 2, 4, &found));
  CHECK(found == 1);
  CHECK(contains(report, "blocking word [0] s 1"));

  RuleHandle xr(kXor1D);
  report = owned(calab_blocking(xr, 1, 4, 6, &found));
  CHECK(found == 0);
  CHECK(contains(report, "all candidates refuted up to length 4"));
}

TEST_CASE("tile search prints grids top row first") {
  const char* self_text = "tile 0 N=5 S=5 E=5 W=5\n";
  TilesHandle self(self_text);
  CHECK(owned(calab_tiles_emit(self)) == self_text);

  int sat = -1;
  std::string grid = owned(calab_tile_search(self, 1, 2, 2, &sat));
  CHECK(sat == 0);
  CHECK(grid == "0 0\n0 0\n");

  TilesHandle clash("tile 0 N=0 S=1 E=2 W=3\n");
  std::string unsat = owned(calab_tile_search(clash, 0, 2, 2, &sat));
  CHECK(sat == 1);
  CHECK(unsat == "UNSAT\n");
}

TEST_CASE("hierarchy renders labels, paths and bitmaps") {
  CHECK(owned(calab_hierarchy(1, "sw", 0)) == ".|.\n-+-\n.|.\n");
  CHECK(owned(calab_hierarchy_pbm(1, "sw")) == "P1\n3 3\n010\n111\n010\n");

  std::string with_path = owned(calab_hierarchy(1, "sw", 1));
  CHECK(contains(with_path, "path 0 start"));
  CHECK(contains(with_path, "length 9"));
  CHECK(contains(with_path, "000\n000\n000\n"));
  CHECK_FALSE(contains(with_path, "path 1"));

  CHECK(calab_hierarchy(0, "sw", 0) == nullptr);
  CHECK(calab_last_error() == CALAB_E_INVALID_ARGUMENT);
  CHECK(calab_hierarchy(1, "NE", 0) == nullptr);
  CHECK(calab_last_error() == CALAB_E_INVALID_ARGUMENT);
  CHECK(contains(calab_last_error_message(), "anchor"));
}

TEST_CASE("stretch report verifies the unit shape") {
  TilesHandle self("tile 0 N=5 S=5 E=5 W=5\n");
  int verified = -2;
  std::string report =
      owned(calab_stretch_report(self, 1, 0, 0, 1, 2, 2, &verified));
  CHECK(verified == 1);
  CHECK(contains(report, "scale 3"));
  CHECK(contains(report, "cells 9"));
  CHECK(contains(report, "neighbors 4"));
  CHECK(contains(report, "stretched-tiles 9"));
  CHECK(contains(report, "isomorphism 2x2: verified"));

  report = owned(calab_stretch_report(self, 1, 0, 0, 1, 0, 0, &verified));
  CHECK(verified == -1);
  CHECK_FALSE(contains(report, "isomorphism"));
}

TEST_CASE("reduction witness checks its core") {
  TilesHandle tau("tile 0 N=7 S=7 E=7 W=7\n");
  CHECK(calab_reduction_build(tau, 0, 1, 1, 0, 0) == nullptr);
  CHECK(calab_last_error() == CALAB_E_INVALID_ARGUMENT);

  calab_reduction* red = calab_reduction_build(tau, 0, 1, 1, 0, 2);
  REQUIRE(red != nullptr);
  int ok = -2;
  std::string report = owned(calab_reduction_witness(red, 0, 2, 1, &ok));
  CHECK(ok == 1);
  CHECK(contains(report, "kind mu"));
  CHECK(contains(report, "split (0,0)"));
  CHECK(contains(report, "equal-image over core: yes"));
  CHECK(contains(report, "equal-image windows up to 2x2: yes"));

  report = owned(calab_reduction_witness(red, 1, 1, 0, &ok));
  CHECK(ok == -1);
  CHECK(contains(report, "kind numu"));
  CHECK_FALSE(contains(report, "equal-image"));
  calab_reduction_free(red);
}
