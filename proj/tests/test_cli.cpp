// Drives the installed command-line binary end to end. The binary path
// arrives as the first program argument.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <string>

namespace {

std::string g_cli;

struct RunResult {
  int code;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = g_cli + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << text;
}

bool contains(const std::string& s, const std::string& part) {
  return s.find(part) != std::string::npos;
}

}  // namespace

TEST_CASE("entropy prints exact tab-separated rows") {
  RunResult r = run("entropy xor-corners --w 1 --t 2 --exact");
  CHECK(r.code == 0);
  CHECK(r.out == "1\t2\t4\t1.0\n");
}

TEST_CASE("sampled entropy is deterministic under a seed") {
  RunResult a = run("entropy xor-corners --w 2 --t 2 --sample 64 --seed 9");
  RunResult b = run("entropy xor-corners --w 2 --t 2 --sample 64 --seed 9");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(contains(a.out, "+"));
}

TEST_CASE("closing verdicts map to exit codes") {
  RunResult r = run("closing1d xor1d --side right");
  CHECK(r.code == 0);
  CHECK(r.out.substr(0, 8) == "CLOSING\n");

  r = run("closing1d and-min --side right --oracle 6,4");
  CHECK(r.code == 1);
  CHECK(contains(r.out, "NOT_CLOSING"));
  CHECK(contains(r.out, "oracle: agrees, witness found"));
}

TEST_CASE("blocking reports the frozen word") {
  RunResult r = run("blocking and-min --s 1 --max-len 2 --horizon 4");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "blocking word [0] s 1"));
}

TEST_CASE("hierarchy renders labels and bitmaps") {
  RunResult r = run("hierarchy --step 1 --anchor sw");
  CHECK(r.code == 0);
  CHECK(r.out == ".|.\n-+-\n.|.\n");

  r = run("hierarchy --step 2 --anchor center --render pbm");
  CHECK(r.code == 0);
  CHECK(r.out.substr(0, 7) == "P1\n7 7\n");

  r = run("hierarchy --step 1 --anchor sw --path");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "path 0 start"));
}

TEST_CASE("analyze2d aggregates the requested analyses") {
  RunResult r = run("analyze2d xor-corners --gamma-permutivity --nu 1,1");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "gamma-permutive (1,1): yes"));
  CHECK(contains(r.out, "gamma-permutive (-1,-1): yes"));

  r = run("analyze2d xor-corners --quasi-expansive");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "quasi-expansive: yes"));

  r = run("analyze2d xor-corners --closing-evidence --nu 1,-1 --v 1,1");
  CHECK(r.code == 1);
  CHECK(contains(r.out, "closing-evidence: refuted"));
  CHECK(contains(r.out, "witness re-verified: yes"));

  r = run("analyze2d xor-corners --sensitivity --nu 1,1 --v 1,-1");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "sensitivity: sensitive-evidence"));
}

TEST_CASE("slice emits a reusable rule file") {
  RunResult r = run("slice xor-corners --nu 1,1 --v 3,-3");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "k 3"));
  CHECK(contains(r.out, "sliced-alphabet 8"));

  r = run("slice xor-corners --nu 1,1 --v 3,-3 --emit-rulefile");
  CHECK(r.code == 0);
  CHECK(r.out.substr(0, 8) == "rule 1d\n");
  write_file("cli_sliced.rule", r.out);
  RunResult reuse = run("entropy cli_sliced.rule --w 1 --t 1 --exact");
  CHECK(reuse.code == 0);
  std::remove("cli_sliced.rule");
}

TEST_CASE("tile search distinguishes SAT from UNSAT") {
  write_file("cli_self.tiles", "tile 0 N=5 S=5 E=5 W=5\n");
  write_file("cli_clash.tiles", "tile 0 N=0 S=1 E=2 W=3\n");

  RunResult r = run("tile cli_self.tiles --torus 2,2");
  CHECK(r.code == 0);
  CHECK(r.out == "0 0\n0 0\n");

  r = run("tile cli_clash.tiles --square 2");
  CHECK(r.code == 1);
  CHECK(r.out == "UNSAT\n");

  r = run("tile cli_self.tiles");
  CHECK(r.code == 2);

  std::remove("cli_self.tiles");
  std::remove("cli_clash.tiles");
}

TEST_CASE("stretch and reduce run off tile files") {
  write_file("cli_tau.tiles", "tile 0 N=7 S=7 E=7 W=7\n");

  RunResult r = run("stretch cli_tau.tiles --nu 1,0 --mu 0,1 --verify 2,2");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "isomorphism 2x2: verified"));

  r = run("reduce cli_tau.tiles --nu 0,1 --mu 1,0 --witness mu --window 2 --check");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "equal-image over core: yes"));

  std::remove("cli_tau.tiles");
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("closing1d xor1d --side up").code == 2);
  CHECK(run("entropy nosuchrule --w 1 --t 1 --exact").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("hierarchy --step 1 --anchor ne").code == 2);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <calab binary> [doctest args]\n", argv[0]);
    return 1;
  }
  g_cli = argv[1];
  doctest::Context ctx;
  ctx.applyCommandLine(argc - 1, argv + 1);
  return ctx.run();
}
