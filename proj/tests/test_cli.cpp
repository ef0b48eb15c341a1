#include <fstream>
#include <sstream>

#include "doctest.h"
#include "locinv/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = locinv::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kMap = std::string(LOCINV_DATA_DIR) + "/three_bit.map";

}  // namespace

TEST_CASE("eval, goe and invert on the example map") {
  auto r = run({"eval", "--map", kMap, "--point", "100"});
  CHECK(r.code == 0);
  CHECK(r.out == "110\n");
  CHECK(run({"eval", "--map", kMap, "--point", "100", "--power", "4"}).out == "100\n");

  for (const char* b : {"brute", "implicant"}) {
    r = run({"goe", "--map", kMap, "--backend", b});
    CHECK(r.code == 0);
    CHECK(r.out == "001\n010\n");
  }

  r = run({"invert", "--map", kMap, "--target", "110"});
  CHECK(r.code == 0);
  CHECK(r.out.find("orbit: 100 (m=3, N=4)\n") != std::string::npos);

  r = run({"invert", "--map", kMap, "--target", "010"});
  CHECK(r.code == 1);
  CHECK(r.out.find("status: empty\n") != std::string::npos);

  r = run({"minpoly", "--map", kMap, "--point", "110"});
  CHECK(r.out == "point: 110\nm(X): X^3+X^2+X+1\ndegree: 3\norder: 4\nsolution: 100 (F(x) = y)\n");

  r = run({"periods", "--map", kMap});
  CHECK(r.out.find("periods: 1,2,4\n") != std::string::npos);

  r = run({"invert-online", "--map", kMap, "--target", "010", "--max-degree", "8"});
  CHECK(r.code == 1);
  CHECK(r.out.find("status: inconclusive") != std::string::npos);
}

TEST_CASE("offline data file") {
  const std::string path = "test_cli_three_bit.odata";
  auto r = run({"offline", "--map", kMap, "--out", path});
  REQUIRE(r.code == 0);
  r = run({"invert", "--map", kMap, "--target", "111", "--offline", path});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "target: 111\nstatus: mixed\norbit: 101 (m=3, N=4)\nchain: 011 (origin 010, steps 2)\n"
        "solutions: 2 011,101\n");

  // Offline data of a different map is rejected.
  const std::string other = "test_cli_other.map";
  std::ofstream(other) << "n=3\ny1 = x2\ny2 = x3\ny3 = x1\n";
  r = run({"invert", "--map", other, "--target", "111", "--offline", path});
  CHECK(r.code == 2);
  CHECK(r.err.find("--offline") != std::string::npos);
}

TEST_CASE("usage errors name the offending flag") {
  auto r = run({});
  CHECK(r.code == 2);
  r = run({"eval", "--map", kMap, "--point", "10"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--point") != std::string::npos);
  r = run({"goe", "--map", kMap, "--backend", "magic"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--backend") != std::string::npos);
  r = run({"invert", "--map", kMap, "--target", "110", "--chain-mode", "never"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--chain-mode") != std::string::npos);
  r = run({"eval", "--map", "/no/such/file", "--point", "100"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--map") != std::string::npos);
  CHECK(run({"--help"}).code == 0);

  const std::string bad = "test_cli_bad.map";
  std::ofstream(bad) << "n=3\ny1 = x1\ny2 = x4\ny3 = x3\n";
  r = run({"eval", "--map", bad, "--point", "100"});
  CHECK(r.code == 2);
  CHECK(r.err.find("test_cli_bad.map:3:") != std::string::npos);
}

TEST_CASE("reports do not depend on the thread count") {
  const std::vector<std::vector<std::string>> cmds = {
      {"invert", "--map", kMap, "--target", "000"},
      {"demo-block", "--seed", "3"},
      {"demo-stream", "--fixture", "unobservable", "--seed", "4", "--k0", "9"},
      {"demo-stream", "--fixture", "observable", "--seed", "5", "--k0", "100"},
      {"goe", "--map", kMap, "--backend", "implicant"},
  };
  for (const auto& cmd : cmds) {
    const auto base = run(cmd);
    CHECK(base.code == 0);
    for (const char* t : {"4", "8"}) {
      auto c = cmd;
      c.push_back("--threads");
      c.push_back(t);
      const auto r = run(c);
      CHECK(r.code == base.code);
      CHECK(r.out == base.out);
    }
  }
}

TEST_CASE("demos and selftest") {
  auto r = run({"selftest"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("selftest: ok") != std::string::npos);

  r = run({"demo-block", "--key", "100"});
  CHECK(r.code == 0);
  CHECK(r.out.find("ciphertext: 110\n") != std::string::npos);
  CHECK(r.out.find("keys: 100\n") != std::string::npos);

  r = run({"demo-block", "--ciphertext", "010"});
  CHECK(r.code == 1);
  CHECK(r.out.find("keys: -\n") != std::string::npos);

  r = run({"demo-stream", "--spec", std::string(LOCINV_DATA_DIR) + "/shift_register.stream", "--state", "10"});
  CHECK(r.code == 0);
  CHECK(r.out.find("states x(k0): 10\n") != std::string::npos);

  r = run({"demo-stream", "--fixture", "nope"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--fixture") != std::string::npos);
}
