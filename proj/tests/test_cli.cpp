#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string out_path = "cli_test_stdout.txt";
  const std::string cmd =
      std::string(QMDS_LAB_BIN) + " " + args + " > " + out_path + " 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WEXITSTATUS(raw);
  std::ifstream in(out_path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  res.out = os.str();
  std::remove(out_path.c_str());
  return res;
}

}  // namespace

TEST_CASE("build prints parameters and writes a descriptor") {
  RunResult r = run("--q 5 --n 5 --t 3 build --out cli_test_code.qmds");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("[[5,1]]_5") != std::string::npos);
  CHECK(r.out.find("D=3") != std::string::npos);
  std::ifstream desc("cli_test_code.qmds");
  CHECK(desc.good());
  std::remove("cli_test_code.qmds");

  RunResult ame = run("--q 5 --n 4 --t 2 build --out cli_test_ame.qmds");
  CHECK(ame.exit_code == 0);
  CHECK(ame.out.find("(AME)") != std::string::npos);
  std::remove("cli_test_ame.qmds");
}

TEST_CASE("config errors exit with code 2") {
  CHECK(run("--q 4 --n 4 --t 2 build --out cli_test_bad.qmds").exit_code == 2);
  CHECK(run("--q 5 --n 6 --t 3 build --out cli_test_bad.qmds").exit_code == 2);
  CHECK(run("--q 5 --n 5 --t 3 verify --suite bogus").exit_code == 2);
  CHECK(run("nonsense").exit_code == 2);
}

TEST_CASE("repair prints the ledger and matches the EC theorems") {
  RunResult h1 = run("--q 5 --n 5 --t 3 repair --topology h1 --e 5 --helpers 1,2,3");
  CHECK(h1.exit_code == 0);
  CHECK(h1.out.find("ec=6 fidelity=1") != std::string::npos);
  CHECK(h1.out.find("total ec=6") != std::string::npos);

  RunResult h2 = run(
      "--q 5 --n 5 --t 3 repair --topology h2 --e 5 --helpers 1,2,3 --hub 1");
  CHECK(h2.exit_code == 0);
  CHECK(h2.out.find("ec=5 fidelity=1") != std::string::npos);
}

TEST_CASE("repair with t - 1 helpers exits 5 with a certificate") {
  RunResult r = run("--q 5 --n 5 --t 3 repair --topology h1 --e 5 --helpers 1,2");
  CHECK(r.exit_code == 5);
  CHECK(r.out.find("sr_in=25") != std::string::npos);
  CHECK(r.out.find("sr_required=125") != std::string::npos);
}

TEST_CASE("repair with an undersized budget exits 4") {
  RunResult r = run(
      "--q 5 --n 5 --t 3 repair --topology h1 --e 5 --helpers 1,2,3 --budget 1");
  CHECK(r.exit_code == 4);
}

TEST_CASE("verify reports are byte-identical across runs") {
  const std::string args = "--q 5 --n 4 --t 3 verify --suite all --seed 9";
  RunResult a = run(args);
  RunResult b = run(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("overall pass") != std::string::npos);

  RunResult entropy = run("--q 5 --n 5 --t 3 verify --suite entropy-table");
  CHECK(entropy.exit_code == 0);
  int claims = 0;
  for (size_t p = entropy.out.find("lem-c.1-entropy"); p != std::string::npos;
       p = entropy.out.find("lem-c.1-entropy", p + 1))
    ++claims;
  CHECK(claims == 31);
}
