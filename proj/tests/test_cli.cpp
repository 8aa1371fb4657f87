#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kCli = FMP_CLI;
const std::string kFixtures = FMP_FIXTURES;

struct Run {
  int code = -1;
  std::string out; // stdout
  std::string err; // stderr
};

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string &args) {
  const auto err_path = std::filesystem::temp_directory_path() / "fmp_cli_test_stderr.txt";
  const std::string cmd = kCli + " " + args + " 2>" + err_path.string();
  Run r;
  FILE *p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0)
    r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_path.string());
  std::filesystem::remove(err_path);
  return r;
}

std::string fx(const char *name) { return kFixtures + "/" + name; }

std::string sample_sdd() {
  return "--sdd " + fx("sample.sdd") + " --vtree " + fx("sample.vtree") + " --instance " +
         fx("sample.inst");
}

} // namespace

TEST_CASE("membership queries") {
  auto r = run("fmp " + sample_sdd() + " --target 3");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("YES witness=1,3 vars=", 0) == 0);
  CHECK(r.out.find(" solve_s=") != std::string::npos);

  r = run("fmp " + sample_sdd() + " --target 3 --names " + fx("sample.names"));
  CHECK(r.out.rfind("YES witness=1,3 names=P,M ", 0) == 0);

  r = run("fmp " + sample_sdd() + " --target 2 --method one-step");
  CHECK(r.code == 1);
  CHECK(r.out.rfind("NO vars=", 0) == 0);

  r = run("fmp --xpg " + fx("sample.xpg") + " --target 1");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("YES witness=1,3", 0) == 0);

  r = run("fmp --obdd " + fx("sample.obdd") + " --instance " + fx("sample.inst") +
          " --target 4");
  CHECK(r.code == 1);

  r = run("fmp --dt " + fx("sample.dt") + " --instance " + fx("sample.inst") + " --target 3");
  CHECK(r.code == 0);
}

TEST_CASE("usage and input errors") {
  auto r = run("fmp --sdd " + fx("sample.sdd") + " --instance " + fx("sample.inst") +
               " --target 3");
  CHECK(r.code == 2);
  CHECK(r.err.find("--vtree") != std::string::npos);
  CHECK(r.err.find("Usage") != std::string::npos);

  r = run("fmp " + sample_sdd());
  CHECK(r.code == 2);

  r = run("fmp " + sample_sdd() + " --target 9");
  CHECK(r.code == 2);
  CHECK(r.err.find("target") != std::string::npos);

  r = run("fmp " + sample_sdd() + " --target 3 --method fast");
  CHECK(r.code == 2);

  r = run("axp --sdd " + fx("constant.sdd") + " --vtree " + fx("one.vtree") +
          " --instance " + fx("one.inst"));
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());

  r = run("axp --sdd /nonexistent.sdd --vtree " + fx("sample.vtree") + " --instance " +
          fx("sample.inst"));
  CHECK(r.code == 2);

  r = run("");
  CHECK(r.code == 2);
  r = run("--help");
  CHECK(r.code == 0);
}

TEST_CASE("explanations") {
  auto r = run("axp " + sample_sdd());
  CHECK(r.code == 0);
  CHECK(r.out == "AXP 1,3\n");
  r = run("cxp --xpg " + fx("sample.xpg"));
  CHECK(r.out == "CXP 3\n");
  r = run("cxp --xpg " + fx("sample.xpg") + " --names " + fx("sample.names"));
  CHECK(r.out == "CXP 3 names=M\n");
  r = run("enum --obdd " + fx("sample.obdd") + " --instance " + fx("sample.inst"));
  CHECK(r.code == 0);
  CHECK(r.out == "AXPS: {1,3}\nCXPS: {1} {3}\n");
}

TEST_CASE("encode writes the pinned DIMACS") {
  auto r = run("encode --xpg " + fx("sample.xpg") + " --target 3 --method one-step");
  CHECK(r.code == 0);
  CHECK(r.out == slurp(fx("sample_xpg_t3_onestep.cnf")));
  const auto path = std::filesystem::temp_directory_path() / "fmp_cli_test.cnf";
  r = run("encode --xpg " + fx("sample.xpg") + " --target 3 --method one-step --out " +
          path.string());
  CHECK(r.code == 0);
  CHECK(slurp(path.string()) == slurp(fx("sample_xpg_t3_onestep.cnf")));
  std::filesystem::remove(path);
  r = run("encode --xpg " + fx("sample.xpg") + " --target 0");
  CHECK(r.code == 2);
}

TEST_CASE("generate and bench") {
  const auto dir = std::filesystem::temp_directory_path() / "fmp_cli_gen";
  std::filesystem::create_directories(dir);
  const std::string prefix = (dir / "big").string();
  auto r = run("generate --kind obdd --m 17 --nodes 30 --seed 4 --out " + prefix);
  REQUIRE(r.code == 0);
  // Exhaustive enumeration refuses more than 16 features.
  const std::string inst = (dir / "big.inst").string();
  bool refused = false;
  for (int c : {0, 1}) {
    {
      std::ofstream f(inst);
      f << "v: 0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\nc: " << c << "\n";
    }
    r = run("enum --obdd " + prefix + ".obdd --instance " + inst);
    CHECK(r.code == 2);
    refused = refused || r.err.find("16") != std::string::npos;
  }
  CHECK(refused);

  r = run("generate --kind shannon-sdd --m 6 --nodes 10 --seed 2 --out " + prefix);
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(prefix + ".sdd"));
  CHECK(std::filesystem::exists(prefix + ".vtree"));
  r = run("generate --kind shannon-sdd --m 6 --nodes 10");
  CHECK(r.code == 2);

  auto a = run("generate --kind obdd --m 6 --nodes 10 --seed 9");
  auto b = run("generate --kind obdd --m 6 --nodes 10 --seed 9");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  std::filesystem::remove_all(dir);

  r = run("bench --kind obdd --m 6 --nodes 10 --count 2 --queries 5 --seed 3");
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "name,m,nodes,method,yes_pct,avg_vars,avg_cls,max_s,avg_s,timeouts");
  int rows = 0;
  while (std::getline(lines, line))
    ++rows;
  CHECK(rows == 4);
  r = run("bench --kind zdd");
  CHECK(r.code == 2);
}
