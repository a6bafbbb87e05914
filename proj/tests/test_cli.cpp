#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "diskspace/json_util.hpp"

namespace fs = std::filesystem;
using diskspace::json;

namespace {

const std::string kCli = DISKSPACE_CLI;
const fs::path kData = DISKSPACE_DATA_DIR;

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("diskspace-cli-test-" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data(const char* name) { return (kData / name).string(); }

void write(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST_CASE("norm exit codes and reports") {
  Scratch s;
  const fs::path out = s.dir / "bloch.json";
  CHECK(run("norm " + data("g_log.json") + " --space bloch --out " + out.string()) == 0);
  const json rep = json::parse(slurp(out));
  CHECK(std::abs(rep.at("estimate").at("value").get<double>() - 2.0) <= 1e-3);
  CHECK(rep.contains("grid"));

  CHECK(run("norm " + data("const1.json") + " --space bergman --p 2 --out " + (s.dir / "b.json").string()) == 0);
  CHECK(json::parse(slurp(s.dir / "b.json")).at("estimate").at("value").get<double>() == doctest::Approx(1.0));

  CHECK(run("norm " + data("g_log.json") + " --space sup") == 2);
  CHECK(run("norm " + data("g_log.json") + " --space multiplier") == 2);
}

TEST_CASE("little Bloch profile exit code and CSV") {
  Scratch s;
  const fs::path csv = s.dir / "p.csv";
  CHECK(run("norm " + data("z.json") + " --space bloch0-profile --csv " + csv.string()) == 0);
  const std::string text = slurp(csv);
  CHECK(text.rfind("k,r_k,ring_max,refined_max\n", 0) == 0);
}

TEST_CASE("inconclusive profiles exit with 3") {
  Scratch s;
  // a_n = n^(-1/4): tail still above the little-Bloch threshold at K = 20 but decaying.
  write(s.dir / "slow.json",
        R"({"kind": "gap_series", "exponents": [1,2,4,8,16,32,64,128,256,512,1024,2048,4096,8192,16384,32768,65536,131072,262144,524288,1048576,2097152,4194304],)"
        R"( "coeffs": [1], "tail": {"scale": 1, "power": -0.25}})");
  CHECK(run("norm " + (s.dir / "slow.json").string() + " --space bloch0-profile") == 3);
}

TEST_CASE("parse and domain errors") {
  Scratch s;
  write(s.dir / "bad.json", "{ not json");
  CHECK(run("norm " + (s.dir / "bad.json").string() + " --space bloch") == 64);
  CHECK(run("norm " + data("g_log.json") + " --space nosuchspace") == 64);
  CHECK(run("norm /nonexistent.json --space bloch") == 64);
  write(s.dir / "kind.json", R"({"kind": "sine"})");
  CHECK(run("norm " + (s.dir / "kind.json").string() + " --space bloch") == 64);
  CHECK(run("norm " + data("z.json") + " --space bergman --p 0.5") == 65);
  CHECK(run("norm " + data("z.json") + " --space bloch --grid-k 2") == 65);
}

TEST_CASE("no partial report is left behind on error") {
  Scratch s;
  const fs::path out = s.dir / "never.json";
  CHECK(run("norm " + data("z.json") + " --space bergman --p 0.5 --out " + out.string()) == 65);
  CHECK_FALSE(fs::exists(out));
  CHECK_FALSE(fs::exists(s.dir / "never.json.tmp"));
}

TEST_CASE("identical invocations give byte-identical reports") {
  Scratch s;
  const std::string args = "classify " + data("pow_neg_04.json") + " --p 2 --grid-k 12 --angles 512 --seed 17 --out ";
  CHECK(run(args + (s.dir / "a.json").string()) == 0);
  CHECK(run(args + (s.dir / "b.json").string()) == 0);
  CHECK(slurp(s.dir / "a.json") == slurp(s.dir / "b.json"));
  CHECK_FALSE(slurp(s.dir / "a.json").empty());

  const std::string lorch = "lorch " + data("nonlorch_g.json") + " --test-points '[[0.5, 1.5]]' --out ";
  CHECK(run(lorch + (s.dir / "c.json").string()) == 0);
  CHECK(run(lorch + (s.dir / "d.json").string()) == 0);
  CHECK(slurp(s.dir / "c.json") == slurp(s.dir / "d.json"));
}

TEST_CASE("witness command") {
  Scratch s;
  CHECK(run("witness " + data("g_log.json") + " --n 5 --out " + (s.dir / "w.json").string()) == 0);
  const json w = json::parse(slurp(s.dir / "w.json"));
  CHECK(w.at("witness").at("achieved").get<double>() > 5.0);
  CHECK(run("witness " + data("z.json") + " --n 5") == 4);
  CHECK(run("witness " + data("pow_neg_04.json") + " --n 100 --kind seminorm") == 0);
}

TEST_CASE("lorch command") {
  Scratch s;
  const fs::path out = s.dir / "swap.json";
  CHECK(run("lorch " + data("swap.json") + " --test-points '[[1, 0]]' --out " + out.string()) == 0);
  const json rep = json::parse(slurp(out));
  CHECK(rep.at("assessment").at("verdict").get<std::string>() == "non-lorch-evidence");

  CHECK(run("lorch " + data("square.json") + " --test-points '[[0.3, -0.7], [1.2, 0.1]]'") == 0);
  CHECK(run("lorch " + data("g_log.json")) == 64);
}

TEST_CASE("verify command") {
  Scratch s;
  write(s.dir / "empty.json", R"({"seed": 1, "checks": []})");
  CHECK(run("verify " + (s.dir / "empty.json").string() + " --out " + (s.dir / "r0.json").string()) == 0);
  CHECK(json::parse(slurp(s.dir / "r0.json")).at("rows").empty());

  write(s.dir / "mismatch.json", R"({"seed": 1, "checks": [
    {"id": "seminorm-log", "module": "norm-engine", "operation": "bloch_seminorm",
     "params": {"f": {"kind": "log_one_minus", "alpha": 1}}, "expected": 3, "tolerance": 1e-3}]})");
  CHECK(run("verify " + (s.dir / "mismatch.json").string() + " --out " + (s.dir / "r1.json").string()) == 1);
  const json rows = json::parse(slurp(s.dir / "r1.json")).at("rows");
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].at("pass").get<bool>());

  write(s.dir / "dup.json", R"({"seed": 1, "checks": [
    {"id": "a", "operation": "bloch_seminorm", "params": {"f": {"kind": "monomial", "degree": 1}}, "expected": 1, "tolerance": 1e-3},
    {"id": "a", "operation": "bloch_seminorm", "params": {"f": {"kind": "monomial", "degree": 1}}, "expected": 1, "tolerance": 1e-3}]})");
  CHECK(run("verify " + (s.dir / "dup.json").string()) == 64);

  write(s.dir / "notol.json", R"({"seed": 1, "checks": [
    {"id": "a", "operation": "bloch_seminorm", "params": {"f": {"kind": "monomial", "degree": 1}}, "expected": 1}]})");
  CHECK(run("verify " + (s.dir / "notol.json").string()) == 64);
}

TEST_CASE("kernel selection does not change reports") {
  Scratch s;
  const std::string args = "norm " + data("pow_neg_04.json") + " --space bergman --p 2 --grid-k 10 --out ";
  CHECK(run("--isa scalar " + args + (s.dir / "scalar.json").string()) == 0);
  CHECK(run(args + (s.dir / "best.json").string()) == 0);
  CHECK(slurp(s.dir / "scalar.json") == slurp(s.dir / "best.json"));
  CHECK(run("--isa bogus " + args + (s.dir / "x.json").string()) == 64);
}
