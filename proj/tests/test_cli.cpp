#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "mwb/counting.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kExe = MWBENCH_EXE;
const std::string kConfigDir = MWB_CONFIG_DIR;

struct Run {
  int status = -1;
  std::string out;
};

fs::path scratch() {
  fs::path dir = fs::temp_directory_path() / ("mwbench_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt";
  const std::string cmd = "\"" + kExe + "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out)};
}

std::string write_config(const std::string& name, const json& j) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << j.dump(2);
  return p.string();
}

std::string config(const std::string& name) { return "\"" + kConfigDir + "/" + name + "\""; }

}  // namespace

TEST_CASE("height subcommand") {
  Run o = run("height --a4 0 --a6 -2");
  REQUIRE(o.status == 0);
  CHECK(json::parse(o.out)["value"] == "0");

  Run t = run("height --a4 0 --a6 1 --x 2 --y 3");
  REQUIRE(t.status == 0);
  json jt = json::parse(t.out);
  CHECK(jt["torsion"] == true);
  CHECK(std::stod(jt["value"].get<std::string>()) < 1e-8);

  Run p = run("height --a4 0 --a6 -2 --x 3 --y 5");
  REQUIRE(p.status == 0);
  CHECK(std::stod(json::parse(p.out)["value"].get<std::string>()) > 0);
  CHECK(run("height --a4 0 --a6 -2 --x 3 --y 5").out == p.out);

  CHECK(run("height --a4 0 --a6 -2 --x 3 --y 4").status == 2);
  CHECK(run("height --a4 0 --a6 0").status == 2);
}

TEST_CASE("degrees subcommand") {
  Run r = run("degrees --g 2 --r 1 --d 1 --l 4");
  REQUIRE(r.status == 0);
  json j = json::parse(r.out);
  CHECK(j["isogeny"]["d_prime_bound"] == "8");
  CHECK(j["product_degree_XxX"] == "2");
  CHECK(j["embedding_dimension"] == "1");
  CHECK(run("degrees --g 2 --r 1 --d 1 --l 3").status == 2);
}

TEST_CASE("ledger subcommand") {
  Run r = run("ledger --config " + config("default.json"));
  REQUIRE(r.status == 0);
  for (const auto& e : json::parse(r.out)) CHECK_FALSE(e["provenance"].get<std::string>().empty());

  json bad = json::parse(slurp(kConfigDir + "/default.json"));
  bad["constants"]["c0"] = 0;
  CHECK(run("ledger --config \"" + write_config("bad.json", bad) + "\"").status == 2);
  CHECK(run("ledger --config \"" + (scratch() / "absent.json").string() + "\"").status == 2);
}

TEST_CASE("golden report is byte-identical across runs") {
  Run a = run("pipeline --config " + config("golden.json"));
  Run b = run("pipeline --config " + config("golden.json"));
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(json::parse(a.out)["report"]["verdict"] == "ok");

  const fs::path out = scratch() / "golden.json";
  REQUIRE(run("--out \"" + out.string() + "\" pipeline --config " + config("golden.json")).status == 0);
  CHECK(slurp(out) == a.out);
}

TEST_CASE("certificate failures exit with status 3") {
  mwb::GapSequence seq = mwb::make_gap_sequence(2.0, 3, 2, {0});
  json pts = json::array();
  for (auto m : seq.multipliers) pts.push_back(json::array({m}));
  json cfg = {{"constants", {{"g", 1}, {"r", 1}, {"c4", 2}, {"c5", "1/1000"}, {"n_prime", 3}}},
              {"pipeline", {{"gram", json::array({json::array({1})})}, {"points", pts}}}};
  Run r = run("pipeline --config \"" + write_config("stalled.json", cfg) + "\"");
  CHECK(r.status == 3);
  CHECK(json::parse(r.out)["verdict"] == "certificate-failure");
}

TEST_CASE("testbed, cover, lattice and pack subcommands") {
  Run t = run("testbed --config " + config("testbed.json"));
  REQUIRE(t.status == 0);
  json j = json::parse(t.out);
  CHECK(j["report"]["verdict"] == "ok");
  CHECK(run("testbed --config " + config("testbed.json")).out == t.out);

  json big = json::parse(slurp(kConfigDir + "/testbed.json"));
  big["testbed"]["max_combinations"] = 10;
  CHECK(run("testbed --config \"" + write_config("big.json", big) + "\"").status == 4);

  Run c = run("cover");
  REQUIRE(c.status == 0);
  json jc = json::parse(c.out);
  CHECK(jc["components"] == 1);
  CHECK(jc["x_prime"]["components"].size() == 1);

  Run l = run("lattice --config " + config("default.json"));
  REQUIRE(l.status == 0);
  CHECK(json::parse(l.out).size() == 3);

  Run p1 = run("--seed 5 pack --config " + config("default.json"));
  Run p2 = run("--seed 5 pack --config " + config("default.json"));
  REQUIRE(p1.status == 0);
  CHECK(p1.out == p2.out);
}

TEST_CASE("usage errors") {
  CHECK(run("").status != 0);
  CHECK(run("frobnicate").status != 0);
}
