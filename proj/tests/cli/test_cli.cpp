#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "acceptance.hpp"
#include "commands.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "pintersect");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = pintersect::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
  const std::string path = std::string(P_tmpdir) + "/pintersect_cli_" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(call({}).code == 2);
  CHECK(call({"bogus"}).code == 2);
  CHECK(call({"certify"}).code == 2);
  CHECK(call({"psi", "--x", "20", "--q", "0"}).code == 2);
}

TEST_CASE("domain errors exit with 1") {
  CHECK(call({"certify", "--poly", "x^2"}).code == 1);
  CHECK(call({"gauss", "--poly", "[-1,0,1]", "--q", "4", "--a", "2"}).code == 1);
  CHECK(call({"count", "--poly", "[-1,0,1]", "--L", "50", "--set", "/nonexistent/set.json"}).code == 1);
}

TEST_CASE("certify reports a sufficient condition") {
  const auto r = call({"certify", "--poly", "[0,-1,1]"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["kind"] == "SufficientCondition");
  const auto sq = call({"certify", "--poly", "[0,0,1]", "--qmax", "100"});
  REQUIRE(sq.code == 0);
  CHECK(json::parse(sq.out)["kind"] == "FailsAt");
}

TEST_CASE("psi and gauss values") {
  const auto p = call({"psi", "--x", "20", "--a", "1", "--q", "4"});
  REQUIRE(p.code == 0);
  CHECK(std::stod(p.out) == doctest::Approx(7.0076).epsilon(1e-5));
  const auto g = call({"gauss", "--poly", "[-1,0,1]", "--q", "3", "--a", "1"});
  REQUIRE(g.code == 0);
  const auto j = json::parse(g.out);
  const auto row = j.is_array() ? j[0] : j;
  CHECK(row["abs"].get<double>() == doctest::Approx(std::abs(row["re"].get<double>())));
}

TEST_CASE("count agrees across methods on a set file") {
  const auto path = temp_file("set.json", R"({"L": 50, "members": [1, 2, 3, 10, 20, 35, 48]})");
  const auto r = call({"count", "--poly", "[-1,0,1]", "--L", "50", "--set", path, "--method", "both"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["fft_value"].get<double>() == doctest::Approx(j["value"].get<double>()).epsilon(1e-9));
  std::remove(path.c_str());
}

TEST_CASE("profile emits CSV with a header") {
  const auto r = call({"--csv", "profile", "--poly", "[0,0,1]", "--N", "10,20", "--mode", "all-n"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("N,density,set_size,mode,poly\n", 0) == 0);
}

TEST_CASE("config file supplies defaults and flags override it") {
  const auto conf = pintersect::cli::parse_config("# defaults\nq = 4\n a = 3 \n");
  CHECK(conf.at("q") == "4");
  CHECK(conf.at("a") == "3");
  CHECK_THROWS(pintersect::cli::parse_config("no equals sign\n"));
  const auto path = temp_file("psi.conf", "q = 4\na = 3\n");
  const auto from_conf = call({"--config", path, "psi", "--x", "20"});
  const auto explicit_a = call({"--config", path, "psi", "--x", "20", "--a", "1"});
  const auto direct = call({"psi", "--x", "20", "--a", "1", "--q", "4"});
  REQUIRE(from_conf.code == 0);
  CHECK(from_conf.out == call({"psi", "--x", "20", "--a", "3", "--q", "4"}).out);
  CHECK(explicit_a.out == direct.out);
  std::remove(path.c_str());
}

TEST_CASE("iterate is deterministic under a fixed seed") {
  const std::vector<std::string> args = {"--seed", "7", "iterate", "--poly", "[0,-1,1]", "--L", "3000",
                                         "--random-density", "0.3"};
  const auto a = call(args), b = call(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("verify runs a single criterion") {
  const auto r = call({"verify", "--level", "fast", "--only", "3"});
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["passed"] == 1);
  CHECK(pintersect::cli::parse_level("fast") == pintersect::cli::Level::Fast);
  CHECK_THROWS(pintersect::cli::parse_level("medium"));
}
