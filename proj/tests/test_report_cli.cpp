#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kserver/cli.hpp"
#include "kserver/error.hpp"
#include "kserver/report.hpp"

using namespace kserver;

namespace {

const std::string kData = KSERVER_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "kserver_lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("kserver_test_" + name)).string();
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = temp_path(name);
  std::ofstream(path) << text;
  return path;
}

std::shared_ptr<const ConfigurationSpace> space_of(Metric m, int k) {
  return std::make_shared<const ConfigurationSpace>(std::move(m), k);
}

}  // namespace

TEST_CASE("emit csv and json") {
  RatioTable t;
  t.rows.push_back({1, Rational(1), Rational(1), Rational(1), 0});
  t.rows.push_back({2, Rational(2), Rational(3071, 2048), Rational(3, 2), 7});
  CHECK(emit(t, "csv") == "T,det,rand_low,rand_high,runtime_ms\n1,1,1,1,0\n2,2,3071/2048,3/2,7\n");
  const std::string json = emit(t, "json");
  CHECK(json.find("\"3/2\"") != std::string::npos);
  CHECK(parse_table_json(json) == t);
  try {
    emit(t, "xml");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownFormat);
  }
}

TEST_CASE("sweep rows") {
  const RatioTable u = sweep_horizons(space_of(uniform_metric(3), 2), {0, 1}, 2);
  REQUIRE(u.rows.size() == 2);
  CHECK(u.rows[0].horizon == 1);
  CHECK(u.rows[0].det_value == 1);
  CHECK(u.rows[1].det_value == 2);
  CHECK(u.rows[1].rand_low <= Rational(3, 2));
  CHECK(Rational(3, 2) <= u.rows[1].rand_high);

  SweepOptions opts;
  opts.threads = 3;
  const RatioTable one = sweep_horizons(space_of(uniform_metric(4), 1), {0}, 3, opts);
  REQUIRE(one.rows.size() == 3);
  for (const auto& r : one.rows) {
    CHECK(r.det_value == 1);
    CHECK(r.rand_low == 1);
    CHECK(r.rand_high == 1);
  }

  opts.variable_cap = 10;
  try {
    sweep_horizons(space_of(uniform_metric(3), 2), {0, 1}, 2, opts);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InstanceTooLarge);
    CHECK(std::string(e.what()).find("T=2") != std::string::npos);
  }
}

TEST_CASE("cli opt-det") {
  Run r = cli({"opt-det", "--metric", kData + "/uniform3.json", "--k", "2", "--horizon", "2"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("value: 2\n") != std::string::npos);

  r = cli({"opt-det", "--metric", kData + "/uniform3.json", "--k", "1", "--horizon", "2"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("value: 1\n") != std::string::npos);

  const std::string broken = write_temp("broken.json", "{\"points\": [\"a\", ");
  r = cli({"opt-det", "--metric", broken, "--k", "1", "--horizon", "1"});
  CHECK(r.code == kExitBadMetric);
  CHECK_FALSE(r.err.empty());

  const std::string asym = write_temp("asym.json", R"({"points":["a","b"],"distances":[[0,1],[2,0]]})");
  CHECK(cli({"opt-det", "--metric", asym, "--k", "1", "--horizon", "1"}).code == kExitBadMetric);

  CHECK(cli({"opt-det", "--metric", kData + "/uniform3.json", "--k", "3", "--horizon", "1"}).code == kExitDegenerateK);
  CHECK(cli({"opt-det", "--metric", kData + "/uniform3.json", "--k", "4", "--horizon", "1"}).code == kExitDegenerateK);
  CHECK(cli({"opt-det", "--k", "1"}).code == kExitUsage);
  CHECK(cli({"opt-det", "--metric", kData + "/uniform3.json", "--k", "2", "--c0", "a,z", "--horizon", "1"}).code ==
        kExitUnknownPoint);
}

TEST_CASE("cli opt-rand writes a policy that re-verifies under simulate") {
  const std::string policy = temp_path("policy.json");
  Run r = cli({"opt-rand", "--metric", kData + "/uniform3.json", "--k", "2", "--horizon", "2", "--policy-out", policy});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("tau_low: 3071/2048\n") != std::string::npos);
  CHECK(r.out.find("tau_high: 6145/4096\n") != std::string::npos);
  REQUIRE(std::filesystem::exists(policy));

  for (const std::string seq : {"c,a", "c,b", "a,c", "c,c", "b"}) {
    r = cli({"simulate", "--metric", kData + "/uniform3.json", "--k", "2", "--algorithm", "policy:" + policy,
             "--sequence", seq});
    REQUIRE(r.code == kExitOk);
    const auto at = r.out.find("expected ratio: ");
    REQUIRE(at != std::string::npos);
    const std::string value = r.out.substr(at + 16, r.out.find('\n', at) - at - 16);
    CHECK(parse_rational(value) <= Rational(6145, 4096));
  }

  r = cli({"opt-rand", "--metric", kData + "/uniform3.json", "--k", "2", "--horizon", "2", "--var-cap", "10",
           "--policy-out", policy});
  CHECK(r.code == kExitTooLarge);

  r = cli({"opt-rand", "--metric", kData + "/uniform3.json", "--k", "1", "--horizon", "2", "--policy-out", policy});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("tau_low: 1\n") != std::string::npos);
  CHECK(r.out.find("tau_high: 1\n") != std::string::npos);
}

TEST_CASE("cli simulate") {
  Run r = cli({"simulate", "--metric", kData + "/uniform3.json", "--k", "2", "--algorithm", "greedy", "--sequence", "c"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("total: 1\n") != std::string::npos);
  CHECK(r.out.find("opt: 1\n") != std::string::npos);
  CHECK(r.out.find("ratio: 1\n") != std::string::npos);

  r = cli({"simulate", "--metric", kData + "/uniform3.json", "--k", "2", "--algorithm", "wfa", "--sequence", "a,b,a"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("total: 0\n") != std::string::npos);

  r = cli({"simulate", "--metric", kData + "/uniform3.json", "--k", "2", "--algorithm", "greedy", "--sequence", "c,z"});
  CHECK(r.code == kExitUnknownPoint);
  r = cli({"simulate", "--metric", kData + "/uniform3.json", "--k", "2", "--algorithm", "lru", "--sequence", "c"});
  CHECK(r.code == kExitUsage);
}

TEST_CASE("cli bounds") {
  Run r = cli({"bounds", "--metric", kData + "/uniform3.json", "--k", "2", "--c", "3", "--alpha", "0", "--epsilon", "1"});
  CHECK(r.code == kExitOk);
  for (const char* line : {"gamma: 1\n", "B: 2\n", "opt_threshold: 4\n", "phi: 12\n", "D: 48\n", "xi_2: 50\n"}) {
    CHECK(r.out.find(line) != std::string::npos);
  }

  r = cli({"bounds", "--metric", kData + "/half3.json", "--k", "2", "--c", "3", "--epsilon", "1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("gamma: 2\n") != std::string::npos);
  CHECK(r.out.find("B: 2\n") != std::string::npos);
  CHECK(r.out.find("D: 48\n") != std::string::npos);

  CHECK(cli({"bounds", "--metric", kData + "/uniform3.json", "--k", "2", "--epsilon", "0"}).code == kExitBadEpsilon);
  CHECK(cli({"bounds", "--metric", kData + "/uniform3.json", "--k", "2", "--epsilon", "-1/2"}).code == kExitBadEpsilon);
}

TEST_CASE("cli output is deterministic") {
  const std::vector<std::vector<std::string>> commands{
      {"opt-det", "--metric", kData + "/line3.json", "--k", "2", "--horizon", "3", "--format", "json"},
      {"sweep", "--metric", kData + "/uniform3.json", "--k", "2", "--horizon", "2", "--threads", "2"},
      {"sweep", "--metric", kData + "/line3.json", "--k", "2", "--horizon", "2", "--format", "json"},
      {"opt-rand", "--metric", kData + "/line3.json", "--k", "2", "--horizon", "2", "--policy-out",
       temp_path("det_policy.json")},
  };
  for (const auto& c : commands) {
    const Run a = cli(c);
    const Run b = cli(c);
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
  }
  const Run s = cli(commands[1]);
  CHECK(s.out == "T,det,rand_low,rand_high,runtime_ms\n1,1,1,1,0\n2,2,3071/2048,6145/4096,0\n");
}
