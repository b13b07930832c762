#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "chaoswpt/cli.hpp"

using namespace chaoswpt;
using namespace chaoswpt::cli;
using Catch::Matchers::ContainsSubstring;

namespace {

AppConfig cfg(const std::vector<std::string>& ov) { return build_config("", "-", std::nullopt, ov); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("reals survive a CSV round trip", "[cli]") {
  for (double v : {0.1, 1.0 / 3.0, 4.593400123456789e-3, 1e-300, 6.02214076e23}) {
    CHECK(std::stod(format_real(v)) == v);
  }
  CHECK(format_real(std::nan("")) == "nan");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("sweep CSV output", "[cli]") {
  std::ostringstream out, err;
  const AppConfig c = cfg({"betas=[1,2]", "distances=[20]", "n_frames=500", "modes=[\"full\"]"});
  REQUIRE(cmd_sweep(c, Format::csv, out, err) == kOk);
  const auto lines = split(out.str(), '\n');
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "beta,r,mode,z_empirical,z_stderr,z_analytic,rel_dev,papr_analytic");
  const auto first = split(lines[1], ',');
  REQUIRE(first.size() == 8);
  CHECK(first[0] == "1");
  CHECK(first[2] == "full");
  CHECK(std::stod(first[5]) == z_with_correlator(c.run.closed_form_inputs()));
  CHECK(first[7] == "4");
}

TEST_CASE("JSON output is byte-stable", "[cli]") {
  const AppConfig c = cfg({"betas=[1,5]", "distances=[30]", "n_frames=300"});
  std::ostringstream a, b, err;
  REQUIRE(cmd_sweep(c, Format::json, a, err) == kOk);
  REQUIRE(cmd_sweep(c, Format::json, b, err) == kOk);
  CHECK(a.str() == b.str());
  const auto doc = nlohmann::json::parse(a.str());
  CHECK(doc.contains("config"));
  CHECK(doc["legend"].contains("z_stderr"));
  CHECK(doc["rows"].size() == 4);
  CHECK(doc["config"]["n_frames"] == 300);
}

TEST_CASE("failing sweep row leaves a marker and exit 1", "[cli]") {
  const AppConfig c = cfg({"betas=[4,1]", "distances=[20]", "modes=[\"window\"]", "psi=3", "n_frames=200"});
  std::ostringstream out, err;
  CHECK(cmd_sweep(c, Format::csv, out, err) == kUsageError);
  const auto lines = split(out.str(), '\n');
  REQUIRE(lines.size() == 3);
  CHECK(lines[2].rfind("FAILED,", 0) == 0);
  CHECK_THAT(err.str(), ContainsSubstring("beta=1"));
}

TEST_CASE("crossover subcommand", "[cli]") {
  std::ostringstream out, err;
  CHECK(cmd_crossover(cfg({}), Format::csv, out, err) == kUsageError);
  out.str("");
  CHECK(cmd_crossover(cfg({"r_c=30", "r_nc=20"}), Format::csv, out, err) == kOk);
  const auto row = split(split(out.str(), '\n')[1], ',');
  CHECK(std::stod(row[3]) == Catch::Approx(51.903).epsilon(1e-4));
  CHECK(row[4] == "52");
}

TEST_CASE("papr subcommand honours the bound", "[cli]") {
  std::ostringstream out, err;
  CHECK(cmd_papr(cfg({"beta=3", "n_frames=3000"}), Format::csv, out, err) == kOk);
  CHECK(err.str().empty());
  std::ostringstream out2;
  CHECK(cmd_papr(cfg({"beta=3", "n_frames=3000", "papr_mode=stream"}), Format::csv, out2, err) == kOk);
  CHECK_THAT(out2.str(), ContainsSubstring("stream"));
}

TEST_CASE("run subcommand", "[cli]") {
  std::ostringstream out, err;
  CHECK(cmd_run(cfg({"n_frames=50", "beta=2"}), Format::csv, out, err) == kOk);
  CHECK_THAT(err.str(), ContainsSubstring("warning"));
  std::ostringstream out2;
  CHECK(cmd_run(cfg({"n_frames=500", "psi_mode=window", "psi=2", "beta=3"}), Format::json, out2, err) == kOk);
  const auto doc = nlohmann::json::parse(out2.str());
  CHECK(doc["rows"][0]["z_analytic"].is_null());
}

TEST_CASE("verify-dist exit code", "[cli]") {
  std::ostringstream out, err;
  CHECK(cmd_verify_dist(cfg({"verify_samples=2000", "clt_betas=[4]"}), Format::csv, out, err) == kToleranceViolation);
  // with few samples the KS distance is too coarse for the 0.005 bar, which must surface as exit 2
  CHECK_THAT(err.str(), ContainsSubstring("ks"));
  CHECK(dispatch("nope", cfg({}), Format::csv, out, err) == kUsageError);
}

TEST_CASE("crossover edge cases", "[cli]") {
  auto run = [](const std::vector<std::string>& ov) {
    std::ostringstream out, err;
    REQUIRE(cmd_crossover(cfg(ov), Format::csv, out, err) == kOk);
    return split(split(out.str(), '\n')[1], ',');
  };
  const auto equal = run({"r_c=25", "r_nc=25"});
  CHECK(std::stod(equal[3]) == Catch::Approx(0.125));
  CHECK(equal[4] == "1");
  const auto closer = run({"r_c=20", "r_nc=30"});
  CHECK(std::stod(closer[3]) < 1.0);
  CHECK(closer[4] == "1");
}

TEST_CASE("config defaults and a trivial override", "[cli]") {
  const AppConfig c = cfg({"beta=52"});
  CHECK(c.run.beta == 52);
  CHECK(c.run.circuit.k2 == 0.0034);
  CHECK(c.run.circuit.p_t == Catch::Approx(1.0));
}

TEST_CASE("single-point sweep tracks the closed form", "[cli][statistical]") {
  std::ostringstream out, err;
  REQUIRE(cmd_sweep(cfg({"betas=[10]", "distances=[20]", "modes=[\"bypass\"]", "n_frames=100000"}), Format::csv, out,
                    err) == kOk);
  const auto lines = split(out.str(), '\n');
  REQUIRE(lines.size() == 2);
  CHECK(std::abs(std::stod(split(lines[1], ',')[6])) < 0.05);
}

TEST_CASE("sweep ordering across distances", "[cli]") {
  std::ostringstream out, err;
  const AppConfig c = cfg({"betas=[1,10,50]", "distances=[20,30]", "n_frames=2000"});
  REQUIRE(cmd_sweep(c, Format::json, out, err) == kOk);
  const auto doc = nlohmann::json::parse(out.str());
  REQUIRE(doc["rows"].size() == 12);
  for (const auto& near : doc["rows"]) {
    if (near["r"] != 20.0) continue;
    for (const auto& far : doc["rows"]) {
      if (far["r"] == 30.0 && far["beta"] == near["beta"] && far["mode"] == near["mode"]) {
        CHECK(near["z_empirical"].get<double>() > far["z_empirical"].get<double>());
      }
    }
  }
}
