#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <string>

#include "chaoswpt/config.hpp"

using namespace chaoswpt;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("defaults", "[config]") {
  const AppConfig c = build_config("", "<none>", std::nullopt, {});
  CHECK(c.run.circuit.k2 == 0.0034);
  CHECK(c.run.circuit.k4 == 0.3829);
  CHECK(c.run.circuit.r_ant == 50.0);
  CHECK(c.run.circuit.p_t == Approx(1.0));
  CHECK(c.run.alpha == 4.0);
  CHECK(c.run.seed == 42);
  CHECK(c.run.map_degree == 2);
  CHECK(c.papr_mode == PaprMode::per_symbol);
  CHECK(c.betas == default_beta_grid());
  CHECK(!c.r_c.has_value());
}

TEST_CASE("file values and overrides", "[config]") {
  const std::string file = R"({"beta": 8, "r": 25.5, "psi_mode": "bypass", "betas": [1, 3, 9]})";
  const AppConfig c = build_config(file, "f.json", std::nullopt, {"r=30", "modes=[\"full\"]", "r_c=12"});
  CHECK(c.run.beta == 8);
  CHECK(c.run.r == 30.0);
  CHECK(c.run.psi_mode == PsiMode::bypass);
  CHECK(c.betas == std::vector<std::size_t>{1, 3, 9});
  CHECK(c.modes == std::vector<PsiMode>{PsiMode::full});
  REQUIRE(c.r_c.has_value());
  CHECK(*c.r_c == 12.0);

  // bare strings need no JSON quoting on the command line
  CHECK(build_config("", "-", std::nullopt, {"psi_mode=full"}).run.psi_mode == PsiMode::full);
}

TEST_CASE("transmit power units", "[config]") {
  CHECK(build_config("", "-", std::nullopt, {"p_t_dbm=20"}).run.circuit.p_t == Approx(0.1));
  CHECK(build_config("", "-", std::nullopt, {"p_t_w=2"}).run.circuit.p_t == 2.0);
  CHECK(build_config(R"({"p_t_dbm": 20})", "-", std::nullopt, {"p_t_w=3"}).run.circuit.p_t == 3.0);
  CHECK_THROWS_AS(build_config(R"({"p_t_dbm": 20, "p_t_w": 1})", "-", std::nullopt, {}), ConfigError);
}

TEST_CASE("seed precedence", "[config]") {
  const std::string file = R"({"seed": 5})";
  CHECK(build_config(file, "-", std::nullopt, {}).run.seed == 5);
  CHECK(build_config(file, "-", std::string("9"), {}).run.seed == 9);
  CHECK(build_config(file, "-", std::string("9"), {"seed=11"}).run.seed == 11);
  CHECK_THROWS_AS(build_config(file, "-", std::string("9x"), {}), ConfigError);
}

TEST_CASE("validation errors name the field", "[config]") {
  auto err = [](const std::vector<std::string>& ov) -> std::string {
    try {
      build_config("", "-", std::nullopt, ov);
    } catch (const ConfigError& e) {
      return e.field() + "|" + e.what();
    }
    return "";
  };
  CHECK_THAT(err({"k2=-1"}), ContainsSubstring("k2"));
  CHECK_THAT(err({"r=0"}), ContainsSubstring("r|"));
  CHECK_THAT(err({"beta=0"}), ContainsSubstring("beta"));
  CHECK_THAT(err({"n_frames=-5"}), ContainsSubstring("n_frames"));
  CHECK_THAT(err({"psi_mode=sideways"}), ContainsSubstring("psi_mode"));
  CHECK_THAT(err({"betas=[]"}), ContainsSubstring("betas"));
  CHECK_THAT(err({"colour=red"}), ContainsSubstring("unknown configuration key"));
  CHECK_THAT(err({"noequals"}), ContainsSubstring("key=value"));
  CHECK_THAT(err({"psi_mode=window", "psi=9", "beta=2"}), ContainsSubstring("psi"));
}

TEST_CASE("parse errors report the line", "[config]") {
  const std::string bad = "{\n  \"beta\": 4,\n  \"r\": ,\n}";
  try {
    build_config(bad, "cfg.json", std::nullopt, {});
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK_THAT(std::string(e.what()), ContainsSubstring("cfg.json:3"));
  }
  CHECK_THROWS_AS(build_config("[1, 2]", "cfg.json", std::nullopt, {}), ConfigError);
}

TEST_CASE("load_config reads files", "[config]") {
  const std::string path = "test_config_tmp.json";
  {
    std::ofstream f(path);
    f << R"({"n_frames": 1234, "distances": [5, 6]})";
  }
  const AppConfig c = load_config(path, {});
  CHECK(c.run.n_frames == 1234);
  CHECK(c.distances == std::vector<double>{5, 6});
  CHECK_THROWS_AS(load_config(std::string("does/not/exist.json"), {}), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("to_json round trips through build_config", "[config]") {
  const AppConfig a = build_config("", "-", std::nullopt, {"beta=7", "r=12.5", "r_nc=3", "papr_mode=stream"});
  const AppConfig b = build_config(to_json(a).dump(), "-", std::nullopt, {});
  CHECK(to_json(a) == to_json(b));
  CHECK(b.papr_mode == PaprMode::stream);
}
