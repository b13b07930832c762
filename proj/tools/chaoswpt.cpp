#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "chaoswpt/cli.hpp"
#include "chaoswpt/config.hpp"

int main(int argc, char** argv) {
  namespace cli = chaoswpt::cli;

  CLI::App app{"DCSK wireless power transfer simulator"};
  app.set_help_flag("-h,--help", "Show help");

  std::string subcommand;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  std::string format = "csv";

  app.add_option("subcommand", subcommand, "sweep | run | papr | crossover | verify-dist")
      ->required()
      ->check(CLI::IsMember({"sweep", "run", "papr", "crossover", "verify-dist"}));
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--set", overrides, "key=value override (repeatable)")->take_all();
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kUsageError;
  }

  chaoswpt::AppConfig cfg;
  cli::Format fmt{};
  try {
    std::optional<std::string> path;
    if (!config_path.empty()) path = config_path;
    cfg = chaoswpt::load_config(path, overrides);
    fmt = cli::parse_format(format);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cli::kUsageError;
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) {
      std::cerr << "cannot open output file '" << out_path << "'\n";
      return cli::kUsageError;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file;

  try {
    return cli::dispatch(subcommand, cfg, fmt, out, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsageError;
  }
}
