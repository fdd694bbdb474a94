// Scenario runner: sievebands <scenario> --config <file.json> [options]
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sievebands/experiments.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kAssertionFailure = 1;
constexpr int kConfigError = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace sievebands;

  CLI::App app{"Sieve functions in arithmetic bands: experiment runner"};
  std::string scenario_name;
  std::string config_path;
  std::string out_dir = "out";
  std::string format_name = "csv";
  std::optional<unsigned> threads;
  std::optional<std::string> backend;
  std::optional<std::uint64_t> seed;

  app.add_option("scenario", scenario_name,
                 "ramanujan-check, band-theorem1, corollary1, corollary2, lemma1, lemma2, theorem2, lambda-r, "
                 "good-weights")
      ->required();
  app.add_option("--config", config_path, "JSON config file")->required();
  app.add_option("--out", out_dir, "output directory (SIEVEBANDS_OUT overrides)");
  app.add_option("--format", format_name, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--backend", backend, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--seed", seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  ScenarioOutput out;
  try {
    const Scenario scenario = parse_scenario(scenario_name);
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config " + config_path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("malformed JSON in " + config_path + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    if (threads) doc["threads"] = *threads;
    if (backend) doc["backend"] = *backend;
    if (seed) doc["seed"] = *seed;
    const auto cfg = parse_config(doc, scenario, std::filesystem::path(config_path).parent_path());
    out = run_scenario(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }

  if (const char* env = std::getenv("SIEVEBANDS_OUT"); env != nullptr && *env != '\0') out_dir = env;
  try {
    write_outputs(out, out_dir, parse_output_format(format_name));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }

  for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
  std::size_t failed = 0;
  for (const auto& c : out.checks) {
    if (c.pass) continue;
    ++failed;
    std::cerr << "FAIL " << c.quantity << " [" << c.detail << "] got " << c.got << " bound " << c.bound << "\n";
  }
  std::cout << out.name << ": " << out.checks.size() - failed << "/" << out.checks.size() << " checks passed, "
            << out.table.rows().size() << " rows -> " << out_dir << "\n";
  return failed == 0 ? kPass : kAssertionFailure;
}
