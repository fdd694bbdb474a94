#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sievebands/csv.hpp"
#include "sievebands/numeric.hpp"
#include "sievebands/transform.hpp"
#include "sievebands/weights.hpp"

namespace sievebands {

/// Bad configuration: unknown scenario, malformed JSON, inconsistent sizes.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scenario {
  ramanujan_check,
  band_theorem1,
  corollary1,
  corollary2,
  lemma1,
  lemma2,
  theorem2,
  lambda_r,
  good_weights,
};

std::string_view to_string(Scenario scenario);
Scenario parse_scenario(std::string_view text);  // throws ConfigError

/// Either a fixed size or floor(N^theta).
struct SizeRule {
  std::optional<std::int64_t> fixed;
  double theta = 0.0;

  std::int64_t resolve(std::int64_t big_n) const;
  static SizeRule from_json(const nlohmann::json& value, std::string_view key);
};

struct ScenarioConfig {
  Scenario scenario = Scenario::ramanujan_check;
  std::vector<std::int64_t> n_list;
  SizeRule q_rule;                      ///< range Q of the sieve function
  SizeRule h_rule;                      ///< band / window half-width H
  std::vector<std::int64_t> h_list;     ///< explicit H values (overrides h_rule)
  std::optional<SizeRule> q_max_rule;   ///< largest modulus q (band scenarios)
  std::vector<std::int64_t> l_list;     ///< moduli l (lemma1)
  std::int64_t l_max = 0;               ///< good-weights
  std::vector<std::int64_t> r_list;     ///< lambda-r
  std::vector<WeightKind> weights;      ///< built-in weights; empty means plain mode where allowed
  std::optional<Weight> custom_weight;  ///< table loaded from a weight JSON
  std::string builder = "random";       ///< unit, moebius, moebius_log, lambda_r, random, random_real, custom
  std::optional<AnyTransform> custom_transform;
  std::int64_t count = 1;               ///< number of random transforms
  std::uint64_t seed = 1;
  Backend backend = Backend::exact;
  unsigned threads = 1;
  std::optional<double> cap;            ///< scenario-specific pass threshold (see README)
};

/// Parses a config document. `scenario` (from the command line) must agree
/// with the document's "scenario" key when both are present. Relative file
/// references resolve against `base_dir`.
ScenarioConfig parse_config(const nlohmann::json& doc, std::optional<Scenario> scenario,
                            const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path, std::optional<Scenario> scenario);

struct CheckResult {
  std::string quantity;
  std::string detail;
  std::string got;
  std::string bound;
  bool pass = true;
};

struct ScenarioOutput {
  std::string name;
  CsvTable table{{}};
  CsvTable fits{{"quantity", "points", "excluded", "fitted_exponent", "fitted_constant", "residual"}};
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;  ///< non-fatal notes, e.g. windows near N

  bool passed() const;
  CsvTable checks_table() const;
  nlohmann::json to_json() const;
};

ScenarioOutput run_scenario(const ScenarioConfig& cfg);

enum class OutputFormat { csv, json, both };
OutputFormat parse_output_format(std::string_view text);

/// Writes <name>.csv, <name>_fits.csv and <name>_checks.csv and/or <name>.json.
void write_outputs(const ScenarioOutput& out, const std::filesystem::path& dir, OutputFormat format);

}  // namespace sievebands
