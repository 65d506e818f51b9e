#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "htea/core/decimal.hpp"
#include "htea/hottopic/instance.hpp"

namespace htea::exp {

inline constexpr const char* kToolVersion = "0.1.0";

// Flat experiment configuration. Every field is settable as key=value under
// the same name; see docs/config.md.
struct ExperimentConfig {
  std::string preset = "desk";

  // Instance.
  std::uint32_t n = 3000;
  std::uint32_t L = 50;
  Decimal alpha = Decimal::parse("0.25");
  Decimal beta = Decimal::parse("0.05");
  Decimal epsilon = Decimal::parse("0.05");
  // Defaults to seed.
  std::optional<std::uint64_t> instance_seed;
  std::uint64_t entry_cap = kDefaultSetEntryCap;

  // Runs.
  std::uint64_t seed = 1;
  std::uint32_t runs = 10;
  std::uint32_t threads = 1;
  // Evaluations per run, initialization included; 0 picks budget_factor * n * L.
  std::uint64_t budget = 0;
  std::uint64_t budget_factor = 200;
  std::uint32_t mu = 50;
  Decimal c = Decimal::parse("1.0");
  std::string mode = "hottopic";

  // Sweeps.
  std::vector<std::uint32_t> mu_grid;
  std::vector<Decimal> c_grid;
  std::vector<std::uint32_t> L_grid;

  // Trajectories: snapshot every trace_stride rounds.
  std::uint64_t trace_stride = 1000;

  // Min-mu search.
  std::vector<Decimal> minmu_c_grid;
  std::uint32_t mu_cap = 512;
  std::uint32_t success_runs = 5;

  // Drift and good events (aux_linear runs on A_{ell+1}).
  std::uint32_t ell = 0;
  // Initial zero density on A_{ell+1} and R; unset picks 2 * epsilon.
  std::optional<Decimal> init_density;
  // 0 picks K from the good-event defaults.
  std::uint64_t drift_K = 0;
  Decimal phi = Decimal::parse("0.5");
  std::optional<Decimal> k;
  std::optional<Decimal> eta;

  // Reference forest.
  std::uint64_t forest_T = 500;
  std::uint64_t forest_reps = 10000;
  std::uint32_t forest_depth = 5;
  std::vector<std::uint32_t> events_mu_grid;

  std::string out = "out";

  HotTopicParams instance_params() const;
  HotTopicParams instance_params(std::uint32_t levels) const;
  std::uint64_t effective_budget(std::uint32_t levels) const;
  double init_density_value() const;

  // Throws std::invalid_argument naming the offending key.
  void validate() const;

  // key -> canonical text, in a fixed order.
  std::vector<std::pair<std::string, std::string>> entries() const;
};

// Applies one key=value assignment; unknown keys and malformed values throw.
void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Preset defaults: "desk" (n=3000, L=50) or "paper" (n=10000, L=100).
ExperimentConfig preset_config(const std::string& preset);

// Per-command defaults applied after the preset and before user settings.
void apply_command_defaults(ExperimentConfig& cfg, const std::string& command);

// Reads "key = value" lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

// "5,10,20" or "lo:hi:step" (inclusive, exact decimal steps).
std::vector<Decimal> parse_decimal_grid(const std::string& text);
std::vector<std::uint32_t> parse_uint_grid(const std::string& text);

}  // namespace htea::exp
