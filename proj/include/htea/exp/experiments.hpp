#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "htea/analysis/events.hpp"
#include "htea/engine/ea.hpp"
#include "htea/exp/config.hpp"

namespace htea::exp {

struct RunOutcome {
  std::uint64_t seed = 0;
  RunSummary summary;
  std::vector<TracePoint> trace;
};

// ---- trajectory ----------------------------------------------------------

struct TrajectoryResult {
  std::uint32_t n = 0, L = 0, mu = 0;
  Decimal c;
  std::vector<RunOutcome> runs;
};
TrajectoryResult run_trajectory(const ExperimentConfig& cfg);
// trajectory.csv (one row per run and snapshot) and trajectory_envelope.csv.
void write_trajectory(const TrajectoryResult& r, const std::string& dir);

// ---- sweeps --------------------------------------------------------------

struct SweepPoint {
  std::uint32_t mu = 1;
  Decimal c;
  std::uint32_t L = 1;
};

struct SweepRow {
  std::size_t point = 0;
  std::uint32_t run = 0;
  RunOutcome outcome;
};

struct SweepSummaryRow {
  std::size_t point = 0;
  SweepPoint at;
  std::uint32_t runs = 0, censored_runs = 0, all_visited_runs = 0;
  double runtime_mean = 0, runtime_std = 0, runtime_min = 0, runtime_max = 0;
  double visited_mean = 0, visited_std = 0, visited_min = 0, visited_max = 0;
};

struct SweepResult {
  std::string axis;  // "mu" or "c"
  std::vector<SweepPoint> points;
  std::vector<SweepRow> rows;  // point-major, run-minor
};

// mu axis: mu_grid at (c, L). c axis: L_grid x c_grid at mu, L outer.
SweepResult run_sweep(const ExperimentConfig& cfg, const std::string& axis);
// Runtime is the first-optimum evaluation, or the evaluations used when censored.
std::vector<SweepSummaryRow> summarize(const SweepResult& r);
// sweep.csv and sweep_summary.csv.
void write_sweep(const SweepResult& r, const std::string& dir);

// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// ---- min-mu --------------------------------------------------------------

struct MinMuProbe {
  std::size_t c_index = 0;
  std::uint32_t mu = 0;
  std::uint32_t resample = 0;
  std::uint32_t successes = 0;
  bool success = false;
  std::vector<RunOutcome> runs;
};

struct MinMuRow {
  Decimal c;
  // Unset when no mu up to the cap succeeded.
  std::optional<std::uint32_t> min_mu;
  // bisection | confirmed | resolved_upward | unconfirmed | above_cap
  std::string resolution;
};

struct MinMuResult {
  std::uint32_t cap = 0;
  std::vector<MinMuRow> rows;
  std::vector<MinMuProbe> probes;
};

// Doubling from mu = 1 up to the cap, bisection between the last failure and
// the first success, then one re-sample at the result. If the re-sample
// fails, the smallest larger mu observed to succeed is reported instead.
MinMuResult run_min_mu(const ExperimentConfig& cfg);
// minmu.csv, minmu_probes.csv, minmu_runs.csv.
void write_min_mu(const MinMuResult& r, const std::string& dir);

// ---- drift ---------------------------------------------------------------

struct DriftRun {
  std::uint64_t seed = 0;
  std::uint64_t evaluations = 0;
  std::int64_t z_min = -1, z_max = -1;
  std::size_t windows = 0;
  double mean = 0, se = 0;
  std::vector<std::uint32_t> z;
  std::vector<bool> observed;
};

struct DriftResult {
  std::uint32_t mu = 0, n = 0;
  Decimal c;
  std::uint64_t K = 0;
  // Window starts i with i >= start_lo and i + K <= start_hi + K.
  std::int64_t start_lo = 0, start_hi = 0;
  std::vector<DriftRun> runs;
  std::size_t windows = 0;
  double pooled_mean = 0;
  // Across runs with at least one window.
  std::uint32_t runs_used = 0;
  double run_mean = 0, run_se = 0, ci_low = 0, ci_high = 0;
};

DriftResult run_drift(const ExperimentConfig& cfg);
// drift_runs.csv, drift_summary.csv, zseries.csv.
void write_drift(const DriftResult& r, const std::string& dir);

// Two-sided 95% Student t quantile.
double t_quantile_975(std::uint32_t df);

// ---- forest statistics ---------------------------------------------------

struct DepthRow {
  std::uint32_t depth = 0;
  double mean = 0, sd = 0, se = 0, bound = 0;
  bool within = false;
};

struct CouplingRow {
  std::uint32_t mu = 0;
  std::uint64_t T = 0;
  std::uint64_t seed = 0;
  std::int64_t i = 0;
  std::uint64_t t_i = 0;
  std::size_t family_nodes = 0, reference_nodes = 0;
  bool embedded = false;
  std::string failure;
};

struct GoodEventRow {
  std::uint32_t mu = 0;
  std::uint32_t run = 0;
  std::uint64_t seed = 0;
  std::int64_t i = 0;
  GoodEvents events;
};

struct LifetimeRow {
  std::uint32_t mu = 0;
  std::uint32_t run = 0;
  std::uint64_t seed = 0;
  Lifetime life;
  double bound = 0;
};

struct ForestStatsResult {
  std::uint32_t mu = 0;
  std::uint64_t T = 0, reps = 0;
  std::vector<DepthRow> depths;
  std::uint64_t roots_min = 0, roots_max = 0;
  std::uint64_t explicit_reps = 0;
  bool explicit_roots_ok = true;
  std::vector<CouplingRow> coupling;
  GoodEventParams params;
  std::vector<GoodEventRow> events;
  std::vector<LifetimeRow> lifetimes;
};

// Coupling horizon at population size mu: min(200, floor(ln(10^5/mu) / ln(1 + 1/mu))),
// which keeps the expected reference forest near 10^5 nodes.
std::uint64_t coupling_horizon(std::uint32_t mu);

struct ForestStatsParts {
  bool depths = true, coupling = true, events = true;
};
ForestStatsResult run_forest_stats(const ExperimentConfig& cfg, ForestStatsParts parts = {});
void write_forest_stats(const ForestStatsResult& r, const std::string& dir);

// ---- misc ----------------------------------------------------------------

// Rank window [ceil((1 - 2 eps)|A|), floor((1 - eps/2)|A|)] of the drift regime.
std::pair<std::int64_t, std::int64_t> regime_ranks(const ExperimentConfig& cfg, std::size_t a_size);

void write_instance(const ExperimentConfig& cfg, const std::string& path);

// Header line "# schema: <name>" then the column line.
std::string csv_header(const std::string& schema, const std::string& columns);

}  // namespace htea::exp
