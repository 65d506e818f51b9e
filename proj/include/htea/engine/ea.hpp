#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "htea/core/rng.hpp"
#include "htea/hottopic/fitness.hpp"

namespace htea {

struct EAConfig {
  std::uint32_t mu = 1;
  double c = 1.0;
  FitnessMode mode = FitnessMode::hottopic();
  // Total evaluations allowed, initialization included. Must be >= mu.
  std::uint64_t max_evaluations = 0;
  bool stop_at_optimum = true;
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  // Keep the full birth/death log in the returned record.
  bool record_events = false;
  // Snapshot the best individual every trace_stride rounds (0: off).
  std::uint64_t trace_stride = 0;

  // Early termination on the best individual's level:
  //   at_top: once it reaches L (the visited-level count is then final);
  //   decided: additionally once a level is skipped, so "all levels
  //   visited" is settled either way.
  enum class LevelStop { none, at_top, decided };
  LevelStop level_stop = LevelStop::none;

  // Optional non-uniform start for auxiliary runs: every initial genome
  // gets exactly round(d*|A|) zeros on the hot topic A_{ell+1} and
  // round(d*|R|) zeros on its complement, placed uniformly.
  std::optional<double> init_zero_density;

  void validate() const;
};

enum class EventKind : std::uint8_t { birth, death };

struct Event {
  std::uint64_t round = 0;
  std::uint64_t id = 0;
  // -1 for initial individuals.
  std::int64_t parent = -1;
  // Ones on the designated hot topic; -1 when there is none.
  std::int32_t rank = -1;
  std::uint32_t onemax = 0;
  std::uint32_t level = 0;
  FitnessValue fitness;
  std::uint32_t flips = 0;
  EventKind kind = EventKind::birth;
  // False for an offspring removed in the round it was created.
  bool admitted = true;
};

struct TracePoint {
  std::uint64_t round = 0;
  std::uint64_t evaluations = 0;
  std::uint32_t best_onemax = 0;
  std::uint32_t best_level = 0;
  FitnessValue best_fitness;
};

enum class StopReason { optimum, budget, level_decided };

struct RunSummary {
  std::uint64_t evaluations = 0;
  std::uint64_t rounds = 0;
  // Evaluation index (1-based) of the first all-ones genome, and its round.
  std::optional<std::uint64_t> optimum_evaluation;
  std::optional<std::uint64_t> optimum_round;
  bool censored = false;
  StopReason stop = StopReason::budget;
  // levels_visited[l] for l in [0, L]: level l attained by the best individual.
  std::vector<bool> levels_visited;
  std::uint32_t visited_levels = 0;  // count over [1, L]
  bool all_levels_visited = false;
  std::uint32_t final_best_level = 0;
  std::uint32_t final_best_onemax = 0;
  FitnessValue final_best_fitness;
  // Survivors at the end, with their ranks on the designated hot topic.
  std::vector<std::uint64_t> final_ids;
  std::vector<std::int32_t> final_ranks;
  // Largest initial rank (aux runs), -1 when there is no hot topic.
  std::int32_t initial_max_rank = -1;
};

struct RunRecord {
  RunSummary summary;
  std::vector<Event> events;
  std::vector<TracePoint> trace;
  bool has_flip_counts = true;
};

struct RunHooks {
  std::function<void(const Event&)> on_birth;
  std::function<void(const Event&)> on_death;
  bool any() const { return static_cast<bool>(on_birth) || static_cast<bool>(on_death); }
};

// Index of the member to remove: uniform among the minimum-fitness members.
std::size_t select_survivor(std::span<const FitnessValue> pool, RngStream& rng);
std::size_t select_survivor(std::span<const CachedIndividual> pool, RngStream& rng);

RunRecord run_ea(const Evaluator& eval, const EAConfig& cfg, const RunHooks& hooks = {});

}  // namespace htea
