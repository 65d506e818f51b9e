#include "htea/engine/ea.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "htea/core/mutation.hpp"

namespace htea {

void EAConfig::validate() const {
  if (mu < 1) throw std::invalid_argument("EAConfig: mu must be at least 1");
  if (!(c > 0.0)) throw std::invalid_argument("EAConfig: c must be positive");
  if (max_evaluations < mu)
    throw std::invalid_argument("EAConfig: budget must be at least mu (initialization uses mu evaluations)");
  if (level_stop != LevelStop::none && mode.kind != FitnessMode::Kind::hottopic &&
      mode.kind != FitnessMode::Kind::capped_level)
    throw std::invalid_argument("EAConfig: level-based stopping needs the hottopic or capped_level mode");
  if (init_zero_density) {
    if (mode.kind != FitnessMode::Kind::aux_linear)
      throw std::invalid_argument("EAConfig: init_zero_density is only defined for aux_linear runs");
    if (!(*init_zero_density >= 0.0 && *init_zero_density <= 1.0))
      throw std::invalid_argument("EAConfig: init_zero_density must lie in [0, 1]");
  }
}

std::size_t select_survivor(std::span<const FitnessValue> pool, RngStream& rng) {
  if (pool.empty()) throw std::invalid_argument("select_survivor: empty pool");
  FitnessValue worst = pool[0];
  std::size_t ties = 1;
  for (std::size_t k = 1; k < pool.size(); ++k) {
    if (pool[k] < worst) {
      worst = pool[k];
      ties = 1;
    } else if (pool[k] == worst) {
      ++ties;
    }
  }
  std::size_t pick = ties == 1 ? 0 : static_cast<std::size_t>(rng.below(ties));
  for (std::size_t k = 0; k < pool.size(); ++k)
    if (pool[k] == worst && pick-- == 0) return k;
  return pool.size() - 1;
}

std::size_t select_survivor(std::span<const CachedIndividual> pool, RngStream& rng) {
  if (pool.empty()) throw std::invalid_argument("select_survivor: empty pool");
  FitnessValue worst = pool[0].fitness;
  std::size_t ties = 1;
  for (std::size_t k = 1; k < pool.size(); ++k) {
    const FitnessValue& f = pool[k].fitness;
    if (f < worst) {
      worst = f;
      ties = 1;
    } else if (f == worst) {
      ++ties;
    }
  }
  std::size_t pick = ties == 1 ? 0 : static_cast<std::size_t>(rng.below(ties));
  for (std::size_t k = 0; k < pool.size(); ++k)
    if (pool[k].fitness == worst && pick-- == 0) return k;
  return pool.size() - 1;
}

namespace {

BitString density_start(const HotTopicInstance& inst, std::uint32_t ell, double d, RngStream& rng,
                        const IndexSet& rest) {
  BitString x = BitString::ones(inst.n());
  std::vector<Index> pick;
  auto zero_out = [&](const IndexSet& s) {
    const auto k = static_cast<Index>(std::llround(d * static_cast<double>(s.size())));
    sample_subset(static_cast<Index>(s.size()), k, rng, pick);
    for (Index p : pick) x.set(s[p], false);
  };
  zero_out(inst.A(ell + 1));
  zero_out(rest);
  return x;
}

}  // namespace

RunRecord run_ea(const Evaluator& eval, const EAConfig& cfg, const RunHooks& hooks) {
  cfg.validate();
  if (eval.mode().kind != cfg.mode.kind || eval.mode().ell != cfg.mode.ell)
    throw std::invalid_argument("run_ea: evaluator mode " + eval.mode().name() + " does not match config mode " +
                                cfg.mode.name());
  const HotTopicInstance* inst = eval.instance();
  const std::uint32_t n = eval.n();
  const std::uint32_t L = eval.L();
  const std::uint32_t mu = cfg.mu;
  const FitnessMode::Kind kind = cfg.mode.kind;

  RunRecord rec;
  RunSummary& sum = rec.summary;
  sum.levels_visited.assign(L + 1, false);

  RngStream rng(cfg.master_seed, cfg.stream_id);
  Mutator mutator(n, cfg.c);
  std::vector<Index> flips;
  flips.reserve(64);

  const bool logging = cfg.record_events || hooks.any();
  auto emit = [&](const Event& e) {
    if (cfg.record_events) rec.events.push_back(e);
    if (e.kind == EventKind::birth) {
      if (hooks.on_birth) hooks.on_birth(e);
    } else if (hooks.on_death) {
      hooks.on_death(e);
    }
  };

  auto mode_level = [kind](const CachedIndividual& x) {
    return kind == FitnessMode::Kind::capped_level ? x.aux_level : x.level;
  };

  // Initialization.
  std::vector<CachedIndividual> pool;
  pool.reserve(mu + 1);
  std::vector<std::uint64_t> ids(mu + 1, 0);
  IndexSet rest;
  if (cfg.init_zero_density) rest = inst->complement_of_A(cfg.mode.ell + 1);
  for (std::uint32_t k = 0; k < mu; ++k) {
    BitString g = cfg.init_zero_density ? density_start(*inst, cfg.mode.ell, *cfg.init_zero_density, rng, rest)
                                        : random_bitstring(n, rng);
    pool.push_back(eval.make_cached(std::move(g)));
    ids[k] = k;
    ++sum.evaluations;
    if (!sum.optimum_evaluation && pool.back().onemax == n) {
      sum.optimum_evaluation = sum.evaluations;
      sum.optimum_round = 0;
    }
  }
  pool.push_back(pool[0]);
  std::uint64_t next_id = mu;

  std::size_t best = 0;
  for (std::size_t k = 1; k < mu; ++k)
    if (pool[best].fitness < pool[k].fitness) best = k;

  auto rank_of = [&](const CachedIndividual& x) -> std::int32_t {
    switch (kind) {
      case FitnessMode::Kind::aux_linear: return static_cast<std::int32_t>(x.onesA[cfg.mode.ell]);
      case FitnessMode::Kind::hottopic:
      case FitnessMode::Kind::capped_level: {
        const std::uint32_t top = mode_level(pool[best]);
        return top < L ? static_cast<std::int32_t>(x.onesA[top]) : -1;
      }
      case FitnessMode::Kind::onemax: return -1;
    }
    return -1;
  };
  auto make_event = [&](const CachedIndividual& x, std::uint64_t round, std::uint64_t id, std::int64_t parent,
                        std::uint32_t nflips, EventKind ev, bool admitted) {
    Event e;
    e.round = round;
    e.id = id;
    e.parent = parent;
    e.rank = rank_of(x);
    e.onemax = x.onemax;
    e.level = x.level;
    e.fitness = x.fitness;
    e.flips = nflips;
    e.kind = ev;
    e.admitted = admitted;
    return e;
  };

  if (kind == FitnessMode::Kind::aux_linear) {
    std::int32_t m = -1;
    for (std::uint32_t k = 0; k < mu; ++k) m = std::max(m, static_cast<std::int32_t>(pool[k].onesA[cfg.mode.ell]));
    sum.initial_max_rank = m;
  }
  if (logging)
    for (std::uint32_t k = 0; k < mu; ++k) emit(make_event(pool[k], 0, ids[k], -1, 0, EventKind::birth, true));

  bool skipped = false;
  std::uint32_t best_level = mode_level(pool[best]);
  auto visit = [&](std::uint32_t level) {
    if (sum.levels_visited[level]) return;
    sum.levels_visited[level] = true;
    for (std::uint32_t l = 1; l < level; ++l)
      if (!sum.levels_visited[l]) skipped = true;
  };
  visit(best_level);

  auto snapshot = [&](std::uint64_t round) {
    const CachedIndividual& b = pool[best];
    rec.trace.push_back(TracePoint{round, sum.evaluations, b.onemax, mode_level(b), b.fitness});
  };
  if (cfg.trace_stride > 0) snapshot(0);

  auto level_done = [&] {
    switch (cfg.level_stop) {
      case EAConfig::LevelStop::none: return false;
      case EAConfig::LevelStop::at_top: return best_level == L;
      case EAConfig::LevelStop::decided: return best_level == L || skipped;
    }
    return false;
  };

  std::uint64_t round = 0;
  sum.stop = StopReason::budget;
  if (sum.optimum_evaluation && cfg.stop_at_optimum) sum.stop = StopReason::optimum;
  else if (level_done()) sum.stop = StopReason::level_decided;
  else {
    while (sum.evaluations < cfg.max_evaluations) {
      ++round;
      const auto parent = static_cast<std::size_t>(rng.below(mu));
      CachedIndividual& child = pool[mu];
      child = pool[parent];
      mutator.sample_flips(rng, flips);
      eval.apply_flips(child, flips);
      ++sum.evaluations;
      const std::uint64_t child_id = next_id++;
      const std::uint64_t parent_id = ids[parent];
      ids[mu] = child_id;
      const bool is_opt = child.onemax == n;
      if (is_opt && !sum.optimum_evaluation) {
        sum.optimum_evaluation = sum.evaluations;
        sum.optimum_round = round;
      }

      const std::size_t removed = select_survivor(std::span<const CachedIndividual>(pool), rng);
      const bool admitted = removed != mu;
      std::size_t child_at = mu;
      if (admitted) {
        std::swap(pool[removed], pool[mu]);
        std::swap(ids[removed], ids[mu]);
        child_at = removed;
        if (removed == best || pool[best].fitness < pool[removed].fitness) best = removed;
      }
      if (logging) {
        emit(make_event(pool[child_at], round, child_id, static_cast<std::int64_t>(parent_id),
                        static_cast<std::uint32_t>(flips.size()), EventKind::birth, admitted));
        emit(make_event(pool[mu], round, ids[mu], -1, 0, EventKind::death, admitted));
      }
      best_level = mode_level(pool[best]);
      visit(best_level);
      if (cfg.trace_stride > 0 && round % cfg.trace_stride == 0) snapshot(round);

      if (is_opt && admitted && cfg.stop_at_optimum) {
        sum.stop = StopReason::optimum;
        break;
      }
      if (level_done()) {
        sum.stop = StopReason::level_decided;
        break;
      }
    }
  }
  sum.rounds = round;
  if (cfg.trace_stride > 0 && (rec.trace.empty() || rec.trace.back().round != round)) snapshot(round);

  sum.censored = sum.stop == StopReason::budget && !sum.optimum_evaluation;
  for (std::uint32_t l = 1; l <= L; ++l) sum.visited_levels += sum.levels_visited[l] ? 1 : 0;
  sum.all_levels_visited = L > 0 && sum.visited_levels == L;
  sum.final_best_level = mode_level(pool[best]);
  sum.final_best_onemax = pool[best].onemax;
  sum.final_best_fitness = pool[best].fitness;
  for (std::uint32_t k = 0; k < mu; ++k) {
    sum.final_ids.push_back(ids[k]);
    sum.final_ranks.push_back(rank_of(pool[k]));
  }
  return rec;
}

}  // namespace htea
