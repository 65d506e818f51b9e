#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "htea/engine/ea.hpp"

using namespace htea;

namespace {

HotTopicInstance make_inst(std::uint32_t n, std::uint32_t L, std::uint64_t seed) {
  return HotTopicInstance::generate(HotTopicParams::make(n, "0.25", "0.05", "0.05", L, seed));
}

EAConfig config(std::uint32_t mu, double c, FitnessMode mode, std::uint64_t budget, std::uint64_t seed) {
  EAConfig cfg;
  cfg.mu = mu;
  cfg.c = c;
  cfg.mode = mode;
  cfg.max_evaluations = budget;
  cfg.master_seed = seed;
  cfg.record_events = true;
  return cfg;
}

bool same_event(const Event& a, const Event& b) {
  return a.round == b.round && a.id == b.id && a.parent == b.parent && a.rank == b.rank && a.onemax == b.onemax &&
         a.level == b.level && a.fitness == b.fitness && a.flips == b.flips && a.kind == b.kind &&
         a.admitted == b.admitted;
}

// Replays the event log into the live population; calls check(pop) after
// initialization and after each round.
template <class F>
void replay(const RunRecord& rec, std::uint32_t mu, F&& check) {
  std::map<std::uint64_t, Event> pop;
  std::size_t k = 0;
  for (; k < rec.events.size() && rec.events[k].round == 0; ++k) pop[rec.events[k].id] = rec.events[k];
  REQUIRE(pop.size() == mu);
  check(pop, nullptr);
  for (; k < rec.events.size(); k += 2) {
    REQUIRE(k + 1 < rec.events.size());
    const Event& b = rec.events[k];
    const Event& d = rec.events[k + 1];
    REQUIRE(b.kind == EventKind::birth);
    REQUIRE(d.kind == EventKind::death);
    REQUIRE(b.round == d.round);
    REQUIRE(b.admitted == d.admitted);
    REQUIRE(pop.count(static_cast<std::uint64_t>(b.parent)) == 1);
    if (!b.admitted) {
      CHECK(d.id == b.id);
    } else {
      REQUIRE(pop.count(d.id) == 1);
      pop.erase(d.id);
      pop[b.id] = b;
    }
    check(pop, &d);
  }
}

}  // namespace

TEST_CASE("select_survivor picks the unique minimum") {
  RngStream r(1, 0);
  std::vector<FitnessValue> pool{{2, 0, 5}, {1, 9, 9}, {2, 0, 4}, {3, 0, 0}};
  for (int t = 0; t < 100; ++t) CHECK(select_survivor(pool, r) == 1);
  CHECK_THROWS_AS(select_survivor(std::span<const FitnessValue>(), r), std::invalid_argument);
}

TEST_CASE("select_survivor breaks ties uniformly") {
  RngStream r(2, 0);
  const std::size_t pool_size = 5;
  std::vector<FitnessValue> pool(pool_size, FitnessValue{1, 2, 3});
  const int trials = 100000;
  std::vector<int> hits(pool_size, 0);
  for (int t = 0; t < trials; ++t) ++hits[select_survivor(pool, r)];
  const double p = 1.0 / pool_size;
  const double sigma = std::sqrt(trials * p * (1 - p));
  for (int h : hits) CHECK(std::fabs(h - trials * p) <= 5 * sigma);

  // Ties among the minimum only.
  std::vector<FitnessValue> mixed{{0, 1, 1}, {5, 0, 0}, {0, 1, 1}, {0, 1, 2}};
  std::vector<int> seen(4, 0);
  for (int t = 0; t < 20000; ++t) ++seen[select_survivor(mixed, r)];
  CHECK(seen[1] == 0);
  CHECK(seen[3] == 0);
  CHECK(std::abs(seen[0] - 10000) <= 5 * std::sqrt(5000.0));
}

TEST_CASE("strictly worse offspring are rejected and leave the population unchanged") {
  const auto inst = make_inst(200, 5, 3);
  const Evaluator ev(&inst, FitnessMode::hottopic());
  auto cfg = config(4, 1.0, FitnessMode::hottopic(), 3000, 11);
  const auto rec = run_ea(ev, cfg);
  std::size_t rejected = 0;
  replay(rec, 4, [&](const std::map<std::uint64_t, Event>& pop, const Event* d) {
    if (d == nullptr || d->admitted) return;
    ++rejected;
    FitnessValue worst = pop.begin()->second.fitness;
    for (const auto& [id, e] : pop) worst = std::min(worst, e.fitness);
    CHECK(d->fitness <= worst);
  });
  CHECK(rejected > 0);
}

TEST_CASE("population size, id order and evaluation accounting") {
  const auto inst = make_inst(300, 10, 4);
  for (auto mode : {FitnessMode::hottopic(), FitnessMode::capped_level(), FitnessMode::aux_linear(2),
                    FitnessMode::onemax()}) {
    const Evaluator ev(&inst, mode);
    for (std::uint32_t mu : {1u, 3u, 17u}) {
      const auto rec = run_ea(ev, config(mu, 1.2, mode, 4000, 5 + mu));
      const auto& s = rec.summary;
      CHECK(s.evaluations == mu + s.rounds);
      CHECK(rec.events.size() == mu + 2 * s.rounds);
      std::uint64_t last_birth = 0;
      bool first = true;
      for (const Event& e : rec.events)
        if (e.kind == EventKind::birth) {
          if (!first) CHECK(e.id == last_birth + 1);
          last_birth = e.id;
          first = false;
        }
      std::set<std::uint64_t> live;
      replay(rec, mu, [&](const std::map<std::uint64_t, Event>& pop, const Event*) {
        CHECK(pop.size() == mu);
        live.clear();
        for (const auto& [id, e] : pop) live.insert(id);
      });
      CHECK(std::set<std::uint64_t>(s.final_ids.begin(), s.final_ids.end()) == live);
    }
  }
}

TEST_CASE("runs are reproducible") {
  const auto inst = make_inst(300, 10, 6);
  const Evaluator ev(&inst, FitnessMode::hottopic());
  auto cfg = config(10, 1.0, FitnessMode::hottopic(), 20000, 99);
  cfg.trace_stride = 50;
  const auto a = run_ea(ev, cfg);
  const auto b = run_ea(ev, cfg);
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t k = 0; k < a.events.size(); ++k) CHECK(same_event(a.events[k], b.events[k]));
  CHECK(a.summary.evaluations == b.summary.evaluations);
  CHECK(a.summary.optimum_evaluation == b.summary.optimum_evaluation);
  CHECK(a.summary.levels_visited == b.summary.levels_visited);
  CHECK(a.summary.final_ids == b.summary.final_ids);
  CHECK(a.trace.size() == b.trace.size());
  cfg.stream_id = 1;
  const auto c = run_ea(ev, cfg);
  CHECK(!(c.summary.final_best_fitness == a.summary.final_best_fitness && c.events.size() == a.events.size() &&
          same_event(c.events.back(), a.events.back())));
}

TEST_CASE("hooks see the same events as the record") {
  const auto inst = make_inst(200, 5, 7);
  const Evaluator ev(&inst, FitnessMode::aux_linear(1));
  auto cfg = config(6, 1.0, FitnessMode::aux_linear(1), 2000, 8);
  const auto full = run_ea(ev, cfg);
  std::vector<Event> seen;
  RunHooks hooks;
  hooks.on_birth = [&](const Event& e) { seen.push_back(e); };
  hooks.on_death = [&](const Event& e) { seen.push_back(e); };
  cfg.record_events = false;
  const auto quiet = run_ea(ev, cfg, hooks);
  CHECK(quiet.events.empty());
  REQUIRE(seen.size() == full.events.size());
  for (std::size_t k = 0; k < seen.size(); ++k) CHECK(same_event(seen[k], full.events[k]));
}

TEST_CASE("elitism in every mode") {
  const auto inst = make_inst(300, 10, 9);
  for (auto mode : {FitnessMode::hottopic(), FitnessMode::capped_level(), FitnessMode::aux_linear(0),
                    FitnessMode::onemax()}) {
    const Evaluator ev(&inst, mode);
    auto cfg = config(8, 1.5, mode, 10000, 10);
    cfg.trace_stride = 1;
    const auto rec = run_ea(ev, cfg);
    for (std::size_t k = 1; k < rec.trace.size(); ++k) CHECK(rec.trace[k - 1].best_fitness <= rec.trace[k].best_fitness);
    FitnessValue prev{};
    replay(rec, 8, [&](const std::map<std::uint64_t, Event>& pop, const Event*) {
      FitnessValue best{};
      for (const auto& [id, e] : pop) best = std::max(best, e.fitness);
      CHECK(prev <= best);
      prev = best;
    });
    CHECK(prev == rec.summary.final_best_fitness);
  }
}

TEST_CASE("aux mode never removes a higher rank while a lower one remains") {
  const auto inst = make_inst(400, 10, 12);
  const Evaluator ev(&inst, FitnessMode::aux_linear(3));
  const auto rec = run_ea(ev, config(20, 1.0, FitnessMode::aux_linear(3), 20000, 13));
  std::size_t deaths = 0;
  replay(rec, 20, [&](const std::map<std::uint64_t, Event>& pop, const Event* d) {
    if (d == nullptr) return;
    ++deaths;
    for (const auto& [id, e] : pop) CHECK(d->rank <= e.rank);
    CHECK(d->rank == static_cast<std::int32_t>(d->fitness.hot));
  });
  CHECK(deaths == rec.summary.rounds);
}

TEST_CASE("budget exhaustion is censored") {
  const auto inst = make_inst(500, 20, 14);
  const Evaluator ev(&inst, FitnessMode::hottopic());
  const auto rec = run_ea(ev, config(5, 1.0, FitnessMode::hottopic(), 500, 15));
  CHECK(rec.summary.censored);
  CHECK(rec.summary.stop == StopReason::budget);
  CHECK(!rec.summary.optimum_round);
  CHECK(!rec.summary.optimum_evaluation);
  CHECK(rec.summary.evaluations == 500);
  CHECK(rec.summary.rounds == 495);
  // Budget equal to mu: initialization only.
  const auto init_only = run_ea(ev, config(5, 1.0, FitnessMode::hottopic(), 5, 15));
  CHECK(init_only.summary.rounds == 0);
  CHECK(init_only.summary.censored);
}

TEST_CASE("(1+1) EA on OneMax with c = 0.5") {
  const std::uint32_t n = 64;
  const Evaluator ev(nullptr, FitnessMode::onemax(), n);
  const auto budget = static_cast<std::uint64_t>(50.0 * n * std::log(static_cast<double>(n)));
  int hits = 0;
  for (std::uint64_t run = 0; run < 10; ++run) {
    auto cfg = config(1, 0.5, FitnessMode::onemax(), budget, 1000 + run);
    cfg.record_events = false;
    const auto rec = run_ea(ev, cfg);
    if (rec.summary.optimum_evaluation) {
      ++hits;
      CHECK(rec.summary.stop == StopReason::optimum);
      CHECK(*rec.summary.optimum_evaluation == rec.summary.evaluations);
      CHECK(rec.summary.final_best_onemax == n);
      CHECK(!rec.summary.censored);
    }
  }
  CHECK(hits >= 9);
}

TEST_CASE("capped mode climbs one level at a time") {
  const auto inst = make_inst(300, 10, 16);
  const Evaluator ev(&inst, FitnessMode::capped_level());
  auto cfg = config(5, 1.0, FitnessMode::capped_level(), 200000, 17);
  cfg.record_events = false;
  const auto rec = run_ea(ev, cfg);
  const auto& v = rec.summary.levels_visited;
  const std::uint32_t top = rec.summary.final_best_level;
  CHECK(top > 0);
  for (std::uint32_t l = 0; l <= top; ++l) CHECK(v[l]);
  for (std::uint32_t l = top + 1; l < v.size(); ++l) CHECK(!v[l]);
}

TEST_CASE("level stop modes") {
  const auto inst = make_inst(300, 10, 18);
  const Evaluator ev(&inst, FitnessMode::hottopic());
  auto cfg = config(2, 1.0, FitnessMode::hottopic(), 200000, 19);
  cfg.record_events = false;
  cfg.level_stop = EAConfig::LevelStop::at_top;
  const auto top = run_ea(ev, cfg);
  CHECK(top.summary.stop == StopReason::level_decided);
  CHECK(top.summary.final_best_level == 10);
  cfg.level_stop = EAConfig::LevelStop::decided;
  const auto dec = run_ea(ev, cfg);
  CHECK(dec.summary.stop == StopReason::level_decided);
  CHECK(dec.summary.evaluations <= top.summary.evaluations);
  CHECK(dec.summary.visited_levels <= top.summary.visited_levels);
  CHECK(dec.summary.all_levels_visited == top.summary.all_levels_visited);
  CHECK(!dec.summary.censored);
}

TEST_CASE("initial zero density on the hot topic and its complement") {
  const auto inst = make_inst(400, 6, 20);
  const std::uint32_t ell = 2;
  const Evaluator ev(&inst, FitnessMode::aux_linear(ell));
  auto cfg = config(5, 1.0, FitnessMode::aux_linear(ell), 5, 21);
  cfg.init_zero_density = 0.1;
  const auto rec = run_ea(ev, cfg);
  // 0.1 * 100 = 10 zeros on A, 0.1 * 300 = 30 zeros on R.
  for (const Event& e : rec.events) {
    CHECK(e.rank == 90);
    CHECK(e.onemax == 90 + 270);
  }
  CHECK(rec.summary.initial_max_rank == 90);
  cfg.mode = FitnessMode::hottopic();
  const Evaluator ht(&inst, FitnessMode::hottopic());
  CHECK_THROWS_AS(run_ea(ht, cfg), std::invalid_argument);
}

TEST_CASE("config validation and mode mismatch") {
  const auto inst = make_inst(100, 3, 22);
  const Evaluator ev(&inst, FitnessMode::hottopic());
  CHECK_THROWS_AS(run_ea(ev, config(0, 1.0, FitnessMode::hottopic(), 100, 0)), std::invalid_argument);
  CHECK_THROWS_AS(run_ea(ev, config(5, 0.0, FitnessMode::hottopic(), 100, 0)), std::invalid_argument);
  CHECK_THROWS_AS(run_ea(ev, config(5, 1.0, FitnessMode::hottopic(), 4, 0)), std::invalid_argument);
  CHECK_THROWS_AS(run_ea(ev, config(5, 1.0, FitnessMode::onemax(), 100, 0)), std::invalid_argument);
  CHECK_THROWS_AS(run_ea(ev, config(5, 1.0, FitnessMode::aux_linear(0), 100, 0)), std::invalid_argument);
  auto bad = config(5, 1.0, FitnessMode::onemax(), 100, 0);
  bad.level_stop = EAConfig::LevelStop::at_top;
  const Evaluator om(nullptr, FitnessMode::onemax(), 100);
  CHECK_THROWS_AS(run_ea(om, bad), std::invalid_argument);
}

TEST_CASE("optimum in the initial population") {
  // n = 1: a random start is all-ones with probability 1/2.
  const Evaluator ev(nullptr, FitnessMode::onemax(), 1);
  int found = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto rec = run_ea(ev, config(1, 0.5, FitnessMode::onemax(), 1000, s));
    REQUIRE(rec.summary.optimum_evaluation);
    if (*rec.summary.optimum_evaluation == 1) {
      ++found;
      CHECK(rec.summary.rounds == 0);
      CHECK(rec.summary.optimum_round == 0u);
    }
  }
  CHECK(found > 0);
  CHECK(found < 20);
}
