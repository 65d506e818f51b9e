#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "doctest.h"
#include "htea/analysis/events.hpp"
#include "htea/analysis/forest.hpp"
#include "htea/analysis/local_probs.hpp"
#include "htea/analysis/zseries.hpp"
#include "htea/core/mutation.hpp"

using namespace htea;

namespace {

Event birth(std::uint64_t round, std::uint64_t id, std::int64_t parent, std::int32_t rank, std::uint32_t onemax,
            bool admitted = true, std::uint32_t flips = 1) {
  Event e;
  e.round = round;
  e.id = id;
  e.parent = parent;
  e.rank = rank;
  e.onemax = onemax;
  e.kind = EventKind::birth;
  e.admitted = admitted;
  e.flips = round == 0 ? 0 : flips;
  return e;
}

Event death(std::uint64_t round, std::uint64_t id, std::int32_t rank, std::uint32_t onemax, bool admitted = true) {
  Event e = birth(round, id, -1, rank, onemax, admitted);
  e.kind = EventKind::death;
  e.flips = 0;
  return e;
}

RunRecord aux_run(std::uint32_t n, std::uint32_t mu, std::uint64_t budget, std::uint64_t seed,
                  std::optional<double> init_density = std::nullopt, std::uint32_t L = 3, double c = 1.0) {
  static std::map<std::pair<std::uint32_t, std::uint32_t>, HotTopicInstance> cache;
  auto key = std::make_pair(n, L);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, HotTopicInstance::generate(HotTopicParams::make(n, "0.25", "0.05", "0.05", L, 5))).first;
  const Evaluator ev(&it->second, FitnessMode::aux_linear(0));
  EAConfig cfg;
  cfg.mu = mu;
  cfg.c = c;
  cfg.mode = FitnessMode::aux_linear(0);
  cfg.max_evaluations = budget;
  cfg.master_seed = seed;
  cfg.record_events = true;
  cfg.init_zero_density = init_density;
  return run_ea(ev, cfg);
}

// Independent Z oracle: replays the live population and records every deletion.
std::map<std::int64_t, std::uint32_t> replay_z(const RunRecord& rec, std::int64_t& lo, std::int64_t& hi) {
  std::map<std::uint64_t, Event> pop;
  std::map<std::int64_t, std::uint32_t> z;
  lo = INT64_MAX;
  for (const Event& e : rec.events) {
    if (e.kind == EventKind::birth) {
      if (e.admitted) {
        pop[e.id] = e;
        lo = std::min<std::int64_t>(lo, e.rank);
      }
    } else if (e.admitted) {
      z[pop.at(e.id).rank] = pop.at(e.id).onemax;
      pop.erase(e.id);
    }
  }
  std::int64_t low_alive = INT64_MAX;
  for (const auto& [id, e] : pop) low_alive = std::min<std::int64_t>(low_alive, e.rank);
  hi = low_alive - 1;
  return z;
}

}  // namespace

TEST_CASE("rank_of") {
  const BitString x = BitString::from_string("1010");
  const IndexSet A{0, 1, 2};
  CHECK(rank_of(x, A) == 2);
  CHECK(rank_of(BitString::ones(4), A) == 3);
  CHECK(rank_of(BitString(4), A) == 0);
  CHECK_THROWS_AS(rank_of(x, IndexSet{}), std::invalid_argument);
}

TEST_CASE("Z series on a synthetic log") {
  RunRecord rec;
  rec.events = {birth(0, 0, -1, 3, 90), birth(0, 1, -1, 3, 95), birth(0, 2, -1, 3, 92),
                birth(1, 3, 0, 5, 100),  death(1, 0, 3, 90),      birth(2, 4, 3, 5, 101),
                death(2, 1, 3, 95),      birth(3, 5, 4, 2, 80, false), death(3, 5, 2, 80, false),
                birth(4, 6, 4, 6, 102),  death(4, 2, 3, 92)};
  rec.summary.final_ranks = {5, 5, 6};
  const ZSeries z = extract_z_series(rec);
  REQUIRE(z.z.size() == 2);
  CHECK(z.i_min == 3);
  CHECK(z.at(3) == 92);
  CHECK(z.at(4) == 92);
  CHECK(z.observed == std::vector<bool>{true, false});

  RunRecord none;
  none.events = {birth(0, 0, -1, 3, 90)};
  none.summary.final_ranks = {3};
  CHECK(extract_z_series(none).empty());
}

TEST_CASE("Z series matches a population replay and the streaming tracker") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto rec = aux_run(300, 5 + 3 * static_cast<std::uint32_t>(seed), 6000, seed);
    const ZSeries z = extract_z_series(rec);
    std::int64_t lo = 0, hi = 0;
    const auto oracle = replay_z(rec, lo, hi);
    REQUIRE(!z.empty());
    CHECK(z.i_min == lo);
    CHECK(z.i_max() == hi);
    std::uint32_t prev = 0;
    for (std::int64_t i = lo; i <= hi; ++i) {
      auto it = oracle.find(i);
      const std::uint32_t want = it == oracle.end() ? prev : it->second;
      CHECK(z.at(i) == want);
      CHECK(z.observed[static_cast<std::size_t>(i - lo)] == (it != oracle.end()));
      prev = want;
    }

    ZTracker tracker(75);
    const HotTopicInstance inst = HotTopicInstance::generate(HotTopicParams::make(300, "0.25", "0.05", "0.05", 3, 5));
    const Evaluator ev(&inst, FitnessMode::aux_linear(0));
    EAConfig cfg;
    cfg.mu = 5 + 3 * static_cast<std::uint32_t>(seed);
    cfg.mode = FitnessMode::aux_linear(0);
    cfg.max_evaluations = 6000;
    cfg.master_seed = seed;
    const auto quiet = run_ea(ev, cfg, tracker.hooks());
    const ZSeries zt = tracker.finish(quiet.summary);
    CHECK(zt.i_min == z.i_min);
    CHECK(zt.z == z.z);
    CHECK(zt.observed == z.observed);
  }
}

TEST_CASE("truncated drift arithmetic") {
  ZSeries flat;
  flat.i_min = 10;
  flat.z.assign(30, 500);
  flat.observed.assign(30, true);
  const auto d0 = truncated_drift(flat, 5, 100);
  CHECK(d0.count == 25);
  CHECK(d0.mean() == 0.0);
  CHECK(d0.std_error() == 0.0);

  // Decreasing by 2 per rank with ln(mu) = 2: every window sits on the floor.
  ZSeries down;
  down.i_min = 0;
  for (int k = 0; k < 20; ++k) down.z.push_back(static_cast<std::uint32_t>(100 - 2 * k));
  down.observed.assign(20, true);
  const auto d1 = truncated_drift(down, 1, std::exp(2.0));
  CHECK(d1.mean() == doctest::Approx(-2.0).epsilon(1e-12));
  const auto d3 = truncated_drift(down, 3, std::exp(2.0));
  CHECK(d3.mean() == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(d3.count == 17);

  ZSeries hand;
  hand.i_min = 4;
  hand.z = {10, 12, 9, 9, 15};
  hand.observed.assign(5, true);
  const auto d = truncated_drift(hand, 2, 20);
  CHECK(d.count == 3);
  // windows: 9-10 = -1, 9-12 = -3 -> -ln 20, 15-9 = 6
  CHECK(d.mean() == doctest::Approx((-1.0 - std::log(20.0) + 6.0) / 3.0).epsilon(1e-12));
  const auto part = truncated_drift(hand, 2, 20, 5, 5);
  CHECK(part.count == 1);
  CHECK(part.mean() == doctest::Approx(-std::log(20.0)).epsilon(1e-12));
  CHECK_THROWS_AS(truncated_drift(hand, 5, 20), std::invalid_argument);
  CHECK_THROWS_AS(truncated_drift(hand, 0, 20), std::invalid_argument);
}

TEST_CASE("truncated drift is linear over disjoint windows") {
  RngStream r(4, 0);
  ZSeries z;
  z.i_min = 100;
  for (int k = 0; k < 400; ++k) z.z.push_back(static_cast<std::uint32_t>(1000 + r.below(60)));
  z.observed.assign(400, true);
  const auto full = truncated_drift(z, 7, 50);
  DriftEstimate merged;
  double weighted = 0;
  std::int64_t from = 100;
  for (std::int64_t to : {150, 151, 300, 492}) {
    const auto w = truncated_drift(z, 7, 50, from, to);
    weighted += w.mean() * static_cast<double>(w.count);
    merged.merge(w);
    from = to + 1;
  }
  CHECK(merged.count == full.count);
  CHECK(weighted / static_cast<double>(full.count) == doctest::Approx(full.mean()).epsilon(1e-12));
  CHECK(merged.mean() == doctest::Approx(full.mean()).epsilon(1e-12));
  CHECK(merged.std_error() == doctest::Approx(full.std_error()).epsilon(1e-9));
}

TEST_CASE("family forest of a path and of an empty threshold") {
  RunRecord rec;
  rec.events.push_back(birth(0, 0, -1, 0, 0));
  for (std::uint64_t k = 1; k <= 4; ++k) {
    rec.events.push_back(birth(k, k, static_cast<std::int64_t>(k - 1), static_cast<std::int32_t>(k), 0));
    rec.events.push_back(death(k, k - 1, static_cast<std::int32_t>(k - 1), 0));
  }
  rec.summary.final_ranks = {4};
  const auto f = build_family_forest(rec, 1);
  REQUIRE(f.nodes.size() == 4);
  CHECK(f.root_count() == 1);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(f.nodes[k].depth == k);
    CHECK(f.nodes[k].id == k + 1);
  }
  CHECK(depth_profile(f) == std::vector<std::uint64_t>{1, 1, 1, 1});
  CHECK(f.nodes[0].death == 2u);
  CHECK(!f.nodes[3].death);
  CHECK(!check_forest_structure(f));
  CHECK(build_family_forest(rec, 5).nodes.empty());
  CHECK(depth_profile(build_family_forest(rec, 5)).empty());
}

TEST_CASE("family forests of real runs are structurally sound") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto rec = aux_run(300, 10, 8000, 40 + seed);
    std::map<std::uint64_t, const Event*> by_id;
    for (const Event& e : rec.events)
      if (e.kind == EventKind::birth) by_id[e.id] = &e;
    for (std::int64_t i : {rec.summary.initial_max_rank + 1L, rec.summary.initial_max_rank + 5L}) {
      const auto f = build_family_forest(rec, i);
      CHECK(!f.nodes.empty());
      CHECK(!check_forest_structure(f));
      for (const auto& v : f.nodes) {
        CHECK(v.rank >= i);
        const Event* e = by_id.at(v.id);
        CHECK(e->admitted);
        if (v.parent < 0) {
          CHECK(by_id.at(static_cast<std::uint64_t>(e->parent))->rank < i);
        } else {
          CHECK(f.nodes[static_cast<std::size_t>(v.parent)].id == static_cast<std::uint64_t>(e->parent));
        }
      }
    }
  }
}

TEST_CASE("forest structure checker catches corruption") {
  FamilyForest f;
  f.nodes.resize(2);
  f.nodes[0].root = 0;
  f.nodes[1].parent = 0;
  f.nodes[1].root = 0;
  f.nodes[1].depth = 1;
  CHECK(!check_forest_structure(f));
  f.nodes[1].depth = 2;
  CHECK(check_forest_structure(f));
  f.nodes[1].depth = 1;
  f.nodes[1].death = 0;
  f.nodes[1].birth = 3;
  CHECK(check_forest_structure(f));
}

TEST_CASE("reference process basics") {
  RngStream r(8, 0);
  CHECK(simulate_reference_forest(50, 0, r).nodes.size() == 1);
  for (std::uint64_t T : {1u, 10u, 200u}) {
    const auto f = simulate_reference_forest(20, T, r);
    CHECK(f.root_count() == T + 1);
    CHECK(!check_forest_structure(f));
    const auto counts = simulate_reference_depths(20, T, r);
    CHECK(counts.roots == T + 1);
    for (std::size_t d = 0; d < counts.first_tree.size(); ++d) CHECK(counts.first_tree[d] <= counts.all_trees[d]);
  }
  // mu = 1: every node spawns every round, the first tree doubles.
  const auto d = simulate_reference_depths(1, 6, r);
  std::uint64_t total = 0;
  for (auto c : d.first_tree) total += c;
  CHECK(total == 64);
  CHECK(d.first_tree == std::vector<std::uint64_t>{1, 6, 15, 20, 15, 6, 1});
}

TEST_CASE("reference process depth counts match the binomial expectation") {
  // E[s^d] for the round-0 tree is C(T, d) / mu^d exactly; both simulators are checked against it.
  const double mu = 20;
  const std::uint64_t T = 60;
  const int reps = 4000;
  RngStream r(9, 0);
  const int D = 4;
  std::vector<double> s_exp(D + 1, 0), s2_exp(D + 1, 0), s_cnt(D + 1, 0), s2_cnt(D + 1, 0);
  std::vector<double> s_cap(D + 1, 0), s2_cap(D + 1, 0);
  for (int k = 0; k < reps; ++k) {
    const auto f = simulate_reference_forest(mu, T, r);
    const auto prof = depth_profile(f, 0);
    const auto cnt = simulate_reference_depths(mu, T, r).first_tree;
    const auto capped = simulate_reference_depths(mu, T, r, D);
    REQUIRE(capped.first_tree.size() <= D + 1);
    REQUIRE(capped.all_trees.size() <= D + 1);
    REQUIRE(capped.roots == T + 1);
    for (int d = 0; d <= D; ++d) {
      const double a = d < static_cast<int>(prof.size()) ? static_cast<double>(prof[d]) : 0;
      const double b = d < static_cast<int>(cnt.size()) ? static_cast<double>(cnt[d]) : 0;
      const double c = d < static_cast<int>(capped.first_tree.size()) ? static_cast<double>(capped.first_tree[d]) : 0;
      s_exp[d] += a;
      s2_exp[d] += a * a;
      s_cnt[d] += b;
      s2_cnt[d] += b * b;
      s_cap[d] += c;
      s2_cap[d] += c * c;
    }
  }
  double binom = 1;
  for (int d = 0; d <= D; ++d) {
    if (d > 0) binom = binom * static_cast<double>(T - d + 1) / d;
    const double want = binom / std::pow(mu, d);
    for (auto [s, s2] : {std::pair{s_exp[d], s2_exp[d]}, std::pair{s_cnt[d], s2_cnt[d]}, std::pair{s_cap[d], s2_cap[d]}}) {
      const double m = s / reps;
      const double sd = std::sqrt(std::max(s2 / reps - m * m, 0.0));
      CHECK(std::fabs(m - want) <= 5 * sd / std::sqrt(reps) + 1e-12);
    }
  }
}

TEST_CASE("reference forest size tail bound") {
  const double mu = 50;
  const std::uint64_t T = 200;
  const int reps = 2000;
  RngStream r(10, 0);
  std::vector<std::uint64_t> sizes;
  for (int k = 0; k < reps; ++k) sizes.push_back(simulate_reference_forest(mu, T, r).nodes.size());
  const double scale = static_cast<double>(T) * std::exp(static_cast<double>(T) / mu);
  for (double S : {0.5 * scale, scale, 2 * scale, 5 * scale}) {
    const double bound = std::min(1.0, scale / S);
    double hits = 0;
    for (auto s : sizes) hits += static_cast<double>(s) >= S;
    const double freq = hits / reps;
    const double sigma = std::sqrt(bound * (1 - bound) / reps);
    CHECK(freq <= bound + 5 * sigma);
  }
}

TEST_CASE("coupled reference forest embeds the family forest") {
  int checked = 0;
  // F' grows like (1 + 1/mu)^T, so T scales with mu.
  for (auto [mu, T] : {std::pair<std::uint32_t, std::uint64_t>{3, 30}, {8, 60}, {20, 200}}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto rec = aux_run(300, mu, 20000, 100 + seed + mu);
      for (std::int64_t off : {1, 4}) {
        const std::int64_t i = rec.summary.initial_max_rank + off;
        RngStream r(seed, static_cast<std::uint64_t>(mu));
        CouplingResult res;
        try {
          res = couple_reference_forest(rec, i, T, mu, r);
        } catch (const std::invalid_argument&) {
          continue;  // run ended or optimum reached before t_i + T
        }
        ++checked;
        INFO("mu " << mu << " seed " << seed << " i " << i << ": " << res.failure);
        CHECK(res.embedded);
        CHECK(res.reference.root_count() == T + 1);
        CHECK(!check_forest_structure(res.reference));
        CHECK(!check_forest_structure(res.family));
        CHECK(!res.family.nodes.empty());
      }
    }
  }
  CHECK(checked >= 12);
  const auto rec = aux_run(300, 5, 3000, 1);
  RngStream r(0, 0);
  CHECK_THROWS_AS(couple_reference_forest(rec, rec.summary.initial_max_rank, 10, 5, r), std::invalid_argument);
}

TEST_CASE("lifetimes on a synthetic log") {
  RunRecord rec;
  rec.events = {birth(0, 0, -1, 2, 10),       birth(0, 1, -1, 3, 11),        birth(1, 2, 1, 4, 12),
                death(1, 0, 2, 10),           birth(2, 3, 2, 3, 13, false),  death(2, 3, 3, 13, false),
                birth(3, 4, 2, 5, 14),        death(3, 1, 3, 11)};
  rec.summary.final_ranks = {4, 5};
  const auto lt = measure_lifetimes(rec);
  REQUIRE(lt.size() == 2);
  CHECK(lt[0].rank == 2);
  CHECK(lt[0].first_birth == 0);
  CHECK(lt[0].last_death == 1);
  CHECK(lt[1].rank == 3);
  CHECK(lt[1].first_birth == 0);
  CHECK(lt[1].last_death == 3);
  const auto z = extract_z_series(rec);
  CHECK(z.z == std::vector<std::uint32_t>{10, 11});
}

TEST_CASE("lifetimes are monotone in the rank") {
  const auto rec = aux_run(400, 20, 30000, 3);
  const auto lt = measure_lifetimes(rec);
  REQUIRE(lt.size() > 10);
  for (std::size_t k = 1; k < lt.size(); ++k) {
    CHECK(lt[k - 1].first_birth <= lt[k].first_birth);
    CHECK(lt[k - 1].last_death <= lt[k].last_death);
    CHECK(lt[k].rank == lt[k - 1].rank + 1);
  }
}

TEST_CASE("lifetime bound in the drift regime") {
  // Start density 2 eps on A and R; ranks between (1 - 2 eps)|A| and (1 - eps/2)|A|.
  const std::uint32_t n = 2000, mu = 100;
  const double c = 1.0, alpha = 0.25, eps = 0.05;
  const double bound = 8 * std::exp(alpha * c) * mu * std::log(static_cast<double>(mu));
  std::size_t total = 0, within = 0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto rec = aux_run(n, mu, 400000, 200 + seed, 2 * eps, 1, c);
    for (const auto& l : measure_lifetimes(rec)) {
      if (l.rank < (1 - 2 * eps) * 500 || l.rank > (1 - eps / 2) * 500) continue;
      ++total;
      within += static_cast<double>(l.last_death - l.first_birth) <= bound;
    }
  }
  REQUIRE(total >= 30);
  CHECK(static_cast<double>(within) >= 0.9 * static_cast<double>(total));
}

TEST_CASE("good event parameters") {
  const auto p = GoodEventParams::make(1.0, 0.25);
  const double kmin = 9 * std::exp(0.25) / (2 * std::exp(2.0) * std::log(2.0));
  CHECK(kmin == doctest::Approx(1.1281626290325435).epsilon(1e-12));
  CHECK(GoodEventParams::k_lower_bound(1.0, 0.25) == doctest::Approx(kmin).epsilon(1e-15));
  CHECK(GoodEventParams::k_lower_bound(4.0, 0.25) == 1.0);
  CHECK(p.k == doctest::Approx(1.05 * kmin).epsilon(1e-12));
  CHECK(p.c_d == doctest::Approx(1.0 / 32));
  CHECK(p.c_e == doctest::Approx(17.50571960474096).epsilon(1e-12));
  // ceil(2 (c_e + 1) / c_d) = ceil(1184.366...)
  CHECK(p.K == 1185);
  CHECK(p.g == doctest::Approx(0.5 * (std::log(8.0) + 1.25 - std::log(0.5))));
  CHECK(!p.eta_feasible);
  CHECK(p.eta_bound < 0);
  const auto q = GoodEventParams::make(0.5, 0.25, 0.01, 2.0, 1e-6);
  CHECK(q.eta_bound == doctest::Approx(std::min({q.g, 0.5 - q.g, 0.5 * 0.01 / 128, q.c_d / 6})));
  CHECK(q.eta_feasible);
  CHECK_THROWS_AS(GoodEventParams::make(1.0, 0.25, 0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(GoodEventParams::make(1.0, 0.25, 1.5), std::invalid_argument);
}

TEST_CASE("good events on hand-built logs") {
  const auto params = GoodEventParams::make(1.0, 0.25);
  GoodEventContext ctx{2, 0.05, 100};

  RunRecord empty;
  empty.events = {birth(0, 0, -1, 1, 50), birth(0, 1, -1, 2, 50)};
  empty.summary.final_ranks = {1, 2};
  const auto g0 = check_good_events(empty, build_family_forest(empty, 5), params, ctx, 5);
  CHECK(g0.a);
  CHECK(g0.b);
  CHECK(g0.c);
  CHECK(g0.d == true);
  CHECK(g0.e);
  CHECK(g0.all());

  // One root of rank 3 at mu = 2: eps mu ln^3 mu < 1, so only E_b breaks.
  RunRecord only_b;
  only_b.events = {birth(0, 0, -1, 2, 50), birth(0, 1, -1, 2, 50), birth(1, 2, 0, 3, 51), death(1, 1, 2, 50)};
  only_b.summary.final_ranks = {2, 3};
  const auto g1 = check_good_events(only_b, build_family_forest(only_b, 3), params, ctx, 3);
  CHECK(g1.a);
  CHECK(!g1.b);
  CHECK(g1.c);
  CHECK(g1.d == true);
  CHECK(g1.e);
  CHECK(g1.roots == 1);

  // A rank-2 parent jumping to rank 4 breaks E_a; with mu = 100 the single root is fine.
  GoodEventContext wide{100, 0.05, 100};
  RunRecord only_a = only_b;
  only_a.events[2].rank = 4;
  const auto g2 = check_good_events(only_a, build_family_forest(only_a, 3), params, wide, 3);
  CHECK(!g2.a);
  CHECK(g2.b);
  CHECK(g2.c);
  CHECK(g2.e);

  // A rank-3 root improved at depth 0: E_c breaks (0 <= phi ln mu), E_d breaks (one flip > c_d/2 ln mu).
  RunRecord improve = only_b;
  improve.events.push_back(birth(2, 3, 2, 4, 52));
  improve.events.push_back(death(2, 0, 2, 50));
  improve.summary.final_ranks = {3, 4};
  const auto g3 = check_good_events(improve, build_family_forest(improve, 3), params, wide, 3);
  CHECK(g3.a);
  CHECK(!g3.c);
  CHECK(g3.d == false);
  CHECK(g3.e);
  improve.has_flip_counts = false;
  const auto g4 = check_good_events(improve, build_family_forest(improve, 3), params, wide, 3);
  CHECK(!g4.d.has_value());
  CHECK(!g4.all());

  // A rank-3 descendant far above its root's OneMax breaks E_e.
  RunRecord far = only_b;
  far.events.push_back(birth(2, 3, 2, 3, 51 + 200));
  far.events.push_back(death(2, 0, 2, 50));
  far.summary.final_ranks = {3, 3};
  GoodEventContext big{100, 0.05, 1000};
  const auto g5 = check_good_events(far, build_family_forest(far, 3), params, big, 3);
  CHECK(!g5.e);
  CHECK(g5.a);
  CHECK(g5.c);
  CHECK_THROWS_AS(check_good_events(far, build_family_forest(far, 2), params, big, 3), std::invalid_argument);
}

TEST_CASE("local probabilities at zero rate") {
  RngStream r(11, 0);
  const BitString x = random_bitstring(200, r);
  IndexSet A(50);
  for (Index j = 0; j < 50; ++j) A[j] = 3 * j;
  const auto est = estimate_local_probs(x, A, 0.0, 10000, r);
  CHECK(est.p_R == 1.0);
  CHECK(est.p_I == 0.0);
  CHECK(std::isnan(est.ratio));
  CHECK_THROWS_AS(estimate_local_probs(x, A, 1.0, 9999, r), std::invalid_argument);
}

TEST_CASE("local probabilities against the analytic bounds") {
  const std::uint32_t n = 2000;
  RngStream r(12, 0);
  const auto inst = HotTopicInstance::generate(HotTopicParams::make(n, "0.25", "0.05", "0.05", 1, 3));
  const IndexSet& A = inst.A(1);
  BitString x = random_bitstring(n, r);
  for (Index j : A) x.set(j, true);
  std::vector<Index> pick;
  sample_subset(static_cast<Index>(A.size()), 25, r, pick);  // d(A, x) = 25/500 = 0.05
  for (Index p : pick) x.set(A[p], false);
  for (double c : {0.5, 1.0, 2.0}) {
    const auto e = estimate_local_probs(x, A, c, 100000, r);
    CHECK(e.eps_x == doctest::Approx(0.05));
    CHECK(e.alpha == doctest::Approx(0.25));
    CHECK(e.bound_R == doctest::Approx(std::exp(-0.25 * c) / 2));
    CHECK(e.p_R >= e.bound_R - 5 * e.se_R);
    CHECK(e.p_I >= e.bound_L - 5 * e.se_I);
    CHECK(e.p_I <= e.bound_U + 5 * e.se_I);
    CHECK(e.ratio <= e.bound_ratio + 5 * e.se_ratio);
  }
}
