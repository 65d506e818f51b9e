#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "htea/analysis/events.hpp"
#include "htea/analysis/forest.hpp"
#include "htea/exp/experiments.hpp"
#include "htea/exp/runtime.hpp"
#include "internal.hpp"

namespace htea::exp {

namespace {

// Seed streams of the forest-stats parts, kept apart by point index.
constexpr std::uint64_t kDepthPoint = 0;
constexpr std::uint64_t kExplicitPoint = 1;
constexpr std::uint64_t kCouplingPoint = 100;
constexpr std::uint64_t kEventsPoint = 200;

constexpr std::uint32_t kCouplingMus[] = {5, 10, 20};
constexpr std::int64_t kCouplingOffsets[] = {1, 3};
constexpr std::uint64_t kExplicitReps = 10;
constexpr std::size_t kMaxThresholds = 16;

double falling_bound(std::uint64_t T, std::uint32_t d, double mu) {
  // T^d / (d! mu^d)
  double b = 1;
  for (std::uint32_t j = 1; j <= d; ++j) b *= static_cast<double>(T) / (mu * j);
  return b;
}

RunRecord aux_record(const Evaluator& ev, const ExperimentConfig& cfg, const FitnessMode& mode, std::uint32_t mu,
                     std::uint64_t seed) {
  EAConfig e = detail::ea_config(cfg, mu, cfg.c, mode, cfg.effective_budget(cfg.L), seed);
  e.init_zero_density = cfg.init_density_value();
  e.record_events = true;
  return run_ea(ev, e);
}

}  // namespace

std::uint64_t coupling_horizon(std::uint32_t mu) {
  if (mu == 0) throw std::invalid_argument("coupling horizon: mu must be positive");
  const double m = mu;
  const double t = std::floor(std::log(1e5 / m) / std::log1p(1 / m));
  return static_cast<std::uint64_t>(std::clamp(t, 1.0, 200.0));
}

ForestStatsResult run_forest_stats(const ExperimentConfig& cfg, ForestStatsParts parts) {
  cfg.validate();
  ForestStatsResult res;
  res.mu = cfg.mu;
  res.T = cfg.forest_T;
  res.reps = cfg.forest_reps;
  const double mu = cfg.mu;

  if (parts.depths) {
    const std::uint32_t D = cfg.forest_depth;
    const auto counts = parallel_map<ReferenceDepthCounts>(cfg.forest_reps, cfg.threads, [&](std::size_t r) {
      RngStream rng(run_seed(cfg.seed, kDepthPoint, r), 0);
      return simulate_reference_depths(mu, cfg.forest_T, rng, D);
    });
    res.roots_min = res.roots_max = counts.empty() ? 0 : counts[0].roots;
    std::vector<std::vector<double>> per(D + 1);
    for (const auto& c : counts) {
      res.roots_min = std::min(res.roots_min, c.roots);
      res.roots_max = std::max(res.roots_max, c.roots);
      for (std::uint32_t d = 0; d <= D; ++d)
        per[d].push_back(d < c.first_tree.size() ? static_cast<double>(c.first_tree[d]) : 0.0);
    }
    for (std::uint32_t d = 0; d <= D; ++d) {
      const auto m = detail::moments(per[d]);
      DepthRow row;
      row.depth = d;
      row.mean = m.mean;
      row.sd = m.std;
      row.se = per[d].empty() ? 0 : m.std / std::sqrt(static_cast<double>(per[d].size()));
      row.bound = falling_bound(cfg.forest_T, d, mu);
      // 5 standard errors of Monte Carlo slack
      row.within = row.mean <= row.bound + 5 * row.se;
      res.depths.push_back(row);
    }
    // Explicit node-by-node forests, sequential to bound memory.
    res.explicit_reps = kExplicitReps;
    for (std::uint64_t r = 0; r < kExplicitReps; ++r) {
      RngStream rng(run_seed(cfg.seed, kExplicitPoint, r), 0);
      const FamilyForest f = simulate_reference_forest(mu, cfg.forest_T, rng);
      if (f.root_count() != cfg.forest_T + 1 || check_forest_structure(f)) res.explicit_roots_ok = false;
    }
  }

  const bool need_instance = parts.coupling || parts.events;
  if (!need_instance) return res;
  const FitnessMode mode = FitnessMode::parse(cfg.mode);
  if (mode.kind != FitnessMode::Kind::aux_linear) throw std::invalid_argument("forest-stats: mode must be aux_linear");
  const auto inst = HotTopicInstance::generate(cfg.instance_params(), cfg.entry_cap);
  const Evaluator ev(&inst, mode);
  const std::size_t a_size = inst.A(mode.ell + 1).size();

  if (parts.coupling) {
    const std::size_t per_mu = cfg.runs;
    const std::size_t nmu = std::size(kCouplingMus);
    auto rows = parallel_map<std::vector<CouplingRow>>(nmu * per_mu, cfg.threads, [&](std::size_t t) {
      const std::uint32_t m = kCouplingMus[t / per_mu];
      const std::uint64_t r = t % per_mu;
      const std::uint64_t seed = run_seed(cfg.seed, kCouplingPoint + t / per_mu, r);
      const RunRecord rec = aux_record(ev, cfg, mode, m, seed);
      std::vector<CouplingRow> out;
      for (std::int64_t off : kCouplingOffsets) {
        CouplingRow row;
        row.mu = m;
        row.T = coupling_horizon(m);
        row.seed = seed;
        row.i = rec.summary.initial_max_rank + off;
        RngStream rng(seed, 1 + static_cast<std::uint64_t>(off));
        try {
          const CouplingResult c = couple_reference_forest(rec, row.i, row.T, m, rng);
          row.t_i = c.t_i;
          row.family_nodes = c.family.nodes.size();
          row.reference_nodes = c.reference.nodes.size();
          row.embedded = c.embedded;
          row.failure = c.failure;
        } catch (const std::invalid_argument& e) {
          row.failure = std::string("skipped: ") + e.what();
        }
        out.push_back(row);
      }
      return out;
    });
    for (auto& v : rows)
      for (auto& row : v) res.coupling.push_back(std::move(row));
  }

  if (parts.events) {
    res.params = GoodEventParams::make(cfg.c.to_double(), static_cast<double>(a_size) / cfg.n, cfg.phi.to_double(),
                                       cfg.k ? std::optional<double>(cfg.k->to_double()) : std::nullopt,
                                       cfg.eta ? std::optional<double>(cfg.eta->to_double()) : std::nullopt);
    const auto [lo, hi] = regime_ranks(cfg, a_size);
    const double eps = cfg.epsilon.to_double();
    const double alpha = static_cast<double>(a_size) / cfg.n;
    const std::size_t per_mu = cfg.runs;
    struct Part {
      std::vector<GoodEventRow> events;
      std::vector<LifetimeRow> lifetimes;
    };
    auto parts_out = parallel_map<Part>(cfg.events_mu_grid.size() * per_mu, cfg.threads, [&](std::size_t t) {
      const std::uint32_t m = cfg.events_mu_grid[t / per_mu];
      const auto r = static_cast<std::uint32_t>(t % per_mu);
      const std::uint64_t seed = run_seed(cfg.seed, kEventsPoint + t / per_mu, r);
      const RunRecord rec = aux_record(ev, cfg, mode, m, seed);
      Part p;
      const double bound = 8 * std::exp(alpha * cfg.c.to_double()) * m * std::log(static_cast<double>(m));
      std::vector<std::int64_t> candidates;
      for (const auto& l : measure_lifetimes(rec)) {
        if (l.rank < lo || l.rank > hi) continue;
        p.lifetimes.push_back({m, r, seed, l, bound});
        if (l.rank > rec.summary.initial_max_rank) candidates.push_back(l.rank);
      }
      // Evenly spaced thresholds among the completed regime ranks.
      std::set<std::int64_t> chosen;
      if (!candidates.empty()) {
        const std::size_t want = std::min(kMaxThresholds, candidates.size());
        for (std::size_t j = 0; j < want; ++j) chosen.insert(candidates[j * candidates.size() / want]);
      }
      const GoodEventContext ctx{static_cast<double>(m), eps, cfg.n};
      for (std::int64_t i : chosen) {
        const FamilyForest f = build_family_forest(rec, i);
        p.events.push_back({m, r, seed, i, check_good_events(rec, f, res.params, ctx, i)});
      }
      return p;
    });
    for (auto& p : parts_out) {
      for (auto& e : p.events) res.events.push_back(e);
      for (auto& l : p.lifetimes) res.lifetimes.push_back(l);
    }
  }
  return res;
}

void write_forest_stats(const ForestStatsResult& r, const std::string& dir) {
  if (!r.depths.empty()) {
    auto out = detail::open_csv(dir, "forest_depth.csv");
    out << csv_header("forest_depth.v1", "mu,T,reps,depth,mean,sd,se,bound,within");
    for (const auto& d : r.depths)
      out << r.mu << ',' << r.T << ',' << r.reps << ',' << d.depth << ',' << fmt(d.mean) << ',' << fmt(d.sd) << ','
          << fmt(d.se) << ',' << fmt(d.bound) << ',' << (d.within ? 1 : 0) << '\n';
    auto s = detail::open_csv(dir, "forest_summary.csv");
    s << csv_header("forest_summary.v1", "mu,T,reps,roots_min,roots_max,roots_expected,explicit_reps,explicit_ok");
    s << r.mu << ',' << r.T << ',' << r.reps << ',' << r.roots_min << ',' << r.roots_max << ',' << r.T + 1 << ','
      << r.explicit_reps << ',' << (r.explicit_roots_ok ? 1 : 0) << '\n';
  }
  if (!r.coupling.empty()) {
    auto out = detail::open_csv(dir, "coupling.csv");
    out << csv_header("coupling.v1", "mu,T,seed,i,t_i,family_nodes,reference_nodes,embedded,failure");
    for (const auto& c : r.coupling)
      out << c.mu << ',' << c.T << ',' << c.seed << ',' << c.i << ',' << c.t_i << ',' << c.family_nodes << ','
          << c.reference_nodes << ',' << (c.embedded ? 1 : 0) << ",\"" << c.failure << "\"\n";
  }
  if (!r.events.empty() || !r.lifetimes.empty()) {
    auto out = detail::open_csv(dir, "good_events.csv");
    out << csv_header("good_events.v1", "mu,run,seed,i,K,eta_feasible,a,b,c,d,e,all,roots,d_outside_regime");
    for (const auto& g : r.events) {
      const auto& e = g.events;
      out << g.mu << ',' << g.run << ',' << g.seed << ',' << g.i << ',' << r.params.K << ','
          << (r.params.eta_feasible ? 1 : 0) << ',' << e.a << ',' << e.b << ',' << e.c << ','
          << (e.d ? std::to_string(*e.d ? 1 : 0) : "unknown") << ',' << e.e << ',' << e.all() << ',' << e.roots
          << ',' << e.d_outside_regime << '\n';
    }
    auto lt = detail::open_csv(dir, "lifetimes.csv");
    lt << csv_header("lifetimes.v1", "mu,run,seed,rank,t_i,T_i,span,bound,within");
    for (const auto& l : r.lifetimes) {
      const auto span = l.life.last_death - l.life.first_birth;
      lt << l.mu << ',' << l.run << ',' << l.seed << ',' << l.life.rank << ',' << l.life.first_birth << ','
         << l.life.last_death << ',' << span << ',' << fmt(l.bound) << ','
         << (static_cast<double>(span) <= l.bound ? 1 : 0) << '\n';
    }
  }
}

}  // namespace htea::exp
