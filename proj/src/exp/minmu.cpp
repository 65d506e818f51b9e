#include <map>
#include <stdexcept>

#include "htea/exp/experiments.hpp"
#include "htea/exp/runtime.hpp"
#include "internal.hpp"

namespace htea::exp {

MinMuResult run_min_mu(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.minmu_c_grid.empty()) throw std::invalid_argument("min-mu: minmu_c_grid is empty");
  if (cfg.success_runs < 1 || cfg.success_runs > cfg.runs)
    throw std::invalid_argument("min-mu: success_runs must lie in [1, runs]");
  const FitnessMode mode = FitnessMode::parse(cfg.mode);
  if (mode.kind != FitnessMode::Kind::hottopic && mode.kind != FitnessMode::Kind::capped_level)
    throw std::invalid_argument("min-mu: mode must be hottopic or capped_level");
  const auto inst = HotTopicInstance::generate(cfg.instance_params(), cfg.entry_cap);
  const Evaluator ev(&inst, mode);
  MinMuResult res;
  res.cap = cfg.mu_cap;

  for (std::size_t ci = 0; ci < cfg.minmu_c_grid.size(); ++ci) {
    const Decimal& c = cfg.minmu_c_grid[ci];
    std::map<std::uint32_t, bool> seen;
    auto probe = [&](std::uint32_t mu, std::uint32_t resample) {
      MinMuProbe pr;
      pr.c_index = ci;
      pr.mu = mu;
      pr.resample = resample;
      pr.runs = parallel_map<RunOutcome>(cfg.runs, cfg.threads, [&](std::size_t r) {
        RunOutcome o;
        o.seed = minmu_seed(cfg.seed, ci, mu, resample, r);
        EAConfig e = detail::ea_config(cfg, mu, c, mode, cfg.effective_budget(cfg.L), o.seed);
        e.level_stop = EAConfig::LevelStop::decided;
        o.summary = run_ea(ev, e).summary;
        return o;
      });
      for (const auto& o : pr.runs) pr.successes += o.summary.all_levels_visited ? 1 : 0;
      pr.success = pr.successes >= cfg.success_runs;
      if (resample == 0) seen[mu] = pr.success;
      res.probes.push_back(pr);
      return pr.success;
    };

    MinMuRow row;
    row.c = c;
    std::uint32_t lo = 0;
    std::optional<std::uint32_t> hi;
    for (std::uint64_t mu = 1;; mu *= 2) {
      const auto m = static_cast<std::uint32_t>(std::min<std::uint64_t>(mu, cfg.mu_cap));
      if (probe(m, 0)) {
        hi = m;
        break;
      }
      lo = m;
      if (m == cfg.mu_cap) break;
    }
    if (!hi) {
      row.resolution = "above_cap";
      res.rows.push_back(row);
      continue;
    }
    while (*hi - lo > 1) {
      const std::uint32_t mid = lo + (*hi - lo) / 2;
      if (probe(mid, 0)) hi = mid;
      else lo = mid;
    }
    if (probe(*hi, 1)) {
      row.min_mu = *hi;
      row.resolution = "confirmed";
    } else {
      auto up = seen.upper_bound(*hi);
      while (up != seen.end() && !up->second) ++up;
      if (up != seen.end()) {
        row.min_mu = up->first;
        row.resolution = "resolved_upward";
      } else {
        row.min_mu = *hi;
        row.resolution = "unconfirmed";
      }
    }
    res.rows.push_back(row);
  }
  return res;
}

void write_min_mu(const MinMuResult& r, const std::string& dir) {
  {
    auto out = detail::open_csv(dir, "minmu.csv");
    out << csv_header("minmu.v1", "c,min_mu,above_cap,cap,resolution");
    for (const auto& row : r.rows)
      out << row.c.text() << ',' << (row.min_mu ? std::to_string(*row.min_mu) : ">" + std::to_string(r.cap)) << ','
          << (row.min_mu ? 0 : 1) << ',' << r.cap << ',' << row.resolution << '\n';
  }
  {
    auto out = detail::open_csv(dir, "minmu_probes.csv");
    out << csv_header("minmu_probes.v1", "c_index,c,mu,resample,successes,runs,success");
    for (const auto& p : r.probes)
      out << p.c_index << ',' << r.rows.at(p.c_index).c.text() << ',' << p.mu << ',' << p.resample << ','
          << p.successes << ',' << p.runs.size() << ',' << (p.success ? 1 : 0) << '\n';
  }
  auto out = detail::open_csv(dir, "minmu_runs.csv");
  out << csv_header("minmu_runs.v1",
                    "c_index,c,mu,resample,run,seed,all_levels_visited,visited_levels,evaluations,stop");
  for (const auto& p : r.probes)
    for (std::size_t k = 0; k < p.runs.size(); ++k) {
      const auto& s = p.runs[k].summary;
      out << p.c_index << ',' << r.rows.at(p.c_index).c.text() << ',' << p.mu << ',' << p.resample << ',' << k << ','
          << p.runs[k].seed << ',' << (s.all_levels_visited ? 1 : 0) << ',' << s.visited_levels << ','
          << s.evaluations << ',' << detail::stop_name(s.stop) << '\n';
    }
}

}  // namespace htea::exp
