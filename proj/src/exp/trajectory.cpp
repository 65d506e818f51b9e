#include <algorithm>
#include <set>

#include "htea/exp/experiments.hpp"
#include "htea/exp/runtime.hpp"
#include "internal.hpp"

namespace htea::exp {

TrajectoryResult run_trajectory(const ExperimentConfig& cfg) {
  cfg.validate();
  const FitnessMode mode = FitnessMode::parse(cfg.mode);
  TrajectoryResult res;
  res.n = cfg.n;
  res.L = cfg.L;
  res.mu = cfg.mu;
  res.c = cfg.c;
  std::optional<HotTopicInstance> inst;
  if (mode.kind != FitnessMode::Kind::onemax) inst = HotTopicInstance::generate(cfg.instance_params(), cfg.entry_cap);
  const Evaluator ev(inst ? &*inst : nullptr, mode, cfg.n);
  res.runs = parallel_map<RunOutcome>(cfg.runs, cfg.threads, [&](std::size_t r) {
    RunOutcome o;
    o.seed = run_seed(cfg.seed, 0, r);
    EAConfig e = detail::ea_config(cfg, cfg.mu, cfg.c, mode, cfg.effective_budget(cfg.L), o.seed);
    e.trace_stride = cfg.trace_stride;
    RunRecord rec = run_ea(ev, e);
    o.summary = std::move(rec.summary);
    o.trace = std::move(rec.trace);
    return o;
  });
  return res;
}

void write_trajectory(const TrajectoryResult& r, const std::string& dir) {
  const double n = r.n;
  const double L = r.L;
  auto density = [&](const TracePoint& p) { return (n - p.best_onemax) / n; };
  auto remaining = [&](const TracePoint& p) { return L > 0 ? (L - p.best_level) / L : 0.0; };
  {
    auto out = detail::open_csv(dir, "trajectory.csv");
    out << csv_header("trajectory.v1",
                      "run,seed,mu,c,round,evaluations,density,remaining_levels,level,hot,rest,censored");
    for (std::size_t k = 0; k < r.runs.size(); ++k) {
      const auto& run = r.runs[k];
      for (std::size_t t = 0; t < run.trace.size(); ++t) {
        const TracePoint& p = run.trace[t];
        const bool last = t + 1 == run.trace.size();
        out << k << ',' << run.seed << ',' << r.mu << ',' << r.c.text() << ',' << p.round << ',' << p.evaluations
            << ',' << fmt(density(p)) << ',' << fmt(remaining(p)) << ',' << p.best_level << ','
            << p.best_fitness.hot << ',' << p.best_fitness.rest << ',' << (last && run.summary.censored ? 1 : 0)
            << '\n';
      }
    }
  }
  std::set<std::uint64_t> rounds;
  for (const auto& run : r.runs)
    for (const auto& p : run.trace) rounds.insert(p.round);
  auto out = detail::open_csv(dir, "trajectory_envelope.csv");
  out << csv_header("trajectory_envelope.v1",
                    "round,runs,density_min,density_mean,density_max,remaining_min,remaining_mean,remaining_max,"
                    "finished_runs,censored_runs");
  std::vector<std::size_t> at(r.runs.size(), 0);
  for (std::uint64_t round : rounds) {
    std::vector<double> d, rem;
    std::size_t finished = 0, censored = 0;
    for (std::size_t k = 0; k < r.runs.size(); ++k) {
      const auto& tr = r.runs[k].trace;
      if (tr.empty()) continue;
      while (at[k] + 1 < tr.size() && tr[at[k] + 1].round <= round) ++at[k];
      const TracePoint& p = tr[at[k]];
      d.push_back(density(p));
      rem.push_back(remaining(p));
      if (tr.back().round <= round) {
        ++finished;
        censored += r.runs[k].summary.censored ? 1 : 0;
      }
    }
    const auto md = detail::moments(d);
    const auto mr = detail::moments(rem);
    out << round << ',' << d.size() << ',' << fmt(md.min) << ',' << fmt(md.mean) << ',' << fmt(md.max) << ','
        << fmt(mr.min) << ',' << fmt(mr.mean) << ',' << fmt(mr.max) << ',' << finished << ',' << censored << '\n';
  }
}

}  // namespace htea::exp
