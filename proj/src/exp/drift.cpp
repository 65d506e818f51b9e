#include <cmath>
#include <stdexcept>

#include "htea/analysis/events.hpp"
#include "htea/analysis/zseries.hpp"
#include "htea/exp/experiments.hpp"
#include "htea/exp/runtime.hpp"
#include "internal.hpp"

namespace htea::exp {

DriftResult run_drift(const ExperimentConfig& cfg) {
  cfg.validate();
  const FitnessMode mode = FitnessMode::parse(cfg.mode);
  if (mode.kind != FitnessMode::Kind::aux_linear) throw std::invalid_argument("drift: mode must be aux_linear");
  const auto inst = HotTopicInstance::generate(cfg.instance_params(), cfg.entry_cap);
  const Evaluator ev(&inst, mode);
  const std::size_t a_size = inst.A(mode.ell + 1).size();

  DriftResult res;
  res.mu = cfg.mu;
  res.n = cfg.n;
  res.c = cfg.c;
  res.K = cfg.drift_K;
  if (res.K == 0) {
    const auto gp = GoodEventParams::make(cfg.c.to_double(), static_cast<double>(a_size) / cfg.n, cfg.phi.to_double(),
                                          cfg.k ? std::optional<double>(cfg.k->to_double()) : std::nullopt,
                                          cfg.eta ? std::optional<double>(cfg.eta->to_double()) : std::nullopt);
    res.K = gp.K;
  }
  const auto [lo, hi] = regime_ranks(cfg, a_size);
  if (hi - lo < static_cast<std::int64_t>(res.K))
    throw std::invalid_argument("drift: regime [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                "] holds fewer than K + 1 = " + std::to_string(res.K + 1) + " ranks; raise n");
  res.start_lo = lo;
  res.start_hi = hi - static_cast<std::int64_t>(res.K);

  const double mu = cfg.mu;
  std::vector<DriftEstimate> est(cfg.runs);
  res.runs = parallel_map<DriftRun>(cfg.runs, cfg.threads, [&](std::size_t r) {
    DriftRun run;
    run.seed = run_seed(cfg.seed, 0, r);
    EAConfig e = detail::ea_config(cfg, cfg.mu, cfg.c, mode, cfg.effective_budget(cfg.L), run.seed);
    e.init_zero_density = cfg.init_density_value();
    ZTracker zt(a_size);
    const RunRecord rec = run_ea(ev, e, zt.hooks());
    const ZSeries z = zt.finish(rec.summary);
    run.evaluations = rec.summary.evaluations;
    if (!z.empty()) {
      run.z_min = z.i_min;
      run.z_max = z.i_max();
      run.z = z.z;
      run.observed = z.observed;
      const std::int64_t from = std::max(res.start_lo, z.i_min);
      const std::int64_t to = std::min(res.start_hi, z.i_max() - static_cast<std::int64_t>(res.K));
      if (from <= to) {
        const DriftEstimate d = truncated_drift(z, res.K, mu, from, to);
        est[r] = d;
        run.windows = d.count;
        run.mean = d.mean();
        run.se = d.std_error();
      }
    }
    return run;
  });

  DriftEstimate pooled;
  std::vector<double> means;
  for (std::size_t r = 0; r < res.runs.size(); ++r) {
    pooled.merge(est[r]);
    if (res.runs[r].windows > 0) means.push_back(res.runs[r].mean);
  }
  res.windows = pooled.count;
  res.pooled_mean = pooled.count ? pooled.mean() : std::nan("");
  res.runs_used = static_cast<std::uint32_t>(means.size());
  const auto m = detail::moments(means);
  res.run_mean = means.empty() ? std::nan("") : m.mean;
  if (means.size() >= 2) {
    res.run_se = m.std / std::sqrt(static_cast<double>(means.size()));
    const double t = t_quantile_975(static_cast<std::uint32_t>(means.size() - 1));
    res.ci_low = res.run_mean - t * res.run_se;
    res.ci_high = res.run_mean + t * res.run_se;
  } else {
    res.run_se = res.ci_low = res.ci_high = std::nan("");
  }
  return res;
}

void write_drift(const DriftResult& r, const std::string& dir) {
  {
    auto out = detail::open_csv(dir, "drift_runs.csv");
    out << csv_header("drift_runs.v1", "run,seed,mu,c,K,evaluations,z_min,z_max,windows,mean,se");
    for (std::size_t k = 0; k < r.runs.size(); ++k) {
      const auto& d = r.runs[k];
      out << k << ',' << d.seed << ',' << r.mu << ',' << r.c.text() << ',' << r.K << ',' << d.evaluations << ','
          << d.z_min << ',' << d.z_max << ',' << d.windows << ',' << (d.windows ? fmt(d.mean) : "nan") << ','
          << (d.windows ? fmt(d.se) : "nan") << '\n';
    }
  }
  {
    auto out = detail::open_csv(dir, "drift_summary.csv");
    out << csv_header("drift_summary.v1",
                      "mu,c,n,K,start_lo,start_hi,runs,runs_used,windows,pooled_mean,run_mean,run_se,ci_low,ci_high,"
                      "floor");
    out << r.mu << ',' << r.c.text() << ',' << r.n << ',' << r.K << ',' << r.start_lo << ',' << r.start_hi << ','
        << r.runs.size() << ',' << r.runs_used << ',' << r.windows << ',' << fmt(r.pooled_mean) << ','
        << fmt(r.run_mean) << ',' << fmt(r.run_se) << ',' << fmt(r.ci_low) << ',' << fmt(r.ci_high) << ','
        << fmt(-std::log(static_cast<double>(r.mu))) << '\n';
  }
  auto out = detail::open_csv(dir, "zseries.csv");
  out << csv_header("zseries.v1", "run,rank,z,observed");
  for (std::size_t k = 0; k < r.runs.size(); ++k) {
    const auto& d = r.runs[k];
    for (std::size_t j = 0; j < d.z.size(); ++j)
      out << k << ',' << d.z_min + static_cast<std::int64_t>(j) << ',' << d.z[j] << ',' << (d.observed[j] ? 1 : 0)
          << '\n';
  }
}

}  // namespace htea::exp
