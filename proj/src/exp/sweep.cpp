#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "htea/exp/experiments.hpp"
#include "htea/exp/runtime.hpp"
#include "internal.hpp"

namespace htea::exp {

namespace {

double runtime_of(const RunSummary& s) {
  return static_cast<double>(s.optimum_evaluation ? *s.optimum_evaluation : s.evaluations);
}

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t k = 0; k < idx.size();) {
    std::size_t e = k;
    while (e + 1 < idx.size() && v[idx[e + 1]] == v[idx[k]]) ++e;
    const double avg = (static_cast<double>(k) + static_cast<double>(e)) / 2 + 1;
    for (std::size_t j = k; j <= e; ++j) rank[idx[j]] = avg;
    k = e + 1;
  }
  return rank;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman: need two equal-length samples");
  const auto rx = average_ranks(x), ry = average_ranks(y);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / static_cast<double>(rx.size());
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / static_cast<double>(ry.size());
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    sxy += (rx[k] - mx) * (ry[k] - my);
    sxx += (rx[k] - mx) * (rx[k] - mx);
    syy += (ry[k] - my) * (ry[k] - my);
  }
  if (sxx == 0 || syy == 0) return std::nan("");
  return sxy / std::sqrt(sxx * syy);
}

SweepResult run_sweep(const ExperimentConfig& cfg, const std::string& axis) {
  cfg.validate();
  SweepResult res;
  res.axis = axis;
  if (axis == "mu") {
    if (cfg.mu_grid.empty()) throw std::invalid_argument("sweep-mu: mu_grid is empty");
    for (auto mu : cfg.mu_grid) res.points.push_back({mu, cfg.c, cfg.L});
  } else if (axis == "c") {
    if (cfg.c_grid.empty()) throw std::invalid_argument("sweep-c: c_grid is empty");
    const std::vector<std::uint32_t> Ls = cfg.L_grid.empty() ? std::vector<std::uint32_t>{cfg.L} : cfg.L_grid;
    for (auto L : Ls)
      for (const auto& c : cfg.c_grid) res.points.push_back({cfg.mu, c, L});
  } else {
    throw std::invalid_argument("sweep: axis must be mu or c");
  }
  const FitnessMode mode = FitnessMode::parse(cfg.mode);
  std::map<std::uint32_t, HotTopicInstance> instances;
  for (const auto& p : res.points)
    if (!instances.count(p.L) && mode.kind != FitnessMode::Kind::onemax)
      instances.emplace(p.L, HotTopicInstance::generate(cfg.instance_params(p.L), cfg.entry_cap));

  const std::size_t tasks = res.points.size() * cfg.runs;
  res.rows = parallel_map<SweepRow>(tasks, cfg.threads, [&](std::size_t t) {
    SweepRow row;
    row.point = t / cfg.runs;
    row.run = static_cast<std::uint32_t>(t % cfg.runs);
    const SweepPoint& p = res.points[row.point];
    const HotTopicInstance* inst = mode.kind == FitnessMode::Kind::onemax ? nullptr : &instances.at(p.L);
    const Evaluator ev(inst, mode, cfg.n);
    row.outcome.seed = run_seed(cfg.seed, row.point, row.run);
    const EAConfig e = detail::ea_config(cfg, p.mu, p.c, mode, cfg.effective_budget(p.L), row.outcome.seed);
    row.outcome.summary = run_ea(ev, e).summary;
    return row;
  });
  return res;
}

std::vector<SweepSummaryRow> summarize(const SweepResult& r) {
  std::vector<SweepSummaryRow> out(r.points.size());
  std::vector<std::vector<double>> rt(r.points.size()), vis(r.points.size());
  for (std::size_t k = 0; k < r.points.size(); ++k) {
    out[k].point = k;
    out[k].at = r.points[k];
  }
  for (const auto& row : r.rows) {
    const auto& s = row.outcome.summary;
    SweepSummaryRow& o = out.at(row.point);
    ++o.runs;
    o.censored_runs += s.censored ? 1 : 0;
    o.all_visited_runs += s.all_levels_visited ? 1 : 0;
    rt[row.point].push_back(runtime_of(s));
    vis[row.point].push_back(s.visited_levels);
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto a = detail::moments(rt[k]);
    const auto b = detail::moments(vis[k]);
    out[k].runtime_mean = a.mean;
    out[k].runtime_std = a.std;
    out[k].runtime_min = a.min;
    out[k].runtime_max = a.max;
    out[k].visited_mean = b.mean;
    out[k].visited_std = b.std;
    out[k].visited_min = b.min;
    out[k].visited_max = b.max;
  }
  return out;
}

void write_sweep(const SweepResult& r, const std::string& dir) {
  {
    auto out = detail::open_csv(dir, "sweep.csv");
    out << csv_header("sweep.v1",
                      "axis,point,mu,c,L,run,seed,runtime,evaluations,optimum_found,censored,visited_levels,"
                      "all_levels_visited,final_level,stop");
    for (const auto& row : r.rows) {
      const auto& p = r.points[row.point];
      const auto& s = row.outcome.summary;
      out << r.axis << ',' << row.point << ',' << p.mu << ',' << p.c.text() << ',' << p.L << ',' << row.run << ','
          << row.outcome.seed << ',' << fmt(runtime_of(s)) << ',' << s.evaluations << ','
          << (s.optimum_evaluation ? 1 : 0) << ',' << (s.censored ? 1 : 0) << ',' << s.visited_levels << ','
          << (s.all_levels_visited ? 1 : 0) << ',' << s.final_best_level << ',' << detail::stop_name(s.stop) << '\n';
    }
  }
  auto out = detail::open_csv(dir, "sweep_summary.csv");
  out << csv_header("sweep_summary.v1",
                    "axis,point,mu,c,L,runs,censored_runs,runtime_mean,runtime_std,runtime_min,runtime_max,"
                    "visited_mean,visited_std,visited_min,visited_max,all_visited_runs");
  for (const auto& s : summarize(r)) {
    out << r.axis << ',' << s.point << ',' << s.at.mu << ',' << s.at.c.text() << ',' << s.at.L << ',' << s.runs << ','
        << s.censored_runs << ',' << fmt(s.runtime_mean) << ',' << fmt(s.runtime_std) << ',' << fmt(s.runtime_min)
        << ',' << fmt(s.runtime_max) << ',' << fmt(s.visited_mean) << ',' << fmt(s.visited_std) << ','
        << fmt(s.visited_min) << ',' << fmt(s.visited_max) << ',' << s.all_visited_runs << '\n';
  }
}

}  // namespace htea::exp
