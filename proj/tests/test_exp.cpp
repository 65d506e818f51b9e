#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "htea/exp/config.hpp"
#include "htea/exp/experiments.hpp"
#include "htea/exp/runtime.hpp"
#include "htea/exp/suites.hpp"

using namespace htea;
using namespace htea::exp;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("htea_test_exp_" + name);
  std::filesystem::remove_all(p);
  return p;
}

// Small sweep config: n=300, L=5, two mu values, 3 runs.
ExperimentConfig small_sweep() {
  ExperimentConfig cfg = preset_config("desk");
  cfg.n = 300;
  cfg.L = 5;
  cfg.runs = 3;
  cfg.mu_grid = {2, 8};
  cfg.budget = 20000;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("seed derivation vectors") {
  // Frozen from an independent Python transcription of the mixer.
  CHECK(run_seed(1, 0, 0) == 5235605315721241185ULL);
  CHECK(run_seed(1, 0, 1) == 18109226854557224599ULL);
  CHECK(run_seed(1, 2, 3) == 16199847704955206533ULL);
  CHECK(minmu_seed(1, 0, 8, 1, 4) == 16870941592111192534ULL);
}

TEST_CASE("grids") {
  CHECK(parse_uint_grid("5,10,20") == std::vector<std::uint32_t>{5, 10, 20});
  CHECK(parse_uint_grid("10:50:20") == std::vector<std::uint32_t>{10, 30, 50});
  const auto c = parse_decimal_grid("0.7:1.0:0.1");
  REQUIRE(c.size() == 4);
  CHECK(c[3].text() == "1");
  CHECK(c[1].text() == "0.8");
  CHECK(parse_decimal_grid("0.6:2.0:0.2").size() == 8);
  CHECK_THROWS_AS(parse_decimal_grid("1:0:0.1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_uint_grid("1:5"), std::invalid_argument);
  CHECK(parse_uint_grid("").empty());
  // Ordering is a config invariant, enforced by validate().
  ExperimentConfig cfg = preset_config("desk");
  set_key(cfg, "mu_grid", "5,5");
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  set_key(cfg, "mu_grid", "20,10");
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  set_key(cfg, "mu_grid", "10,20");
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config keys and presets") {
  ExperimentConfig cfg = preset_config("desk");
  CHECK(cfg.n == 3000);
  CHECK(cfg.L == 50);
  CHECK(cfg.mu_grid == std::vector<std::uint32_t>{5, 10, 20, 50, 100, 200});
  CHECK(cfg.c_grid.back().text() == "2");
  const ExperimentConfig paper = preset_config("paper");
  CHECK(paper.n == 10000);
  CHECK(paper.L == 100);
  CHECK(paper.mu_grid.size() == 10);
  CHECK_THROWS_AS(preset_config("huge"), std::invalid_argument);

  set_key(cfg, "mu", "70");
  set_key(cfg, "c", "1.3");
  set_key(cfg, "mu_grid", "1,2,4");
  CHECK(cfg.mu == 70);
  CHECK(cfg.c.text() == "1.3");
  CHECK(cfg.mu_grid == std::vector<std::uint32_t>{1, 2, 4});
  CHECK_THROWS_AS(set_key(cfg, "no_such_key", "1"), std::invalid_argument);
  CHECK_THROWS_AS(set_key(cfg, "runs", "ten"), std::invalid_argument);

  // Auto budget: budget_factor * n * L.
  CHECK(cfg.effective_budget(50) == 200ULL * 3000 * 50);
  set_key(cfg, "budget", "1234");
  CHECK(cfg.effective_budget(50) == 1234);

  const auto kv = parse_config_text("# comment\nn = 400\n  L=7  # trailing\n\nseed = 9\n");
  REQUIRE(kv.size() == 3);
  CHECK(kv[0] == std::pair<std::string, std::string>{"n", "400"});
  CHECK(kv[1] == std::pair<std::string, std::string>{"L", "7"});
  CHECK_THROWS_AS(parse_config_text("just words\n"), std::invalid_argument);

  ExperimentConfig d = preset_config("desk");
  apply_command_defaults(d, "drift");
  CHECK(d.n == 100000);
  CHECK(d.L == 1);
  CHECK(d.mu == 200);
  CHECK(d.mode == "aux_linear(0)");
}

TEST_CASE("every config key round-trips through set_key") {
  const ExperimentConfig a = preset_config("paper");
  ExperimentConfig b = preset_config("desk");
  for (const auto& [k, v] : a.entries())
    if (!v.empty()) set_key(b, k, v);
  CHECK(a.entries() == b.entries());
}

TEST_CASE("parallel_map keeps results at their index") {
  auto f = [](std::size_t k) { return mix(7, k); };
  const auto one = parallel_map<std::uint64_t>(1000, 1, f);
  const auto many = parallel_map<std::uint64_t>(1000, 4, f);
  CHECK(one == many);
  CHECK(one[3] == mix(7, 3));
  CHECK_THROWS_AS(parallel_map<int>(50, 3,
                                    [](std::size_t k) -> int {
                                      if (k == 17) throw std::runtime_error("boom");
                                      return 0;
                                    }),
                  std::runtime_error);
}

TEST_CASE("helpers") {
  CHECK(fmt(0.5) == "0.5");
  CHECK(fmt(3) == "3");
  CHECK(fmt(std::nan("")) == "nan");
  CHECK(csv_header("x.v1", "a,b") == "# schema: x.v1\na,b\n");
  CHECK(t_quantile_975(9) == 2.262);
  CHECK(t_quantile_975(1000) == 1.96);
  CHECK(coupling_horizon(5) == 54);
  CHECK(coupling_horizon(10) == 96);
  CHECK(coupling_horizon(20) == 174);
  CHECK(coupling_horizon(1000) == 200);
  const auto r = regime_ranks(preset_config("desk"), 750);
  CHECK(r.first == 675);
  CHECK(r.second == 731);
  CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  // ranks y = (1, 2.5, 2.5, 4): rho = 4.5 / sqrt(5 * 4.5)
  CHECK(spearman({1, 2, 3, 4}, {1, 5, 5, 9}) == doctest::Approx(4.5 / std::sqrt(5 * 4.5)));
}

TEST_CASE("sweep rows, aggregates and thread independence") {
  ExperimentConfig cfg = small_sweep();
  const auto r = run_sweep(cfg, "mu");
  REQUIRE(r.rows.size() == 6);
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    CHECK(r.rows[k].point == k / 3);
    CHECK(r.rows[k].outcome.seed == run_seed(5, k / 3, k % 3));
    CHECK(r.rows[k].outcome.summary.visited_levels <= cfg.L);
  }
  const auto sum = summarize(r);
  REQUIRE(sum.size() == 2);
  for (const auto& s : sum) {
    double total = 0;
    for (const auto& row : r.rows)
      if (row.point == s.point) {
        const auto& o = row.outcome.summary;
        total += static_cast<double>(o.optimum_evaluation ? *o.optimum_evaluation : o.evaluations);
      }
    CHECK(s.runtime_mean == doctest::Approx(total / 3));
    CHECK(s.runs == 3);
  }

  const auto d1 = scratch_dir("t1"), d4 = scratch_dir("t4");
  write_sweep(r, d1.string());
  cfg.threads = 4;
  write_sweep(run_sweep(cfg, "mu"), d4.string());
  for (const char* f : {"sweep.csv", "sweep_summary.csv"}) {
    const std::string a = slurp(d1 / f);
    CHECK(a.rfind("# schema: sweep", 0) == 0);
    CHECK(a == slurp(d4 / f));
  }
  CHECK_THROWS_AS(run_sweep(cfg, "L"), std::invalid_argument);
}

TEST_CASE("c sweep walks L outer, c inner") {
  ExperimentConfig cfg = small_sweep();
  cfg.c_grid = parse_decimal_grid("0.5,1.0");
  cfg.L_grid = {3, 6};
  cfg.runs = 1;
  const auto r = run_sweep(cfg, "c");
  REQUIRE(r.points.size() == 4);
  CHECK(r.points[1].L == 3);
  CHECK(r.points[1].c.text() == "1");
  CHECK(r.points[2].L == 6);
  CHECK(r.points[2].c.text() == "0.5");
}

TEST_CASE("min-mu search on an easy setting") {
  ExperimentConfig cfg = preset_config("desk");
  cfg.n = 300;
  cfg.L = 3;
  cfg.runs = 4;
  cfg.success_runs = 2;
  cfg.mu_cap = 16;
  cfg.minmu_c_grid = parse_decimal_grid("0.5,3.0");
  cfg.budget = 30000;
  const auto r = run_min_mu(cfg);
  REQUIRE(r.rows.size() == 2);
  for (const auto& row : r.rows) {
    CHECK((row.resolution == "confirmed" || row.resolution == "resolved_upward" ||
           row.resolution == "unconfirmed" || row.resolution == "above_cap"));
    CHECK(row.min_mu.has_value() == (row.resolution != "above_cap"));
    if (row.min_mu) CHECK(*row.min_mu <= 16);
  }
  // Doubling starts at mu = 1.
  CHECK(r.probes.front().mu == 1);
  for (const auto& p : r.probes) CHECK(p.runs.size() == 4);
}

TEST_CASE("drift refuses a regime narrower than K") {
  ExperimentConfig cfg = preset_config("desk");
  apply_command_defaults(cfg, "drift");
  cfg.n = 3000;  // |A| = 750: 57 ranks, K = 1185
  CHECK_THROWS_AS(run_drift(cfg), std::invalid_argument);
}

TEST_CASE("drift on a small run with an explicit K") {
  ExperimentConfig cfg = preset_config("desk");
  apply_command_defaults(cfg, "drift");
  cfg.n = 4000;
  cfg.mu = 20;
  cfg.drift_K = 5;
  cfg.runs = 3;
  cfg.budget = 60000;
  const auto r = run_drift(cfg);
  CHECK(r.K == 5);
  CHECK(r.start_lo == 900);
  CHECK(r.start_hi == 975 - 5);
  std::size_t total = 0;
  for (const auto& run : r.runs) total += run.windows;
  CHECK(total == r.windows);
  if (r.runs_used >= 2) CHECK(r.ci_low <= r.run_mean);
  const auto dir = scratch_dir("drift");
  write_drift(r, dir.string());
  CHECK(slurp(dir / "drift_summary.csv").rfind("# schema: drift_summary.v1\n", 0) == 0);
}

TEST_CASE("trajectory envelope") {
  ExperimentConfig cfg = small_sweep();
  cfg.mu = 4;
  cfg.trace_stride = 50;
  const auto r = run_trajectory(cfg);
  REQUIRE(r.runs.size() == 3);
  for (const auto& run : r.runs) {
    REQUIRE(!run.trace.empty());
    CHECK(run.trace.front().round == 0);
    if (run.summary.optimum_evaluation) CHECK(run.trace.back().best_onemax == cfg.n);
  }
  const auto dir = scratch_dir("traj");
  write_trajectory(r, dir.string());
  CHECK(slurp(dir / "trajectory.csv").rfind("# schema: trajectory.v1\n", 0) == 0);
  CHECK(slurp(dir / "trajectory_envelope.csv").rfind("# schema: trajectory_envelope.v1\n", 0) == 0);
}

TEST_CASE("suites: drift passes, injected fault fails with the field named") {
  SuiteOptions opt;
  CHECK(run_suite("drift", opt).pass);
  opt.inject_fault = "onesA";
  const auto rep = run_suite("exactness", opt);
  CHECK(!rep.pass);
  REQUIRE(!rep.checks.empty());
  CHECK(rep.checks[0].detail.find("onesA[1]") != std::string::npos);
  CHECK_THROWS_AS(run_suite("nope", SuiteOptions{}), std::invalid_argument);
  opt.inject_fault = "bogus";
  CHECK_THROWS_AS(run_suite("exactness", opt), std::invalid_argument);
}
