// Command-line front end: htea <command> [flags].

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "htea/exp/config.hpp"
#include "htea/exp/experiments.hpp"
#include "htea/exp/runtime.hpp"
#include "htea/exp/suites.hpp"
#include "json.hpp"

using namespace htea;
using namespace htea::exp;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::uint32_t> runs;
  std::string preset = "desk";
  std::optional<std::uint32_t> threads;
  std::vector<std::string> sets;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config, "key = value config file");
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--runs", f.runs, "runs per point");
  sub->add_option("--preset", f.preset, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
  sub->add_option("--threads", f.threads, "worker threads");
  sub->add_option("--set", f.sets, "key=value override (repeatable)");
}

// preset, then command defaults, then the config file, then flags.
ExperimentConfig resolve(const std::string& command, const CommonFlags& f) {
  ExperimentConfig cfg = preset_config(f.preset);
  apply_command_defaults(cfg, command);
  if (!f.config.empty())
    for (const auto& [k, v] : read_config_file(f.config)) set_key(cfg, k, v);
  if (f.seed) cfg.seed = *f.seed;
  if (f.out) cfg.out = *f.out;
  if (f.runs) cfg.runs = *f.runs;
  if (f.threads) cfg.threads = *f.threads;
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got " + s);
    set_key(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  cfg.validate();
  if (cfg.preset == "paper")
    std::cerr << "warning: paper preset (n=" << cfg.n << ") runs for hours; use --threads to spread the work\n";
  return cfg;
}

void write_metadata(const ExperimentConfig& cfg, const std::string& command, double seconds,
                    const nlohmann::ordered_json& extra = {}) {
  nlohmann::ordered_json j;
  j["tool"] = "htea";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["wall_seconds"] = seconds;
  nlohmann::ordered_json c;
  for (const auto& [k, v] : cfg.entries()) c[k] = v;
  c["effective_budget"] = cfg.effective_budget(cfg.L);
  j["config"] = c;
  if (!extra.is_null()) j["result"] = extra;
  std::filesystem::create_directories(cfg.out);
  std::ofstream out(std::filesystem::path(cfg.out) / "metadata.json");
  out << j.dump(2) << '\n';
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HotTopic (mu+1)-EA experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  CommonFlags f;
  std::string suite = "all";
  std::optional<std::string> fault;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"generate", "write a HotTopic instance dump"},
      {"trajectory", "best-individual trajectories at one (mu, c)"},
      {"sweep-mu", "runtime and visited levels over mu_grid"},
      {"sweep-c", "runtime over c_grid for each L in L_grid"},
      {"min-mu", "smallest mu visiting all levels, per c"},
      {"forest-stats", "reference forest, coupling, good events, lifetimes"},
      {"drift", "truncated drift of Z in the drift regime"},
      {"verify", "property suites with a JSON report"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, f);
    subs.push_back(sub);
  }
  CLI::App* verify = subs.back();
  verify->add_option("suite", suite, "exactness, monotonicity, lemma1, forest, drift or all");
  verify->add_option("--inject-fault", fault, "corrupt one cache field in the exactness suite");

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const ExperimentConfig cfg = resolve(command, f);
    const auto t0 = std::chrono::steady_clock::now();
    nlohmann::ordered_json extra;

    if (command == "generate") {
      std::filesystem::create_directories(cfg.out);
      const std::string path = (std::filesystem::path(cfg.out) / "instance.txt").string();
      write_instance(cfg, path);
      std::cout << "wrote " << path << '\n';
    } else if (command == "trajectory") {
      const auto r = run_trajectory(cfg);
      write_trajectory(r, cfg.out);
      for (std::size_t k = 0; k < r.runs.size(); ++k) {
        const auto& s = r.runs[k].summary;
        std::cout << "run " << k << ": evaluations " << s.evaluations << ", visited " << s.visited_levels << "/"
                  << cfg.L << (s.censored ? ", censored" : "") << '\n';
      }
    } else if (command == "sweep-mu" || command == "sweep-c") {
      const auto r = run_sweep(cfg, command == "sweep-mu" ? "mu" : "c");
      write_sweep(r, cfg.out);
      const auto sum = summarize(r);
      std::cout << "point mu c L runtime_mean runtime_std visited_mean all_visited censored\n";
      std::vector<double> mus, vis;
      for (const auto& s : sum) {
        std::cout << s.point << ' ' << s.at.mu << ' ' << s.at.c.text() << ' ' << s.at.L << ' '
                  << fmt(s.runtime_mean) << ' ' << fmt(s.runtime_std) << ' ' << fmt(s.visited_mean) << ' '
                  << s.all_visited_runs << '/' << s.runs << ' ' << s.censored_runs << '\n';
        mus.push_back(s.at.mu);
        vis.push_back(s.visited_mean);
      }
      if (command == "sweep-mu" && sum.size() >= 2) {
        extra["spearman_mu_visited"] = spearman(mus, vis);
        std::cout << "spearman(mu, visited_mean) = " << fmt(spearman(mus, vis)) << '\n';
      }
    } else if (command == "min-mu") {
      const auto r = run_min_mu(cfg);
      write_min_mu(r, cfg.out);
      for (const auto& row : r.rows)
        std::cout << "c " << row.c.text() << ": " << (row.min_mu ? std::to_string(*row.min_mu) : ">" + std::to_string(r.cap))
                  << " (" << row.resolution << ")\n";
    } else if (command == "forest-stats") {
      const auto r = run_forest_stats(cfg);
      write_forest_stats(r, cfg.out);
      for (const auto& d : r.depths)
        std::cout << "depth " << d.depth << ": mean " << fmt(d.mean) << " bound " << fmt(d.bound)
                  << (d.within ? "" : "  EXCEEDS") << '\n';
      std::cout << "roots " << r.roots_min << ".." << r.roots_max << " (T+1 = " << r.T + 1 << ")\n";
      std::size_t emb = 0, chk = 0;
      for (const auto& c : r.coupling)
        if (c.failure.rfind("skipped", 0) != 0) ++chk, emb += c.embedded;
      std::cout << "coupling: " << emb << "/" << chk << " embedded\n";
      std::cout << "good events: K " << r.params.K << ", eta " << (r.params.eta_feasible ? "feasible" : "infeasible")
                << " (bound " << fmt(r.params.eta_bound) << "), " << r.events.size() << " thresholds\n";
    } else if (command == "drift") {
      const auto r = run_drift(cfg);
      write_drift(r, cfg.out);
      std::cout << "K " << r.K << ", window starts [" << r.start_lo << ", " << r.start_hi << "], " << r.windows
                << " windows over " << r.runs_used << " runs\n"
                << "pooled mean " << fmt(r.pooled_mean) << ", run mean " << fmt(r.run_mean) << " 95% CI ["
                << fmt(r.ci_low) << ", " << fmt(r.ci_high) << "], floor " << fmt(-std::log(double(r.mu))) << '\n';
      extra["run_mean"] = r.run_mean;
      extra["ci_high"] = r.ci_high;
      extra["windows"] = r.windows;
    } else if (command == "verify") {
      std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
      std::vector<SuiteReport> reports;
      SuiteOptions opt;
      opt.seed = cfg.seed;
      opt.threads = cfg.threads;
      opt.inject_fault = fault;
      for (const auto& name : names) {
        reports.push_back(run_suite(name, opt));
        const auto& rep = reports.back();
        for (const auto& c : rep.checks)
          std::cout << (c.pass ? "pass " : "FAIL ") << rep.suite << ": " << c.name << " [" << c.detail << "]\n";
      }
      const std::string json = suite_report_json(reports);
      std::filesystem::create_directories(cfg.out);
      std::ofstream(std::filesystem::path(cfg.out) / "verify.json") << json << '\n';
      bool ok = true;
      for (const auto& r : reports) ok = ok && r.pass;
      extra["pass"] = ok;
      write_metadata(cfg, command, since(t0), extra);
      std::cout << (ok ? "verify: pass\n" : "verify: FAIL\n");
      return ok ? 0 : 1;
    }
    write_metadata(cfg, command, since(t0), extra);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
