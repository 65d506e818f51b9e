#include "htea/exp/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "htea/analysis/local_probs.hpp"
#include "htea/analysis/zseries.hpp"
#include "htea/core/mutation.hpp"
#include "htea/engine/ea.hpp"
#include "htea/exp/experiments.hpp"
#include "htea/exp/runtime.hpp"
#include "htea/hottopic/fitness.hpp"
#include "json.hpp"

namespace htea::exp {

void SuiteReport::add(std::string name, bool ok, std::string detail) {
  pass = pass && ok;
  checks.push_back({std::move(name), ok, std::move(detail)});
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"exactness", "monotonicity", "lemma1", "forest", "drift"};
  return names;
}

namespace {

template <class T>
std::string str(const T& v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

HotTopicInstance make_instance(std::uint32_t n, std::uint32_t L, std::uint64_t seed, const char* eps = "0.05") {
  return HotTopicInstance::generate(HotTopicParams::make(n, "0.25", "0.05", eps, L, seed));
}

void corrupt(CachedIndividual& x, const std::string& field) {
  if (field == "onemax") ++x.onemax;
  else if (field == "level") ++x.level;
  else if (field == "aux_level") ++x.aux_level;
  else if (field == "zerosB") ++x.zerosB.at(std::min<std::size_t>(6, x.zerosB.size() - 1));
  else if (field == "onesA") ++x.onesA.at(0);
  else if (field == "fitness.level") ++x.fitness.level;
  else if (field == "fitness.hot") ++x.fitness.hot;
  else if (field == "fitness.rest") ++x.fitness.rest;
  else throw std::invalid_argument("unknown fault field: " + field);
}

// 10^5 mutation steps per mode at n=500, L=50, c=1.3; every incremental
// child is compared field by field with its scratch recomputation.
void exactness(SuiteReport& rep, const SuiteOptions& opt) {
  constexpr std::uint32_t n = 500, L = 50;
  constexpr double c = 1.3;
  constexpr int steps = 100000;
  constexpr int fault_step = 5000;
  const auto inst = make_instance(n, L, opt.seed);
  RngStream rng(opt.seed, 1);
  Mutator mut(n, c);
  std::vector<Index> flips;
  for (auto mode : {FitnessMode::hottopic(), FitnessMode::capped_level(), FitnessMode::aux_linear(7)}) {
    const Evaluator ev(&inst, mode);
    CachedIndividual cur = ev.make_cached(random_bitstring(n, rng));
    std::optional<std::string> bad;
    int at = -1;
    std::uint32_t top = 0;
    for (int step = 0; step < steps && !bad; ++step) {
      mut.sample_flips(rng, flips);
      const std::uint32_t parent_aux = cur.aux_level;
      CachedIndividual next = cur;
      ev.apply_flips(next, flips);
      if (opt.inject_fault && step == fault_step) corrupt(next, *opt.inject_fault);
      bad = first_mismatch(next, ev.scratch_child(next.genome, parent_aux));
      if (bad) at = step;
      // Mostly elitist walk, so the upper levels get exercised.
      if (next.fitness >= cur.fitness || rng.bernoulli(0.3)) cur = std::move(next);
      top = std::max(top, cur.level);
    }
    rep.add("incremental equals scratch (" + mode.name() + ")", !bad,
            bad ? "field " + *bad + " differs at step " + str(at)
                : str(steps) + " steps, highest level " + str(top));
  }
}

// 10^4 dominated pairs spread over 5 instances, plus exhaustive order
// equivalence of the triple and the scalar at n <= 12.
void monotonicity(SuiteReport& rep, const SuiteOptions& opt) {
  constexpr std::uint32_t n = 500, L = 30;
  constexpr int per_instance = 2000;
  RngStream rng(opt.seed, 2);
  std::size_t pairs = 0, violations = 0, level_drops = 0;
  std::uint32_t top = 0;
  for (int k = 0; k < 5; ++k) {
    const auto inst = make_instance(n, L, mix(opt.seed, k));
    for (int s = 0; s < per_instance;) {
      // Ones-heavy genomes so that upper levels appear.
      BitString x(n);
      const double p_one = 0.75 + 0.25 * rng.uniform01();
      for (Index j = 0; j < n; ++j) x.set(j, rng.bernoulli(p_one));
      std::vector<Index> zeros;
      for (Index j = 0; j < n; ++j)
        if (!x.get(j)) zeros.push_back(j);
      if (zeros.empty()) continue;
      ++s;
      BitString y = x;
      const auto m = static_cast<Index>(1 + rng.below(std::min<std::size_t>(zeros.size(), 5)));
      std::vector<Index> pick;
      sample_subset(static_cast<Index>(zeros.size()), m, rng, pick);
      for (Index p : pick) y.set(zeros[p], true);
      const FitnessValue fx = evaluate_ht(inst, x), fy = evaluate_ht(inst, y);
      ++pairs;
      if (!(fx < fy)) ++violations;
      if (fy.level < fx.level) ++level_drops;
      top = std::max(top, fy.level);
    }
  }
  rep.add("dominated pairs strictly improve", violations == 0 && level_drops == 0,
          str(pairs) + " pairs, " + str(violations) + " violations, " + str(level_drops) +
              " level drops, highest level " + str(top));

  struct Setup {
    std::uint32_t n;
    const char *alpha, *beta, *eps;
    std::uint32_t L;
  };
  const Setup setups[] = {{4, "0.5", "0.25", "0.2", 2}, {8, "0.5", "0.25", "0.3", 3}, {12, "0.75", "0.25", "0.34", 4},
                          {12, "0.9", "0.5", "0.5", 6}};
  for (const auto& su : setups) {
    const auto inst = HotTopicInstance::generate(HotTopicParams::make(su.n, su.alpha, su.beta, su.eps, su.L, opt.seed));
    const std::uint64_t total = std::uint64_t{1} << su.n;
    std::vector<FitnessValue> f(total);
    std::vector<unsigned __int128> s(total);
    std::size_t bad_scalar = 0;
    for (std::uint64_t m = 0; m < total; ++m) {
      BitString x(su.n);
      for (std::uint32_t j = 0; j < su.n; ++j)
        if ((m >> j) & 1) x.set(j, true);
      f[m] = evaluate_ht(inst, x);
      s[m] = ht_scalar(f[m], su.n);
      // level * n^2 + n * (ones on the hot topic) + (other ones), from the definition
      const std::uint32_t lvl = level_of(inst, x);
      unsigned __int128 direct = static_cast<unsigned __int128>(lvl) * su.n * su.n;
      for (std::uint32_t j = 0; j < su.n; ++j) {
        if (!x.get(j)) continue;
        const bool hot = lvl < su.L && std::binary_search(inst.A(lvl + 1).begin(), inst.A(lvl + 1).end(), j);
        direct += hot ? su.n : 1;
      }
      bad_scalar += direct != s[m];
    }
    std::size_t disagreements = 0;
    for (std::uint64_t a = 0; a < total; ++a)
      for (std::uint64_t b = 0; b < total; ++b)
        if ((f[a] < f[b]) != (s[a] < s[b]) || (f[a] == f[b]) != (s[a] == s[b])) ++disagreements;
    rep.add("exhaustive order equivalence n=" + str(su.n) + " L=" + str(su.L), disagreements == 0 && bad_scalar == 0,
            str(total * total) + " ordered pairs, " + str(disagreements) + " disagreements, " + str(bad_scalar) +
                " scalar mismatches");
  }
}

// alpha = 0.25, n = 2000, d(A, x) = 0.05, 10^5 samples per c; 5 sigma slack.
void lemma1(SuiteReport& rep, const SuiteOptions& opt) {
  constexpr std::uint32_t n = 2000;
  constexpr std::uint64_t samples = 100000;
  RngStream rng(opt.seed, 3);
  const auto inst = make_instance(n, 1, opt.seed);
  const IndexSet& A = inst.A(1);
  BitString x = random_bitstring(n, rng);
  for (Index j : A) x.set(j, true);
  std::vector<Index> pick;
  sample_subset(static_cast<Index>(A.size()), static_cast<Index>(A.size() / 20), rng, pick);
  for (Index p : pick) x.set(A[p], false);
  for (double c : {0.5, 1.0, 2.0}) {
    const auto e = estimate_local_probs(x, A, c, samples, rng);
    const std::string tag = " (c=" + str(c) + ")";
    rep.add("p_R lower bound" + tag, e.p_R >= e.bound_R - 5 * e.se_R,
            "p_R=" + fmt(e.p_R) + " se=" + fmt(e.se_R) + " bound=" + fmt(e.bound_R));
    rep.add("p_I lower bound" + tag, e.p_I >= e.bound_L - 5 * e.se_I,
            "p_I=" + fmt(e.p_I) + " se=" + fmt(e.se_I) + " bound=" + fmt(e.bound_L));
    rep.add("p_I upper bound" + tag, e.p_I <= e.bound_U + 5 * e.se_I,
            "p_I=" + fmt(e.p_I) + " se=" + fmt(e.se_I) + " bound=" + fmt(e.bound_U));
  }
}

// Reference process at mu=50, T=500 over 10^4 repetitions, and coupled
// embeddings at mu in {5, 10, 20}.
void forest(SuiteReport& rep, const SuiteOptions& opt) {
  ExperimentConfig cfg = preset_config("desk");
  apply_command_defaults(cfg, "forest-stats");
  cfg.seed = opt.seed;
  cfg.threads = opt.threads;
  cfg.mu = 50;
  cfg.forest_T = 500;
  cfg.forest_reps = 10000;
  cfg.forest_depth = 5;
  cfg.n = 1000;
  cfg.runs = 5;
  const auto r = run_forest_stats(cfg, ForestStatsParts{true, true, false});
  for (const auto& d : r.depths)
    rep.add("depth " + str(d.depth) + " mean within bound", d.within,
            "mean=" + fmt(d.mean) + " se=" + fmt(d.se) + " bound=" + fmt(d.bound));
  rep.add("root count T+1 in every repetition", r.roots_min == cfg.forest_T + 1 && r.roots_max == cfg.forest_T + 1,
          "min=" + str(r.roots_min) + " max=" + str(r.roots_max) + " reps=" + str(r.reps));
  rep.add("explicit forests: roots and structure", r.explicit_roots_ok, str(r.explicit_reps) + " forests");
  std::size_t checked = 0, embedded = 0;
  std::string first_failure;
  for (const auto& c : r.coupling) {
    if (c.failure.rfind("skipped", 0) == 0) continue;
    ++checked;
    embedded += c.embedded;
    if (!c.embedded && first_failure.empty())
      first_failure = "mu=" + str(c.mu) + " i=" + str(c.i) + ": " + c.failure;
  }
  rep.add("coupled embedding at mu <= 20", checked >= 10 && embedded == checked,
          str(embedded) + "/" + str(checked) + " embedded" + (first_failure.empty() ? "" : "; " + first_failure));
}

// Estimator arithmetic on synthetic series and streaming-vs-log replay.
void drift(SuiteReport& rep, const SuiteOptions& opt) {
  ZSeries flat;
  flat.i_min = 10;
  flat.z.assign(20, 500);
  flat.observed.assign(20, true);
  const double f = truncated_drift(flat, 3, 50).mean();
  rep.add("constant series has zero drift", f == 0.0, "mean=" + fmt(f));

  ZSeries down;
  down.i_min = 0;
  for (int k = 0; k < 30; ++k) down.z.push_back(static_cast<std::uint32_t>(1000 - 10 * k));
  down.observed.assign(30, true);
  const double mu = 20;
  const double floor_mean = truncated_drift(down, 2, mu).mean();
  rep.add("steep descent sits at the -ln mu floor", std::abs(floor_mean + std::log(mu)) < 1e-12,
          "mean=" + fmt(floor_mean));

  ZSeries hand;
  hand.i_min = 0;
  hand.z = {100, 99, 120, 94};
  hand.observed.assign(4, true);
  // windows: max(-1, -ln 20), max(21, .), max(-5, -ln 20)
  const double want = (-1 + 21 - std::log(20.0)) / 3;
  const double got = truncated_drift(hand, 1, 20).mean();
  rep.add("hand-computed windows", std::abs(got - want) < 1e-12, "mean=" + fmt(got) + " want=" + fmt(want));

  const auto inst = make_instance(600, 1, opt.seed);
  const Evaluator ev(&inst, FitnessMode::aux_linear(0));
  std::size_t mismatches = 0, windows = 0;
  for (std::uint64_t r = 0; r < 3; ++r) {
    EAConfig e;
    e.mu = 20;
    e.c = 1.0;
    e.mode = FitnessMode::aux_linear(0);
    e.max_evaluations = 40000;
    e.master_seed = run_seed(opt.seed, 0, r);
    e.init_zero_density = 0.1;
    e.record_events = true;
    ZTracker zt(inst.A(1).size());
    const RunRecord rec = run_ea(ev, e, zt.hooks());
    const ZSeries a = extract_z_series(rec), b = zt.finish(rec.summary);
    if (a.i_min != b.i_min || a.z != b.z || a.observed != b.observed) ++mismatches;
    if (a.z.size() > 5) windows += truncated_drift(a, 5, 20).count;
  }
  rep.add("streaming tracker equals log extraction", mismatches == 0, str(mismatches) + " mismatching runs of 3");
  rep.add("real runs yield drift windows", windows > 0, str(windows) + " windows");
}

}  // namespace

SuiteReport run_suite(const std::string& name, const SuiteOptions& opt) {
  if (opt.inject_fault && name != "exactness")
    throw std::invalid_argument("fault injection applies to the exactness suite only");
  SuiteReport rep;
  rep.suite = name;
  rep.seed = opt.seed;
  const auto t0 = std::chrono::steady_clock::now();
  if (name == "exactness") exactness(rep, opt);
  else if (name == "monotonicity") monotonicity(rep, opt);
  else if (name == "lemma1") lemma1(rep, opt);
  else if (name == "forest") forest(rep, opt);
  else if (name == "drift") drift(rep, opt);
  else throw std::invalid_argument("unknown suite: " + name);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::string suite_report_json(const std::vector<SuiteReport>& reports) {
  nlohmann::ordered_json j;
  bool all = true;
  j["suites"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json s;
    s["suite"] = r.suite;
    s["seed"] = r.seed;
    s["pass"] = r.pass;
    s["seconds"] = r.seconds;
    s["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) s["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["suites"].push_back(s);
    all = all && r.pass;
  }
  j["pass"] = all;
  return j.dump(2);
}

}  // namespace htea::exp
