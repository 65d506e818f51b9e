#include "htea/exp/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "htea/hottopic/fitness.hpp"

namespace htea::exp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, x);
  if (v.empty() || r.ec != std::errc() || r.ptr != end)
    throw std::invalid_argument("config: " + key + " expects a non-negative integer, got '" + v + "'");
  return x;
}

std::uint32_t parse_u32(const std::string& key, const std::string& v) {
  const std::uint64_t x = parse_u64(key, v);
  if (x > UINT32_MAX) throw std::invalid_argument("config: " + key + " out of range: " + v);
  return static_cast<std::uint32_t>(x);
}

Decimal parse_dec(const std::string& key, const std::string& v) {
  try {
    return Decimal::parse(v);
  } catch (const std::exception& e) {
    throw std::invalid_argument("config: " + key + ": " + e.what());
  }
}

template <class T>
std::string join(const std::vector<T>& xs, const std::function<std::string(const T&)>& f) {
  std::string s;
  for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? "," : "") + f(xs[k]);
  return s;
}

std::string dec_grid_text(const std::vector<Decimal>& g) {
  return join<Decimal>(g, [](const Decimal& d) { return d.text(); });
}
std::string uint_grid_text(const std::vector<std::uint32_t>& g) {
  return join<std::uint32_t>(g, [](const std::uint32_t& v) { return std::to_string(v); });
}

template <class T>
void check_grid(const std::string& key, const std::vector<T>& g) {
  for (std::size_t k = 1; k < g.size(); ++k)
    if (!(g[k - 1] < g[k])) throw std::invalid_argument("config: " + key + " must be strictly increasing");
}

}  // namespace

std::vector<Decimal> parse_decimal_grid(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return {};
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw std::invalid_argument("grid: range must be lo:hi:step, got '" + t + "'");
    const Decimal lo = Decimal::parse(parts[0]), hi = Decimal::parse(parts[1]), step = Decimal::parse(parts[2]);
    if (step.is_zero()) throw std::invalid_argument("grid: step must be positive");
    if (hi < lo) throw std::invalid_argument("grid: range end below its start");
    std::vector<Decimal> out;
    for (Decimal v = lo; v <= hi; v = v.plus(step)) {
      out.push_back(v);
      if (out.size() > 100000) throw std::invalid_argument("grid: more than 10^5 points");
    }
    return out;
  }
  std::vector<Decimal> out;
  for (const auto& p : split(t, ',')) out.push_back(Decimal::parse(p));
  return out;
}

std::vector<std::uint32_t> parse_uint_grid(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return {};
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw std::invalid_argument("grid: range must be lo:hi:step, got '" + t + "'");
    const std::uint32_t lo = parse_u32("grid", parts[0]), hi = parse_u32("grid", parts[1]),
                        step = parse_u32("grid", parts[2]);
    if (step == 0) throw std::invalid_argument("grid: step must be positive");
    if (hi < lo) throw std::invalid_argument("grid: range end below its start");
    std::vector<std::uint32_t> out;
    for (std::uint64_t v = lo; v <= hi; v += step) out.push_back(static_cast<std::uint32_t>(v));
    return out;
  }
  std::vector<std::uint32_t> out;
  for (const auto& p : split(t, ',')) out.push_back(parse_u32("grid", p));
  return out;
}

HotTopicParams ExperimentConfig::instance_params() const { return instance_params(L); }

HotTopicParams ExperimentConfig::instance_params(std::uint32_t levels) const {
  HotTopicParams p;
  p.n = n;
  p.alpha = alpha;
  p.beta = beta;
  p.epsilon = epsilon;
  p.L = levels;
  p.seed = instance_seed.value_or(seed);
  return p;
}

std::uint64_t ExperimentConfig::effective_budget(std::uint32_t levels) const {
  if (budget > 0) return budget;
  return budget_factor * static_cast<std::uint64_t>(n) * levels;
}

double ExperimentConfig::init_density_value() const {
  return init_density ? init_density->to_double() : 2.0 * epsilon.to_double();
}

void ExperimentConfig::validate() const {
  if (runs < 1) throw std::invalid_argument("config: runs must be at least 1");
  if (threads < 1) throw std::invalid_argument("config: threads must be at least 1");
  if (mu < 1) throw std::invalid_argument("config: mu must be at least 1");
  if (c.is_zero()) throw std::invalid_argument("config: c must be positive");
  if (budget == 0 && budget_factor == 0) throw std::invalid_argument("config: budget_factor must be positive");
  instance_params().validate();
  FitnessMode::parse(mode);
  check_grid("mu_grid", mu_grid);
  check_grid("c_grid", c_grid);
  check_grid("L_grid", L_grid);
  check_grid("minmu_c_grid", minmu_c_grid);
  check_grid("events_mu_grid", events_mu_grid);
  for (auto m : mu_grid)
    if (m < 1) throw std::invalid_argument("config: mu_grid entries must be at least 1");
  for (auto l : L_grid)
    if (l < 1) throw std::invalid_argument("config: L_grid entries must be at least 1");
  for (const auto& v : c_grid)
    if (v.is_zero()) throw std::invalid_argument("config: c_grid entries must be positive");
  for (const auto& v : minmu_c_grid)
    if (v.is_zero()) throw std::invalid_argument("config: minmu_c_grid entries must be positive");
  if (mu_cap < 1) throw std::invalid_argument("config: mu_cap must be at least 1");
  if (trace_stride < 1) throw std::invalid_argument("config: trace_stride must be at least 1");
  const double d = init_density_value();
  if (!(d >= 0 && d <= 1)) throw std::invalid_argument("config: init_density must lie in [0, 1]");
  if (phi.is_zero() || !phi.below_one()) throw std::invalid_argument("config: phi must lie in (0, 1)");
  if (forest_reps < 1) throw std::invalid_argument("config: forest_reps must be at least 1");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
  auto opt_u = [](const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string(); };
  auto opt_d = [](const std::optional<Decimal>& v) { return v ? v->text() : std::string(); };
  return {
      {"preset", preset},
      {"n", std::to_string(n)},
      {"L", std::to_string(L)},
      {"alpha", alpha.text()},
      {"beta", beta.text()},
      {"epsilon", epsilon.text()},
      {"instance_seed", opt_u(instance_seed)},
      {"entry_cap", std::to_string(entry_cap)},
      {"seed", std::to_string(seed)},
      {"runs", std::to_string(runs)},
      {"threads", std::to_string(threads)},
      {"budget", std::to_string(budget)},
      {"budget_factor", std::to_string(budget_factor)},
      {"mu", std::to_string(mu)},
      {"c", c.text()},
      {"mode", mode},
      {"mu_grid", uint_grid_text(mu_grid)},
      {"c_grid", dec_grid_text(c_grid)},
      {"L_grid", uint_grid_text(L_grid)},
      {"trace_stride", std::to_string(trace_stride)},
      {"minmu_c_grid", dec_grid_text(minmu_c_grid)},
      {"mu_cap", std::to_string(mu_cap)},
      {"success_runs", std::to_string(success_runs)},
      {"ell", std::to_string(ell)},
      {"init_density", opt_d(init_density)},
      {"drift_K", std::to_string(drift_K)},
      {"phi", phi.text()},
      {"k", opt_d(k)},
      {"eta", opt_d(eta)},
      {"forest_T", std::to_string(forest_T)},
      {"forest_reps", std::to_string(forest_reps)},
      {"forest_depth", std::to_string(forest_depth)},
      {"events_mu_grid", uint_grid_text(events_mu_grid)},
      {"out", out},
  };
}

void set_key(ExperimentConfig& cfg, const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in);
  const std::string v = trim(value_in);
  auto opt_dec = [&](std::optional<Decimal>& field) {
    if (v.empty()) field.reset();
    else field = parse_dec(key, v);
  };
  auto grid = [&](auto parse) {
    try {
      return parse(v);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config: " + key + ": " + e.what());
    }
  };
  if (key == "preset") {
    if (v != "desk" && v != "paper") throw std::invalid_argument("config: preset must be desk or paper");
    cfg.preset = v;
  } else if (key == "n") cfg.n = parse_u32(key, v);
  else if (key == "L") cfg.L = parse_u32(key, v);
  else if (key == "alpha") cfg.alpha = parse_dec(key, v);
  else if (key == "beta") cfg.beta = parse_dec(key, v);
  else if (key == "epsilon") cfg.epsilon = parse_dec(key, v);
  else if (key == "instance_seed") {
    if (v.empty()) cfg.instance_seed.reset();
    else cfg.instance_seed = parse_u64(key, v);
  } else if (key == "entry_cap") cfg.entry_cap = parse_u64(key, v);
  else if (key == "seed") cfg.seed = parse_u64(key, v);
  else if (key == "runs") cfg.runs = parse_u32(key, v);
  else if (key == "threads") cfg.threads = parse_u32(key, v);
  else if (key == "budget") cfg.budget = parse_u64(key, v);
  else if (key == "budget_factor") cfg.budget_factor = parse_u64(key, v);
  else if (key == "mu") cfg.mu = parse_u32(key, v);
  else if (key == "c") cfg.c = parse_dec(key, v);
  else if (key == "mode") {
    FitnessMode::parse(v);
    cfg.mode = v;
  } else if (key == "mu_grid") cfg.mu_grid = grid(parse_uint_grid);
  else if (key == "c_grid") cfg.c_grid = grid(parse_decimal_grid);
  else if (key == "L_grid") cfg.L_grid = grid(parse_uint_grid);
  else if (key == "trace_stride") cfg.trace_stride = parse_u64(key, v);
  else if (key == "minmu_c_grid") cfg.minmu_c_grid = grid(parse_decimal_grid);
  else if (key == "mu_cap") cfg.mu_cap = parse_u32(key, v);
  else if (key == "success_runs") cfg.success_runs = parse_u32(key, v);
  else if (key == "ell") cfg.ell = parse_u32(key, v);
  else if (key == "init_density") opt_dec(cfg.init_density);
  else if (key == "drift_K") cfg.drift_K = parse_u64(key, v);
  else if (key == "phi") cfg.phi = parse_dec(key, v);
  else if (key == "k") opt_dec(cfg.k);
  else if (key == "eta") opt_dec(cfg.eta);
  else if (key == "forest_T") cfg.forest_T = parse_u64(key, v);
  else if (key == "forest_reps") cfg.forest_reps = parse_u64(key, v);
  else if (key == "forest_depth") cfg.forest_depth = parse_u32(key, v);
  else if (key == "events_mu_grid") cfg.events_mu_grid = grid(parse_uint_grid);
  else if (key == "out") cfg.out = v;
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

ExperimentConfig preset_config(const std::string& preset) {
  ExperimentConfig cfg;
  if (preset == "desk") {
    cfg.preset = "desk";
    cfg.n = 3000;
    cfg.L = 50;
    cfg.mu_grid = {5, 10, 20, 50, 100, 200};
    cfg.c_grid = parse_decimal_grid("0.6:2.0:0.2");
    cfg.L_grid = {50, 100};
    cfg.minmu_c_grid = parse_decimal_grid("0.7:4.0:0.1");
    cfg.mu_cap = 512;
    cfg.events_mu_grid = {50, 100, 200};
  } else if (preset == "paper") {
    cfg.preset = "paper";
    cfg.n = 10000;
    cfg.L = 100;
    cfg.mu_grid = parse_uint_grid("10:100:10");
    cfg.c_grid = parse_decimal_grid("0.7:2.0:0.1");
    cfg.L_grid = {100, 200};
    cfg.minmu_c_grid = parse_decimal_grid("0.7:4.0:0.1");
    cfg.mu_cap = 1000;
    cfg.events_mu_grid = {50, 100, 200};
  } else {
    throw std::invalid_argument("config: preset must be desk or paper, got '" + preset + "'");
  }
  return cfg;
}

void apply_command_defaults(ExperimentConfig& cfg, const std::string& command) {
  if (command == "drift") {
    cfg.n = 100000;
    cfg.L = 1;
    cfg.mu = 200;
    cfg.mode = "aux_linear(0)";
    cfg.budget_factor = 30;
  } else if (command == "forest-stats") {
    cfg.L = 1;
    cfg.mode = "aux_linear(0)";
    cfg.budget_factor = 100;
  }
}

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace htea::exp
