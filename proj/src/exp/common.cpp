#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "htea/exp/experiments.hpp"
#include "htea/exp/runtime.hpp"
#include "internal.hpp"

namespace htea::exp {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string csv_header(const std::string& schema, const std::string& columns) {
  return "# schema: " + schema + "\n" + columns + "\n";
}

double t_quantile_975(std::uint32_t df) {
  static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
                                 2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
                                 2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df == 0) throw std::invalid_argument("t quantile: zero degrees of freedom");
  if (df <= 30) return table[df - 1];
  if (df <= 60) return 2.000;
  if (df <= 120) return 1.980;
  return 1.960;
}

std::pair<std::int64_t, std::int64_t> regime_ranks(const ExperimentConfig& cfg, std::size_t a_size) {
  const double eps = cfg.epsilon.to_double();
  const double a = static_cast<double>(a_size);
  return {static_cast<std::int64_t>(std::ceil((1 - 2 * eps) * a - 1e-9)),
          static_cast<std::int64_t>(std::floor((1 - eps / 2) * a + 1e-9))};
}

void write_instance(const ExperimentConfig& cfg, const std::string& path) {
  const auto inst = HotTopicInstance::generate(cfg.instance_params(), cfg.entry_cap);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  inst.dump(out);
}

namespace detail {

EAConfig ea_config(const ExperimentConfig&, std::uint32_t mu, const Decimal& c, const FitnessMode& mode,
                   std::uint64_t budget, std::uint64_t seed) {
  EAConfig e;
  e.mu = mu;
  e.c = c.to_double();
  e.mode = mode;
  e.max_evaluations = budget;
  e.stop_at_optimum = true;
  e.master_seed = seed;
  e.stream_id = 0;
  return e;
}

std::ofstream open_csv(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  m.min = xs[0];
  m.max = xs[0];
  double s = 0;
  for (double x : xs) {
    s += x;
    m.min = std::min(m.min, x);
    m.max = std::max(m.max, x);
  }
  m.mean = s / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

const char* stop_name(StopReason s) {
  switch (s) {
    case StopReason::optimum: return "optimum";
    case StopReason::budget: return "budget";
    case StopReason::level_decided: return "level_decided";
  }
  return "?";
}

}  // namespace detail

}  // namespace htea::exp
