#include "htea/analysis/zseries.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace htea {

std::size_t rank_of(const BitString& x, std::span<const Index> A) {
  if (A.empty()) throw std::invalid_argument("rank_of: hot topic must be non-empty");
  return ones_on(x, A);
}

namespace {

std::int64_t completed_limit(const RunSummary& s) {
  if (s.final_ranks.empty()) return -1;
  const std::int32_t m = *std::min_element(s.final_ranks.begin(), s.final_ranks.end());
  return static_cast<std::int64_t>(m) - 1;
}

ZSeries assemble(std::int64_t i_min, std::int64_t i_max, const std::vector<std::int64_t>& last) {
  ZSeries out;
  if (i_min < 0 || i_max < i_min) return out;
  out.i_min = i_min;
  std::int64_t prev = -1;
  for (std::int64_t i = i_min; i <= i_max; ++i) {
    const std::int64_t v = static_cast<std::size_t>(i) < last.size() ? last[static_cast<std::size_t>(i)] : -1;
    const bool seen = v >= 0;
    if (!seen && prev < 0) throw std::logic_error("Z series: lowest rank has no deletion");
    prev = seen ? v : prev;
    out.z.push_back(static_cast<std::uint32_t>(prev));
    out.observed.push_back(seen);
  }
  return out;
}

}  // namespace

ZSeries extract_z_series(const RunRecord& rec) {
  std::vector<std::int64_t> last;
  std::int64_t min_rank = -1;
  bool any_death = false;
  for (const Event& e : rec.events) {
    if (!e.admitted || e.rank < 0) continue;
    const auto r = static_cast<std::size_t>(e.rank);
    if (e.kind == EventKind::birth) {
      if (min_rank < 0 || e.rank < min_rank) min_rank = e.rank;
    } else {
      any_death = true;
      if (last.size() <= r) last.resize(r + 1, -1);
      last[r] = e.onemax;
    }
  }
  if (!any_death) return {};
  return assemble(min_rank, completed_limit(rec.summary), last);
}

ZTracker::ZTracker(std::size_t max_rank) : last_(max_rank + 1, -1) {}

void ZTracker::on_birth(const Event& e) {
  if (!e.admitted || e.rank < 0) return;
  if (min_rank_ < 0 || e.rank < min_rank_) min_rank_ = e.rank;
}

void ZTracker::on_death(const Event& e) {
  if (!e.admitted || e.rank < 0) return;
  last_.at(static_cast<std::size_t>(e.rank)) = e.onemax;
}

RunHooks ZTracker::hooks() {
  RunHooks h;
  h.on_birth = [this](const Event& e) { on_birth(e); };
  h.on_death = [this](const Event& e) { on_death(e); };
  return h;
}

ZSeries ZTracker::finish(const RunSummary& summary) const {
  if (std::none_of(last_.begin(), last_.end(), [](std::int64_t v) { return v >= 0; })) return {};
  return assemble(min_rank_, completed_limit(summary), last_);
}

double DriftEstimate::mean() const { return count == 0 ? std::nan("") : sum / static_cast<double>(count); }

double DriftEstimate::std_error() const {
  if (count < 2) return std::nan("");
  const double m = mean();
  const double var = (sum_sq - static_cast<double>(count) * m * m) / static_cast<double>(count - 1);
  return std::sqrt(std::max(var, 0.0) / static_cast<double>(count));
}

void DriftEstimate::add(double v) {
  ++count;
  sum += v;
  sum_sq += v * v;
}

void DriftEstimate::merge(const DriftEstimate& other) {
  count += other.count;
  sum += other.sum;
  sum_sq += other.sum_sq;
}

DriftEstimate truncated_drift(const ZSeries& z, std::uint64_t K, double mu, std::optional<std::int64_t> from,
                              std::optional<std::int64_t> to) {
  if (K < 1) throw std::invalid_argument("truncated_drift: K must be at least 1");
  if (!(mu > 1.0)) throw std::invalid_argument("truncated_drift: mu must exceed 1");
  if (z.z.size() < K + 1)
    throw std::invalid_argument("truncated_drift: series covers " + std::to_string(z.z.size()) +
                                " ranks, fewer than K + 1 = " + std::to_string(K + 1));
  const double floor_step = -std::log(mu);
  const auto k = static_cast<std::int64_t>(K);
  const std::int64_t lo = std::max(z.i_min, from.value_or(z.i_min));
  const std::int64_t hi = std::min(z.i_max() - k, to.value_or(z.i_max() - k));
  DriftEstimate est;
  for (std::int64_t i = lo; i <= hi; ++i) {
    const double diff = static_cast<double>(z.at(i + k)) - static_cast<double>(z.at(i));
    est.add(std::max(diff, floor_step));
  }
  return est;
}

}  // namespace htea
