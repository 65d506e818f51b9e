#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "htea/core/bitstring.hpp"
#include "htea/engine/ea.hpp"

namespace htea {

// Ones of x on A.
std::size_t rank_of(const BitString& x, std::span<const Index> A);

// Z_i for ranks i in [i_min, i_max]; z[k] belongs to rank i_min + k.
struct ZSeries {
  std::int64_t i_min = 0;
  std::vector<std::uint32_t> z;
  // False where rank i was never populated and Z_i = Z_{i-1} was filled in.
  std::vector<bool> observed;

  bool empty() const { return z.empty(); }
  std::int64_t i_max() const { return i_min + static_cast<std::int64_t>(z.size()) - 1; }
  std::uint32_t at(std::int64_t i) const { return z.at(static_cast<std::size_t>(i - i_min)); }
};

// Ranks come from the record's designated hot topic, so the record should
// come from an aux_linear run. Only admitted individuals belong to X_i.
ZSeries extract_z_series(const RunRecord& rec);

// Streaming counterpart fed from run hooks; avoids keeping the event log.
class ZTracker {
 public:
  explicit ZTracker(std::size_t max_rank);
  void on_birth(const Event& e);
  void on_death(const Event& e);
  RunHooks hooks();
  ZSeries finish(const RunSummary& summary) const;

 private:
  std::vector<std::int64_t> last_;  // onemax of the latest death, -1 if none
  std::int64_t min_rank_ = -1;
};

struct DriftEstimate {
  std::size_t count = 0;
  double sum = 0;
  double sum_sq = 0;

  double mean() const;
  // Standard error of the mean, windows treated as independent.
  double std_error() const;
  void add(double v);
  void merge(const DriftEstimate& other);
};

// Mean of max{Z_{i+K} - Z_i, -ln mu} over window starts i in [i_min, i_max - K],
// optionally restricted to [from, to]. Throws when the series covers fewer
// than K + 1 ranks.
DriftEstimate truncated_drift(const ZSeries& z, std::uint64_t K, double mu,
                              std::optional<std::int64_t> from = std::nullopt,
                              std::optional<std::int64_t> to = std::nullopt);

}  // namespace htea
