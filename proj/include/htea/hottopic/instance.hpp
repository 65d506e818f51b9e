#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "htea/core/bitstring.hpp"
#include "htea/core/decimal.hpp"

namespace htea {

struct HotTopicParams {
  std::uint32_t n = 0;
  Decimal alpha;
  Decimal beta;
  Decimal epsilon;
  std::uint32_t L = 1;
  std::uint64_t seed = 0;

  std::uint32_t a_size() const { return static_cast<std::uint32_t>(alpha.floor_mul(n)); }
  std::uint32_t b_size() const { return static_cast<std::uint32_t>(beta.floor_mul(n)); }

  // Throws std::invalid_argument naming the violated constraint.
  void validate() const;

  static HotTopicParams make(std::uint32_t n, const std::string& alpha, const std::string& beta,
                             const std::string& epsilon, std::uint32_t L, std::uint64_t seed);
};

// Default cap on L * floor(alpha n) materialized set entries.
inline constexpr std::uint64_t kDefaultSetEntryCap = 50'000'000;

// Materialized HotTopic sets. Levels are 1..L externally; the vectors below
// are indexed by level - 1.
class HotTopicInstance {
 public:
  static HotTopicInstance generate(const HotTopicParams& params,
                                   std::uint64_t entry_cap = kDefaultSetEntryCap);

  // Explicit sets, 0-based positions, one entry per level.
  static HotTopicInstance from_sets(const HotTopicParams& params, std::vector<IndexSet> A,
                                    std::vector<IndexSet> B);

  static HotTopicInstance load(std::istream& in);
  void dump(std::ostream& out) const;

  const HotTopicParams& params() const { return params_; }
  std::uint32_t n() const { return params_.n; }
  std::uint32_t L() const { return params_.L; }

  const IndexSet& A(std::uint32_t level) const { return A_.at(level - 1); }
  const IndexSet& B(std::uint32_t level) const { return B_.at(level - 1); }
  std::uint32_t tau(std::uint32_t level) const { return tau_.at(level - 1); }
  std::span<const std::uint32_t> taus() const { return tau_; }

  // Level indices (level - 1) whose A (resp. B) contains position j.
  std::span<const std::uint32_t> levels_with_A(Index j) const {
    return {a_levels_.data() + a_off_[j], a_levels_.data() + a_off_[j + 1]};
  }
  std::span<const std::uint32_t> levels_with_B(Index j) const {
    return {b_levels_.data() + b_off_[j], b_levels_.data() + b_off_[j + 1]};
  }

  // Positions not in A(level): the set R of the level.
  IndexSet complement_of_A(std::uint32_t level) const;

  bool operator==(const HotTopicInstance& o) const {
    return A_ == o.A_ && B_ == o.B_ && tau_ == o.tau_ && params_.n == o.params_.n &&
           params_.L == o.params_.L && params_.seed == o.params_.seed &&
           params_.alpha == o.params_.alpha && params_.beta == o.params_.beta &&
           params_.epsilon == o.params_.epsilon;
  }

 private:
  void build_indexes();

  HotTopicParams params_;
  std::vector<IndexSet> A_, B_;
  std::vector<std::uint32_t> tau_;
  std::vector<std::uint32_t> a_off_, a_levels_, b_off_, b_levels_;
};

}  // namespace htea
