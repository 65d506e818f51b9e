#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "htea/core/bitstring.hpp"
#include "htea/hottopic/instance.hpp"

namespace htea {

// Lexicographic (level, hot, rest). Equal in order to the scalar
// level*n^2 + n*hot + rest because hot*n + rest < n^2 whenever |A| < n.
struct FitnessValue {
  std::uint32_t level = 0;
  std::uint32_t hot = 0;
  std::uint32_t rest = 0;
  auto operator<=>(const FitnessValue&) const = default;
};

unsigned __int128 ht_scalar(const FitnessValue& f, std::uint64_t n);

struct FitnessMode {
  enum class Kind { hottopic, aux_linear, capped_level, onemax };
  Kind kind = Kind::hottopic;
  // Fixed level of the auxiliary linear function, in [0, L-1].
  std::uint32_t ell = 0;

  static FitnessMode hottopic() { return {Kind::hottopic, 0}; }
  static FitnessMode aux_linear(std::uint32_t ell) { return {Kind::aux_linear, ell}; }
  static FitnessMode capped_level() { return {Kind::capped_level, 0}; }
  static FitnessMode onemax() { return {Kind::onemax, 0}; }

  std::string name() const;
  static FitnessMode parse(const std::string& text);
};

// Genome plus counters kept in step with it. zerosB and onesA are indexed by
// level - 1.
struct CachedIndividual {
  BitString genome{1};
  std::uint32_t onemax = 0;
  std::vector<std::uint32_t> zerosB;
  std::vector<std::uint32_t> onesA;
  std::uint32_t level = 0;
  std::uint32_t aux_level = 0;
  FitnessValue fitness;
};

// Name of the first field where got differs from want, e.g. "zerosB[7]".
std::optional<std::string> first_mismatch(const CachedIndividual& got, const CachedIndividual& want);

// Evaluation under one fitness mode. inst may be null only for the onemax
// mode, in which case no level counters are kept.
class Evaluator {
 public:
  // n is read from inst when one is given.
  Evaluator(const HotTopicInstance* inst, FitnessMode mode, std::uint32_t n = 0);

  const HotTopicInstance* instance() const { return inst_; }
  const FitnessMode& mode() const { return mode_; }
  std::uint32_t n() const { return n_; }
  std::uint32_t L() const { return inst_ ? inst_->L() : 0; }

  // From-scratch cache. aux_level is taken as given (0 for initial individuals).
  CachedIndividual make_cached(BitString x, std::uint32_t aux_level = 0) const;

  // Child cache from a copy of the parent. flips must be distinct positions
  // below n; sorted input is checked in O(|flips|). ind.aux_level is the
  // parent's on entry and the child's on exit.
  void apply_flips(CachedIndividual& ind, std::span<const Index> flips) const;

  // Scratch oracle for a child of a parent with the given aux level.
  CachedIndividual scratch_child(const BitString& y, std::uint32_t parent_aux_level) const;

  std::uint32_t level_of(std::span<const std::uint32_t> zerosB) const;
  std::uint32_t capped_level(std::uint32_t parent_aux_level, std::span<const std::uint32_t> zerosB) const;

  // Mode fitness from counters and level fields.
  FitnessValue fitness_of(const CachedIndividual& ind) const;

 private:
  void counters_from_scratch(CachedIndividual& ind) const;

  const HotTopicInstance* inst_;
  FitnessMode mode_;
  std::uint32_t n_ = 0;
};

std::uint32_t level_of(const HotTopicInstance& inst, const BitString& x);
std::uint32_t level_of(const HotTopicInstance& inst, std::span<const std::uint32_t> zerosB);
FitnessValue evaluate_ht(const HotTopicInstance& inst, const BitString& x);
CachedIndividual make_cached(const HotTopicInstance& inst, const BitString& x);
CachedIndividual apply_flips(const HotTopicInstance& inst, const CachedIndividual& parent,
                             std::span<const Index> flips);

// (ones on A_{ell+1}, onemax minus that), ell in [0, L-1].
std::pair<std::uint32_t, std::uint32_t> evaluate_aux(const HotTopicInstance& inst, std::uint32_t ell,
                                                     const CachedIndividual& x);

std::uint32_t capped_level(const HotTopicInstance& inst, std::uint32_t parent_aux_level, const CachedIndividual& y);

}  // namespace htea
