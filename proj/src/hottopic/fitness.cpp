#include "htea/hottopic/fitness.hpp"

#include <algorithm>
#include <stdexcept>

namespace htea {

unsigned __int128 ht_scalar(const FitnessValue& f, std::uint64_t n) {
  const unsigned __int128 nn = n;
  return static_cast<unsigned __int128>(f.level) * nn * nn + nn * f.hot + f.rest;
}

std::string FitnessMode::name() const {
  switch (kind) {
    case Kind::hottopic: return "hottopic";
    case Kind::aux_linear: return "aux_linear(" + std::to_string(ell) + ")";
    case Kind::capped_level: return "capped_level";
    case Kind::onemax: return "onemax";
  }
  return "?";
}

FitnessMode FitnessMode::parse(const std::string& text) {
  if (text == "hottopic") return hottopic();
  if (text == "capped_level") return capped_level();
  if (text == "onemax") return onemax();
  const std::string prefix = "aux_linear";
  if (text.rfind(prefix, 0) == 0) {
    std::string rest = text.substr(prefix.size());
    if (rest.empty()) return aux_linear(0);
    if (rest.size() >= 3 && rest.front() == '(' && rest.back() == ')') {
      const std::string digits = rest.substr(1, rest.size() - 2);
      if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
        return aux_linear(static_cast<std::uint32_t>(std::stoul(digits)));
    }
  }
  throw std::invalid_argument("unknown fitness mode '" + text + "'");
}

std::optional<std::string> first_mismatch(const CachedIndividual& got, const CachedIndividual& want) {
  if (!(got.genome == want.genome)) return "genome";
  if (got.onemax != want.onemax) return "onemax";
  if (got.zerosB.size() != want.zerosB.size()) return "zerosB.size";
  for (std::size_t i = 0; i < got.zerosB.size(); ++i)
    if (got.zerosB[i] != want.zerosB[i]) return "zerosB[" + std::to_string(i + 1) + "]";
  if (got.onesA.size() != want.onesA.size()) return "onesA.size";
  for (std::size_t i = 0; i < got.onesA.size(); ++i)
    if (got.onesA[i] != want.onesA[i]) return "onesA[" + std::to_string(i + 1) + "]";
  if (got.level != want.level) return "level";
  if (got.aux_level != want.aux_level) return "aux_level";
  if (got.fitness.level != want.fitness.level) return "fitness.level";
  if (got.fitness.hot != want.fitness.hot) return "fitness.hot";
  if (got.fitness.rest != want.fitness.rest) return "fitness.rest";
  return std::nullopt;
}

Evaluator::Evaluator(const HotTopicInstance* inst, FitnessMode mode, std::uint32_t n)
    : inst_(inst), mode_(mode), n_(n) {
  if (inst == nullptr && mode.kind != FitnessMode::Kind::onemax)
    throw std::invalid_argument("fitness mode " + mode.name() + " requires a HotTopic instance");
  if (inst == nullptr && n == 0) throw std::invalid_argument("Evaluator: genome length must be positive");
  if (inst != nullptr) {
    n_ = inst->n();
    if (mode.kind == FitnessMode::Kind::aux_linear && mode.ell >= inst->L())
      throw std::invalid_argument("aux_linear level must lie in [0, L-1]");
  }
}

std::uint32_t Evaluator::level_of(std::span<const std::uint32_t> zerosB) const {
  if (inst_ == nullptr) return 0;
  const auto taus = inst_->taus();
  for (std::size_t l = taus.size(); l > 0; --l)
    if (zerosB[l - 1] <= taus[l - 1]) return static_cast<std::uint32_t>(l);
  return 0;
}

std::uint32_t Evaluator::capped_level(std::uint32_t parent_aux_level, std::span<const std::uint32_t> zerosB) const {
  if (inst_ == nullptr) return 0;
  const auto taus = inst_->taus();
  const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(parent_aux_level) + 1, taus.size());
  for (std::size_t l = top; l > 0; --l)
    if (zerosB[l - 1] <= taus[l - 1]) return static_cast<std::uint32_t>(l);
  return 0;
}

FitnessValue Evaluator::fitness_of(const CachedIndividual& ind) const {
  const std::uint32_t L = this->L();
  auto triple = [&](std::uint32_t level) {
    const std::uint32_t hot = level < L ? ind.onesA[level] : 0;
    return FitnessValue{level, hot, ind.onemax - hot};
  };
  switch (mode_.kind) {
    case FitnessMode::Kind::hottopic: return triple(ind.level);
    case FitnessMode::Kind::capped_level: return triple(ind.aux_level);
    case FitnessMode::Kind::aux_linear: {
      const std::uint32_t hot = ind.onesA[mode_.ell];
      return FitnessValue{mode_.ell, hot, ind.onemax - hot};
    }
    case FitnessMode::Kind::onemax: return FitnessValue{0, 0, ind.onemax};
  }
  return {};
}

void Evaluator::counters_from_scratch(CachedIndividual& ind) const {
  ind.onemax = static_cast<std::uint32_t>(ind.genome.onemax());
  if (inst_ == nullptr) {
    ind.zerosB.clear();
    ind.onesA.clear();
    ind.level = 0;
    return;
  }
  const std::uint32_t L = inst_->L();
  ind.zerosB.assign(L, 0);
  ind.onesA.assign(L, 0);
  for (std::uint32_t l = 1; l <= L; ++l) {
    ind.onesA[l - 1] = static_cast<std::uint32_t>(ones_on(ind.genome, inst_->A(l)));
    ind.zerosB[l - 1] = static_cast<std::uint32_t>(inst_->B(l).size() - ones_on(ind.genome, inst_->B(l)));
  }
  ind.level = level_of(ind.zerosB);
}

CachedIndividual Evaluator::make_cached(BitString x, std::uint32_t aux_level) const {
  if (x.size() != n_)
    throw std::invalid_argument("genome length does not match the instance");
  CachedIndividual ind;
  ind.genome = std::move(x);
  counters_from_scratch(ind);
  ind.aux_level = mode_.kind == FitnessMode::Kind::capped_level ? aux_level : 0;
  ind.fitness = fitness_of(ind);
  return ind;
}

CachedIndividual Evaluator::scratch_child(const BitString& y, std::uint32_t parent_aux_level) const {
  CachedIndividual ind = make_cached(y);
  if (mode_.kind == FitnessMode::Kind::capped_level) {
    ind.aux_level = capped_level(parent_aux_level, ind.zerosB);
    ind.fitness = fitness_of(ind);
  }
  return ind;
}

void Evaluator::apply_flips(CachedIndividual& ind, std::span<const Index> flips) const {
  const std::size_t n = ind.genome.size();
  bool sorted = true;
  for (std::size_t k = 0; k < flips.size(); ++k) {
    if (flips[k] >= n) throw std::out_of_range("apply_flips: position outside the genome");
    if (k > 0 && flips[k - 1] >= flips[k]) sorted = false;
  }
  if (!sorted) {
    std::vector<Index> copy(flips.begin(), flips.end());
    std::sort(copy.begin(), copy.end());
    if (std::adjacent_find(copy.begin(), copy.end()) != copy.end())
      throw std::invalid_argument("apply_flips: duplicate positions in flip list");
  }
  for (Index j : flips) {
    const bool was_one = ind.genome.get(j);
    ind.genome.flip(j);
    if (was_one) --ind.onemax; else ++ind.onemax;
    if (inst_ == nullptr) continue;
    if (was_one) {
      for (auto l : inst_->levels_with_A(j)) --ind.onesA[l];
      for (auto l : inst_->levels_with_B(j)) ++ind.zerosB[l];
    } else {
      for (auto l : inst_->levels_with_A(j)) ++ind.onesA[l];
      for (auto l : inst_->levels_with_B(j)) --ind.zerosB[l];
    }
  }
  ind.level = level_of(ind.zerosB);
  if (mode_.kind == FitnessMode::Kind::capped_level) ind.aux_level = capped_level(ind.aux_level, ind.zerosB);
  ind.fitness = fitness_of(ind);
}

std::uint32_t level_of(const HotTopicInstance& inst, const BitString& x) {
  return make_cached(inst, x).level;
}

std::uint32_t level_of(const HotTopicInstance& inst, std::span<const std::uint32_t> zerosB) {
  if (zerosB.size() != inst.L()) throw std::invalid_argument("level_of: counter array must have L entries");
  return Evaluator(&inst, FitnessMode::hottopic()).level_of(zerosB);
}

FitnessValue evaluate_ht(const HotTopicInstance& inst, const BitString& x) { return make_cached(inst, x).fitness; }

CachedIndividual make_cached(const HotTopicInstance& inst, const BitString& x) {
  return Evaluator(&inst, FitnessMode::hottopic()).make_cached(x);
}

CachedIndividual apply_flips(const HotTopicInstance& inst, const CachedIndividual& parent,
                             std::span<const Index> flips) {
  CachedIndividual child = parent;
  Evaluator(&inst, FitnessMode::hottopic()).apply_flips(child, flips);
  return child;
}

std::pair<std::uint32_t, std::uint32_t> evaluate_aux(const HotTopicInstance& inst, std::uint32_t ell,
                                                     const CachedIndividual& x) {
  if (ell >= inst.L()) throw std::invalid_argument("evaluate_aux: ell must lie in [0, L-1]");
  const std::uint32_t hot = x.onesA.at(ell);
  return {hot, x.onemax - hot};
}

std::uint32_t capped_level(const HotTopicInstance& inst, std::uint32_t parent_aux_level, const CachedIndividual& y) {
  if (parent_aux_level > inst.L()) throw std::invalid_argument("capped_level: parent aux level exceeds L");
  return Evaluator(&inst, FitnessMode::capped_level()).capped_level(parent_aux_level, y.zerosB);
}

}  // namespace htea
