#include "htea/hottopic/instance.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "htea/core/rng.hpp"

namespace htea {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw std::invalid_argument("HotTopicParams: " + what); }

// First k entries of pool after a partial Fisher-Yates shuffle.
IndexSet partial_shuffle(std::vector<Index>& pool, std::uint32_t k, RngStream& rng) {
  const std::uint64_t m = pool.size();
  for (std::uint32_t j = 0; j < k; ++j) {
    const auto r = static_cast<std::size_t>(rng.between(j, m - 1));
    std::swap(pool[j], pool[r]);
  }
  IndexSet out(pool.begin(), pool.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

void check_sorted_set(const IndexSet& s, std::uint32_t n, const std::string& name) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] >= n) throw std::invalid_argument(name + ": position out of range");
    if (k > 0 && s[k - 1] >= s[k]) throw std::invalid_argument(name + ": positions must be strictly increasing");
  }
}

}  // namespace

void HotTopicParams::validate() const {
  if (n < 2) invalid("n must be at least 2");
  if (alpha.is_zero() || !alpha.below_one()) invalid("alpha must lie in (0, 1)");
  if (beta.is_zero() || !(beta < alpha)) invalid("beta must lie in (0, alpha)");
  if (epsilon.is_zero() || !epsilon.below_one()) invalid("epsilon must lie in (0, 1)");
  if (L < 1) invalid("L must be at least 1");
  if (b_size() < 1) invalid("floor(beta*n) must be at least 1");
  if (a_size() < b_size()) invalid("floor(alpha*n) must be at least floor(beta*n)");
}

HotTopicParams HotTopicParams::make(std::uint32_t n, const std::string& alpha, const std::string& beta,
                                    const std::string& epsilon, std::uint32_t L, std::uint64_t seed) {
  HotTopicParams p;
  p.n = n;
  p.alpha = Decimal::parse(alpha);
  p.beta = Decimal::parse(beta);
  p.epsilon = Decimal::parse(epsilon);
  p.L = L;
  p.seed = seed;
  return p;
}

HotTopicInstance HotTopicInstance::generate(const HotTopicParams& params, std::uint64_t entry_cap) {
  params.validate();
  const std::uint64_t entries = static_cast<std::uint64_t>(params.L) * params.a_size();
  if (entries > entry_cap) {
    std::ostringstream msg;
    msg << "HotTopic instance too large: L * floor(alpha*n) = " << entries << " set entries exceeds the cap of "
        << entry_cap << "; reduce L or n, or raise the cap";
    throw std::length_error(msg.str());
  }
  HotTopicInstance inst;
  inst.params_ = params;
  inst.A_.reserve(params.L);
  inst.B_.reserve(params.L);
  std::vector<Index> pool(params.n);
  for (std::uint32_t level = 1; level <= params.L; ++level) {
    RngStream rng(params.seed, level);
    std::iota(pool.begin(), pool.end(), Index{0});
    IndexSet a = partial_shuffle(pool, params.a_size(), rng);
    std::vector<Index> sub(a);
    IndexSet b = partial_shuffle(sub, params.b_size(), rng);
    inst.A_.push_back(std::move(a));
    inst.B_.push_back(std::move(b));
  }
  inst.build_indexes();
  return inst;
}

HotTopicInstance HotTopicInstance::from_sets(const HotTopicParams& params, std::vector<IndexSet> A,
                                             std::vector<IndexSet> B) {
  if (params.n < 2) invalid("n must be at least 2");
  if (params.epsilon.is_zero() || !params.epsilon.below_one()) invalid("epsilon must lie in (0, 1)");
  if (params.L < 1) invalid("L must be at least 1");
  if (A.size() != params.L || B.size() != params.L)
    throw std::invalid_argument("HotTopic sets: expected exactly L levels of A and B");
  for (std::uint32_t i = 0; i < params.L; ++i) {
    const std::string tag = " of level " + std::to_string(i + 1);
    check_sorted_set(A[i], params.n, "A" + tag);
    check_sorted_set(B[i], params.n, "B" + tag);
    if (A[i].size() >= params.n) throw std::invalid_argument("A" + tag + " must be a proper subset of [n]");
    if (B[i].empty()) throw std::invalid_argument("B" + tag + " must be non-empty");
    if (!std::includes(A[i].begin(), A[i].end(), B[i].begin(), B[i].end()))
      throw std::invalid_argument("B" + tag + " must be a subset of A" + tag);
  }
  HotTopicInstance inst;
  inst.params_ = params;
  inst.A_ = std::move(A);
  inst.B_ = std::move(B);
  inst.build_indexes();
  return inst;
}

void HotTopicInstance::build_indexes() {
  const std::uint32_t n = params_.n;
  tau_.resize(params_.L);
  for (std::uint32_t i = 0; i < params_.L; ++i)
    tau_[i] = static_cast<std::uint32_t>(params_.epsilon.floor_mul(B_[i].size()));

  auto build = [n](const std::vector<IndexSet>& sets, std::vector<std::uint32_t>& off,
                   std::vector<std::uint32_t>& levels) {
    off.assign(n + 1, 0);
    for (const auto& s : sets)
      for (Index j : s) ++off[j + 1];
    for (std::uint32_t j = 0; j < n; ++j) off[j + 1] += off[j];
    levels.resize(off[n]);
    std::vector<std::uint32_t> fill(off.begin(), off.end() - 1);
    for (std::uint32_t i = 0; i < sets.size(); ++i)
      for (Index j : sets[i]) levels[fill[j]++] = i;
  };
  build(A_, a_off_, a_levels_);
  build(B_, b_off_, b_levels_);
}

IndexSet HotTopicInstance::complement_of_A(std::uint32_t level) const {
  const IndexSet& a = A(level);
  IndexSet r;
  r.reserve(params_.n - a.size());
  std::size_t k = 0;
  for (Index j = 0; j < params_.n; ++j) {
    if (k < a.size() && a[k] == j) ++k;
    else r.push_back(j);
  }
  return r;
}

void HotTopicInstance::dump(std::ostream& out) const {
  out << "params " << params_.n << ' ' << params_.alpha.text() << ' ' << params_.beta.text() << ' '
      << params_.epsilon.text() << ' ' << params_.L << ' ' << params_.seed << '\n';
  auto line = [&out](char tag, std::uint32_t level, const IndexSet& s) {
    out << tag << ' ' << level << ':';
    for (Index j : s) out << ' ' << (j + 1);
    out << '\n';
  };
  for (std::uint32_t i = 0; i < params_.L; ++i) {
    line('A', i + 1, A_[i]);
    line('B', i + 1, B_[i]);
  }
}

HotTopicInstance HotTopicInstance::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("instance dump: missing params line");
  std::istringstream head(line);
  std::string tag, alpha, beta, eps;
  HotTopicParams p;
  if (!(head >> tag >> p.n >> alpha >> beta >> eps >> p.L >> p.seed) || tag != "params")
    throw std::invalid_argument("instance dump: malformed params line");
  p.alpha = Decimal::parse(alpha);
  p.beta = Decimal::parse(beta);
  p.epsilon = Decimal::parse(eps);

  std::vector<IndexSet> A, B;
  auto read_set = [&](char expect, std::uint32_t level) {
    if (!std::getline(in, line)) throw std::invalid_argument("instance dump: truncated at level " + std::to_string(level));
    std::istringstream ls(line);
    std::string t, lv;
    ls >> t >> lv;
    if (t != std::string(1, expect) || lv != std::to_string(level) + ":")
      throw std::invalid_argument("instance dump: expected '" + std::string(1, expect) + " " + std::to_string(level) +
                                  ":' line");
    IndexSet s;
    long long v;
    while (ls >> v) {
      if (v < 1 || v > p.n) throw std::invalid_argument("instance dump: position out of range");
      s.push_back(static_cast<Index>(v - 1));
    }
    if (!ls.eof()) throw std::invalid_argument("instance dump: malformed position list");
    return s;
  };
  for (std::uint32_t level = 1; level <= p.L; ++level) {
    A.push_back(read_set('A', level));
    B.push_back(read_set('B', level));
  }
  return from_sets(p, std::move(A), std::move(B));
}

}  // namespace htea
