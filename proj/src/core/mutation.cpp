#include "htea/core/mutation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace htea {

namespace {

std::uint64_t binomial_inversion(std::uint64_t n, double p, RngStream& rng) {
  const double q = 1.0 - p;
  const double r = p / q;
  double f = std::exp(static_cast<double>(n) * std::log1p(-p));
  double u = rng.uniform01();
  std::uint64_t k = 0;
  while (u >= f) {
    u -= f;
    if (++k >= n) return n;
    f *= r * static_cast<double>(n - k + 1) / static_cast<double>(k);
  }
  return k;
}

std::uint64_t binomial_waiting(std::uint64_t n, double p, RngStream& rng) {
  const double lq = std::log1p(-p);
  std::uint64_t k = 0;
  double pos = 0.0;
  const double limit = static_cast<double>(n);
  for (;;) {
    pos += std::floor(std::log(rng.uniform_pos()) / lq) + 1.0;
    if (pos > limit) return k;
    ++k;
  }
}

// Floyd's algorithm; `mark` is all-zero on entry and on exit when non-empty.
void floyd(Index n, Index k, RngStream& rng, std::vector<Index>& out, std::vector<std::uint8_t>* mark) {
  out.clear();
  if (k == 0) return;
  const bool linear = mark == nullptr || k <= 16;
  for (Index j = n - k; j < n; ++j) {
    const auto t = static_cast<Index>(rng.below(static_cast<std::uint64_t>(j) + 1));
    bool taken;
    if (linear) taken = std::find(out.begin(), out.end(), t) != out.end();
    else taken = (*mark)[t] != 0;
    const Index pick = taken ? j : t;
    out.push_back(pick);
    if (!linear) (*mark)[pick] = 1;
  }
  if (!linear)
    for (Index v : out) (*mark)[v] = 0;
  std::sort(out.begin(), out.end());
}

}  // namespace

std::uint64_t sample_binomial(std::uint64_t n, double p, RngStream& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_binomial: p must lie in [0, 1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  if (p > 0.5) return n - sample_binomial(n, 1.0 - p, rng);
  if (static_cast<double>(n) * p < 10.0) return binomial_inversion(n, p, rng);
  return binomial_waiting(n, p, rng);
}

std::uint64_t sample_geometric(double p, RngStream& rng) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("sample_geometric: p must lie in (0, 1]");
  if (p == 1.0) return 0;
  return static_cast<std::uint64_t>(std::floor(std::log(rng.uniform_pos()) / std::log1p(-p)));
}

void sample_subset(Index n, Index k, RngStream& rng, std::vector<Index>& out) {
  if (k > n) throw std::invalid_argument("sample_subset: k exceeds n");
  if (k <= 16) {
    floyd(n, k, rng, out, nullptr);
    return;
  }
  std::vector<std::uint8_t> mark(n, 0);
  floyd(n, k, rng, out, &mark);
}

Mutator::Mutator(std::size_t n, double c) : n_(n), c_(c) {
  if (n == 0) throw std::invalid_argument("Mutator: n must be at least 1");
  if (!(c >= 0.0 && c <= static_cast<double>(n)))
    throw std::invalid_argument("standard mutation requires 0 <= c <= n");
}

void Mutator::sample_flips(RngStream& rng, std::vector<Index>& flips) {
  const auto k = static_cast<Index>(sample_binomial(n_, c_ / static_cast<double>(n_), rng));
  if (k > 16 && mark_.empty()) mark_.assign(n_, 0);
  floyd(static_cast<Index>(n_), k, rng, flips, mark_.empty() ? nullptr : &mark_);
}

Mutation standard_mutation(const BitString& x, double c, RngStream& rng) {
  Mutator m(x.size(), c);
  Mutation out{x, {}};
  m.sample_flips(rng, out.flips);
  for (Index j : out.flips) out.y.flip(j);
  return out;
}

}  // namespace htea
