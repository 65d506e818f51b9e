#include "htea/analysis/local_probs.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "htea/core/mutation.hpp"

namespace htea {

LocalProbEstimate estimate_local_probs(const BitString& x, std::span<const Index> A, double c, std::uint64_t samples,
                                       RngStream& rng) {
  if (samples < 10000) throw std::invalid_argument("estimate_local_probs: at least 10^4 samples required");
  if (A.empty()) throw std::invalid_argument("estimate_local_probs: hot topic must be non-empty");
  const std::size_t n = x.size();
  // +1 for a zero on A (flipping it gains), -1 for a one on A, 0 elsewhere.
  std::vector<std::int8_t> gain(n, 0);
  for (Index j : A) {
    if (j >= n) throw std::out_of_range("estimate_local_probs: position outside the genome");
    gain[j] = x.get(j) ? -1 : 1;
  }
  Mutator mut(n, c);
  std::vector<Index> flips;
  std::uint64_t not_down = 0, up = 0, up2 = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    mut.sample_flips(rng, flips);
    long delta = 0;
    for (Index j : flips) delta += gain[j];
    not_down += delta >= 0;
    up += delta >= 1;
    up2 += delta >= 2;
  }
  LocalProbEstimate r;
  const double N = static_cast<double>(samples);
  r.samples = samples;
  r.p_R = static_cast<double>(not_down) / N;
  r.p_I = static_cast<double>(up) / N;
  r.se_R = std::sqrt(r.p_R * (1 - r.p_R) / N);
  r.se_I = std::sqrt(r.p_I * (1 - r.p_I) / N);
  if (up > 0) {
    r.ratio = static_cast<double>(up2) / static_cast<double>(up);
    r.se_ratio = std::sqrt(r.ratio * (1 - r.ratio) / static_cast<double>(up));
  } else {
    r.ratio = std::nan("");
    r.se_ratio = std::nan("");
  }

  const double a = static_cast<double>(A.size());
  const double rank = static_cast<double>(ones_on(x, A));
  r.eps_x = (a - rank) / a;
  r.alpha = a / static_cast<double>(n);
  const double ac = r.alpha * c;
  r.bound_R = std::exp(-ac) / 2;
  r.bound_L = r.eps_x * ac * std::exp(-ac) / 2;
  r.bound_U = r.eps_x * ac;
  const double i = rank + 1;
  r.eps_prime = std::max(1.0 - i / a, 2.0 * std::exp(1.0) * c / static_cast<double>(n));
  r.bound_ratio = 2 * r.eps_prime * ac;
  r.bound_tail = std::pow(2.0, -r.eps_prime * a);
  return r;
}

}  // namespace htea
