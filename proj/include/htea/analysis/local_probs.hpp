#pragma once

#include <cstdint>
#include <span>

#include "htea/core/bitstring.hpp"
#include "htea/core/rng.hpp"

namespace htea {

struct LocalProbEstimate {
  std::uint64_t samples = 0;
  // Pr[ones on A not decreased], Pr[strictly increased]
  double p_R = 0, p_I = 0;
  double se_R = 0, se_I = 0;
  // Pr[rk(y) >= i+1] / Pr[rk(y) >= i] at i = rk(x) + 1; NaN if no offspring reached i.
  double ratio = 0;
  double se_ratio = 0;

  // Analytic bounds.
  double eps_x = 0;           // d(A, x)
  double alpha = 0;           // |A| / n
  double bound_R = 0;         // e^{-alpha c} / 2
  double bound_L = 0;         // eps_x alpha c e^{-alpha c} / 2
  double bound_U = 0;         // eps_x alpha c
  double eps_prime = 0;       // max(1 - i/|A|, 2ec/n)
  double bound_ratio = 0;     // 2 eps' alpha c
  double bound_tail = 0;      // 2^{-eps' alpha n}
};

// Monte Carlo over samples >= 10^4 standard bit mutations of x.
LocalProbEstimate estimate_local_probs(const BitString& x, std::span<const Index> A, double c, std::uint64_t samples,
                                       RngStream& rng);

}  // namespace htea
