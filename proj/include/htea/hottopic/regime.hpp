#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace htea {

struct TheoremRegime {
  double epsilon = 0;
  // floor(exp(rho*eps*n / ln^2 mu)) clamped to >= 1; saturates at UINT64_MAX.
  std::uint64_t L = 1;
  // Natural log of the unclamped L, useful when it saturates.
  double log_L = 0;
  bool saturated = false;
  // Set when L * floor(alpha n) would exceed the materialization cap.
  std::optional<std::string> warning;
};

// epsilon = mu^(-1+eta), L = floor(exp(rho*epsilon*n / ln^2 mu)). Requires mu >= 2,
// 0 < eta < 1, rho > 0. alpha is used only for the cap warning.
TheoremRegime theorem_regime(double mu, double eta, double rho, std::uint64_t n, double alpha = 0.25,
                             std::uint64_t entry_cap = 50'000'000);

}  // namespace htea
