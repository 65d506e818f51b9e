#include "htea/hottopic/regime.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace htea {

TheoremRegime theorem_regime(double mu, double eta, double rho, std::uint64_t n, double alpha,
                             std::uint64_t entry_cap) {
  if (!(mu >= 2.0)) throw std::invalid_argument("theorem_regime: mu must be at least 2 (ln mu = 0 at mu = 1)");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("theorem_regime: eta must lie in (0, 1)");
  if (!(rho > 0.0)) throw std::invalid_argument("theorem_regime: rho must be positive");
  TheoremRegime r;
  const double lm = std::log(mu);
  r.epsilon = std::pow(mu, -1.0 + eta);
  r.log_L = rho * r.epsilon * static_cast<double>(n) / (lm * lm);
  const double v = std::floor(std::exp(r.log_L));
  if (v >= 18446744073709551616.0) {
    r.L = UINT64_MAX;
    r.saturated = true;
  } else {
    r.L = v < 1.0 ? 1 : static_cast<std::uint64_t>(v);
  }
  const double entries = static_cast<double>(r.L) * std::floor(alpha * static_cast<double>(n));
  if (entries > static_cast<double>(entry_cap)) {
    std::ostringstream msg;
    msg << "L = " << r.L << " levels of " << std::floor(alpha * static_cast<double>(n))
        << " positions exceed the materialization cap of " << entry_cap << " set entries";
    r.warning = msg.str();
  }
  return r;
}

}  // namespace htea
