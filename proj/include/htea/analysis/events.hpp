#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "htea/analysis/forest.hpp"
#include "htea/engine/ea.hpp"

namespace htea {

struct Lifetime {
  std::int64_t rank = 0;
  std::uint64_t first_birth = 0;  // t_i
  std::uint64_t last_death = 0;   // T_i
};

// t_i = first round an admitted individual of rank >= i is born; T_i = last
// round an admitted individual of rank <= i dies. Ranks whose band is still
// alive at the end, or lack either observation, are left out.
std::vector<Lifetime> measure_lifetimes(const RunRecord& rec);

struct GoodEventParams {
  double c = 1;
  double alpha = 0.25;
  double phi = 0.5;
  double k = 0;
  double c_d = 0;
  double c_e = 0;
  std::uint64_t K = 1;
  double g = 0;
  // min{g, 1/2 - g, c*phi/128, c_d/6}; eta must lie below it.
  double eta_bound = 0;
  std::optional<double> eta;
  bool eta_feasible = false;

  // Smallest admissible k is max(1, 9e^{alpha c}/(2 e^2 c ln 2)), exclusive.
  static double k_lower_bound(double c, double alpha);

  // c_d = c*phi/16, c_e = 2e^2*c*k, K = ceil(2(c_e + 1)/c_d),
  // g = phi(ln(8e^{alpha c + 1}) - ln phi). k defaults to 1.05 times its lower bound.
  static GoodEventParams make(double c, double alpha, double phi = 0.5, std::optional<double> k = std::nullopt,
                              std::optional<double> eta = std::nullopt);
};

struct GoodEventContext {
  double mu = 2;
  double epsilon = 0.05;
  std::uint32_t n = 0;
};

struct GoodEvents {
  bool a = true, b = true, c = true;
  std::optional<bool> d = true;
  bool e = true;
  std::size_t roots = 0;
  // Improving rank-i vertices whose root lies outside Om(r) >= (1 - 8 eps) n.
  std::size_t d_outside_regime = 0;
  // Unknown E_d counts as failure.
  bool all() const { return a && b && c && d.value_or(false) && e; }
};

// E_a .. E_e for threshold rank i, evaluated on the record and on forest
// (which must be build_family_forest(rec, i)).
GoodEvents check_good_events(const RunRecord& rec, const FamilyForest& forest, const GoodEventParams& params,
                             const GoodEventContext& ctx, std::int64_t i);

}  // namespace htea
