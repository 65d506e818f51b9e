#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "htea/engine/ea.hpp"
#include "htea/exp/config.hpp"

namespace htea::exp::detail {

EAConfig ea_config(const ExperimentConfig& cfg, std::uint32_t mu, const Decimal& c, const FitnessMode& mode,
                   std::uint64_t budget, std::uint64_t seed);

// Creates dir if needed.
std::ofstream open_csv(const std::string& dir, const std::string& name);

struct Moments {
  double mean = 0, std = 0, min = 0, max = 0;
};
// Sample standard deviation (n - 1); 0 for a single value.
Moments moments(const std::vector<double>& xs);

const char* stop_name(StopReason s);

}  // namespace htea::exp::detail
