#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace htea::exp {

struct SuiteCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  bool pass = true;
  double seconds = 0;
  std::vector<SuiteCheck> checks;

  void add(std::string name, bool ok, std::string detail = {});
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  // Exactness suite only: corrupt this cache field of one incremental child
  // (onemax, level, aux_level, zerosB, onesA, fitness.level, fitness.hot,
  // fitness.rest). The suite must then fail and name the field.
  std::optional<std::string> inject_fault;
};

// exactness, monotonicity, lemma1, forest, drift.
const std::vector<std::string>& suite_names();

SuiteReport run_suite(const std::string& name, const SuiteOptions& opt);

// Report as a JSON object.
std::string suite_report_json(const std::vector<SuiteReport>& reports);

}  // namespace htea::exp
