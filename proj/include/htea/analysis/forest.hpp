#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "htea/core/rng.hpp"
#include "htea/engine/ea.hpp"

namespace htea {

struct ForestNode {
  // Individual id from the run, or the node index for synthetic forests.
  std::uint64_t id = 0;
  // Index of the parent node in the forest, -1 for a root.
  std::int64_t parent = -1;
  std::int64_t root = -1;
  std::int32_t rank = -1;
  std::uint32_t onemax = 0;
  std::uint32_t depth = 0;
  std::uint64_t birth = 0;
  std::optional<std::uint64_t> death;
  std::uint32_t flips = 0;
  // Reference-process node without a real individual behind it.
  bool dummy = false;
};

struct FamilyForest {
  std::int64_t threshold = 0;
  std::vector<ForestNode> nodes;
  std::size_t root_count() const;
};

// Forest over the admitted individuals of rank >= i; a node is a root when
// its parent has rank < i (or it is an initial individual).
FamilyForest build_family_forest(const RunRecord& rec, std::int64_t i);

// Number of nodes per depth.
std::vector<std::uint64_t> depth_profile(const FamilyForest& forest);
// Depth profile of the tree rooted at node index root.
std::vector<std::uint64_t> depth_profile(const FamilyForest& forest, std::int64_t root);

// Selection-free growth: one root at round 0; in each round every existing
// node spawns a child with probability 1/mu, then a new root is added.
FamilyForest simulate_reference_forest(double mu, std::uint64_t T, RngStream& rng);

// Per-depth node counts of the same process, simulated through binomial
// depth counts instead of explicit nodes: the round-0 tree alone and the
// whole forest (whose depth-0 count is the root count).
struct ReferenceDepthCounts {
  std::vector<std::uint64_t> first_tree;
  std::vector<std::uint64_t> all_trees;
  std::uint64_t roots = 0;
};
// With max_depth set, levels deeper than it are not simulated.
ReferenceDepthCounts simulate_reference_depths(double mu, std::uint64_t T, RngStream& rng,
                                               std::optional<std::uint32_t> max_depth = std::nullopt);

// Coupled construction of the reference forest from an aux run: rounds of the
// reference process start at t_i, the birth of the first individual of rank
// >= i. Real nodes selected as parents spawn the real offspring when it joins
// X_{>=i}, otherwise a dummy; dummy nodes and dead real nodes spawn dummies
// with probability 1/mu; each round adds one root (real if the offspring of a
// rank < i parent joins X_{>=i}).
struct CouplingResult {
  std::uint64_t t_i = 0;
  FamilyForest reference;
  FamilyForest family;  // F_i restricted to births in [t_i, t_i + T]
  // family node index -> reference node index
  std::vector<std::int64_t> embedding;
  bool embedded = false;
  std::string failure;
};
CouplingResult couple_reference_forest(const RunRecord& rec, std::int64_t i, std::uint64_t T, double mu,
                                       RngStream& rng);

// Parent links acyclic, depths consistent, death >= birth. Returns a
// description of the first violation.
std::optional<std::string> check_forest_structure(const FamilyForest& forest);

}  // namespace htea
