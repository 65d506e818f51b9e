#include "htea/analysis/forest.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "htea/core/mutation.hpp"

namespace htea {

std::size_t FamilyForest::root_count() const {
  std::size_t r = 0;
  for (const auto& v : nodes) r += v.parent < 0 ? 1 : 0;
  return r;
}

namespace {

struct EventIndex {
  std::vector<const Event*> birth;  // by id
  std::vector<std::optional<std::uint64_t>> death;  // by id, admitted individuals only

  explicit EventIndex(const RunRecord& rec) {
    for (const Event& e : rec.events) {
      if (e.kind != EventKind::birth) continue;
      if (birth.size() <= e.id) {
        birth.resize(e.id + 1, nullptr);
        death.resize(e.id + 1);
      }
      birth[e.id] = &e;
    }
    for (const Event& e : rec.events)
      if (e.kind == EventKind::death && e.id < death.size()) death[e.id] = e.round;
  }
};

void check_mu(double mu) {
  if (!(mu >= 1.0)) throw std::invalid_argument("reference forest: mu must be at least 1");
}

}  // namespace

FamilyForest build_family_forest(const RunRecord& rec, std::int64_t i) {
  const EventIndex idx(rec);
  FamilyForest f;
  f.threshold = i;
  std::unordered_map<std::uint64_t, std::int64_t> node_of;
  for (const Event& e : rec.events) {
    if (e.kind != EventKind::birth || !e.admitted || e.rank < i) continue;
    ForestNode v;
    v.id = e.id;
    v.rank = e.rank;
    v.onemax = e.onemax;
    v.birth = e.round;
    v.flips = e.flips;
    v.death = idx.death[e.id];
    const Event* pe = e.parent >= 0 ? idx.birth.at(static_cast<std::size_t>(e.parent)) : nullptr;
    const auto self = static_cast<std::int64_t>(f.nodes.size());
    if (pe == nullptr || pe->rank < i) {
      v.parent = -1;
      v.depth = 0;
      v.root = self;
    } else {
      auto it = node_of.find(pe->id);
      if (it == node_of.end()) throw std::logic_error("family forest: parent of rank >= i missing from the forest");
      const ForestNode& p = f.nodes[static_cast<std::size_t>(it->second)];
      v.parent = it->second;
      v.depth = p.depth + 1;
      v.root = p.root;
    }
    node_of.emplace(e.id, self);
    f.nodes.push_back(v);
  }
  return f;
}

std::vector<std::uint64_t> depth_profile(const FamilyForest& forest) {
  std::vector<std::uint64_t> counts;
  for (const auto& v : forest.nodes) {
    if (counts.size() <= v.depth) counts.resize(v.depth + 1, 0);
    ++counts[v.depth];
  }
  return counts;
}

std::vector<std::uint64_t> depth_profile(const FamilyForest& forest, std::int64_t root) {
  std::vector<std::uint64_t> counts;
  for (const auto& v : forest.nodes) {
    if (v.root != root) continue;
    if (counts.size() <= v.depth) counts.resize(v.depth + 1, 0);
    ++counts[v.depth];
  }
  return counts;
}

FamilyForest simulate_reference_forest(double mu, std::uint64_t T, RngStream& rng) {
  check_mu(mu);
  const double p = 1.0 / mu;
  FamilyForest f;
  std::vector<std::vector<std::uint32_t>> due(T + 2);
  auto schedule = [&](std::uint32_t node, std::uint64_t from) {
    const std::uint64_t r = from + sample_geometric(p, rng);
    if (r <= T) due[r].push_back(node);
  };
  auto add = [&](std::int64_t parent, std::uint64_t round) {
    ForestNode v;
    v.id = f.nodes.size();
    v.parent = parent;
    v.birth = round;
    v.dummy = true;
    if (parent < 0) {
      v.root = static_cast<std::int64_t>(v.id);
    } else {
      const ForestNode& pv = f.nodes[static_cast<std::size_t>(parent)];
      v.depth = pv.depth + 1;
      v.root = pv.root;
    }
    f.nodes.push_back(v);
    schedule(static_cast<std::uint32_t>(v.id), round + 1);
  };
  add(-1, 0);
  for (std::uint64_t t = 1; t <= T; ++t) {
    std::vector<std::uint32_t> now;
    now.swap(due[t]);
    for (std::uint32_t node : now) {
      add(node, t);
      schedule(node, t + 1);
    }
    add(-1, t);
  }
  return f;
}

ReferenceDepthCounts simulate_reference_depths(double mu, std::uint64_t T, RngStream& rng,
                                               std::optional<std::uint32_t> max_depth) {
  check_mu(mu);
  const double p = 1.0 / mu;
  const std::size_t cap = max_depth ? *max_depth : std::numeric_limits<std::size_t>::max() - 1;
  ReferenceDepthCounts out;
  std::vector<std::uint64_t> born;
  auto grow = [&](std::vector<std::uint64_t>& counts) {
    born.assign(counts.size() + 1, 0);
    // Depth d + 1 depends only on depth d, so dropping deeper levels leaves
    // the shallow ones untouched in distribution.
    for (std::size_t d = 0; d < counts.size() && d < cap; ++d) born[d + 1] = sample_binomial(counts[d], p, rng);
    if (born.back() > 0) counts.push_back(0);
    for (std::size_t d = 1; d < counts.size(); ++d) counts[d] += born[d];
  };
  // Trees rooted after round 0 are tracked apart so the first tree stays a
  // part of the same sample.
  std::vector<std::uint64_t> later{0};
  out.first_tree.assign(1, 1);
  for (std::uint64_t t = 1; t <= T; ++t) {
    grow(out.first_tree);
    grow(later);
    ++later[0];
  }
  out.all_trees.assign(std::max(out.first_tree.size(), later.size()), 0);
  for (std::size_t d = 0; d < out.first_tree.size(); ++d) out.all_trees[d] += out.first_tree[d];
  for (std::size_t d = 0; d < later.size(); ++d) out.all_trees[d] += later[d];
  out.roots = out.all_trees[0];
  return out;
}

CouplingResult couple_reference_forest(const RunRecord& rec, std::int64_t i, std::uint64_t T, double mu,
                                       RngStream& rng) {
  check_mu(mu);
  const double p = 1.0 / mu;
  const EventIndex idx(rec);
  CouplingResult out;

  std::vector<const Event*> offspring_of_round(rec.summary.rounds + 1, nullptr);
  for (const Event& e : rec.events) {
    if (e.kind != EventKind::birth) continue;
    if (e.round == 0) {
      if (e.rank >= i) throw std::invalid_argument("coupling: threshold rank must exceed every initial rank");
      continue;
    }
    offspring_of_round.at(e.round) = &e;
  }
  std::optional<std::uint64_t> first;
  for (std::uint64_t t = 1; t < offspring_of_round.size(); ++t) {
    const Event* e = offspring_of_round[t];
    if (e != nullptr && e->admitted && e->rank >= i) {
      first = t;
      break;
    }
  }
  if (!first) throw std::invalid_argument("coupling: no individual of rank >= i was ever admitted");
  const std::uint64_t ti = *first;
  out.t_i = ti;
  if (ti + T > rec.summary.rounds) throw std::invalid_argument("coupling: run ends before t_i + T");

  FamilyForest& ref = out.reference;
  ref.threshold = i;
  std::unordered_map<std::uint64_t, std::int64_t> ref_of;
  std::vector<std::vector<std::uint32_t>> due(T + 2);
  auto schedule = [&](std::int64_t node, std::uint64_t from) {
    const std::uint64_t r = from + sample_geometric(p, rng);
    if (r <= T) due[r].push_back(static_cast<std::uint32_t>(node));
  };
  // real: birth event of the individual, or null for a dummy.
  auto add = [&](std::int64_t parent, std::uint64_t s, const Event* real) {
    ForestNode v;
    v.parent = parent;
    v.birth = s;
    const auto self = static_cast<std::int64_t>(ref.nodes.size());
    if (parent < 0) {
      v.root = self;
    } else {
      const ForestNode& pv = ref.nodes[static_cast<std::size_t>(parent)];
      v.depth = pv.depth + 1;
      v.root = pv.root;
    }
    if (real != nullptr) {
      v.id = real->id;
      v.rank = real->rank;
      v.onemax = real->onemax;
      v.flips = real->flips;
      v.dummy = false;
      ref_of.emplace(real->id, self);
      const auto d = idx.death.at(real->id);
      if (d) {
        v.death = *d - ti;
        if (*d < ti + T) schedule(self, *d - ti + 1);
      }
    } else {
      v.id = static_cast<std::uint64_t>(self);
      v.dummy = true;
      schedule(self, s + 1);
    }
    ref.nodes.push_back(v);
    return self;
  };

  add(-1, 0, offspring_of_round[ti]);
  for (std::uint64_t s = 1; s <= T; ++s) {
    std::vector<std::uint32_t> now;
    now.swap(due[s]);
    for (std::uint32_t node : now) {
      add(node, s, nullptr);
      schedule(node, s + 1);
    }
    const Event* y = offspring_of_round.at(ti + s);
    if (y == nullptr) throw std::logic_error("coupling: round without an offspring");
    const bool y_joins = y->admitted && y->rank >= i;
    const Event* x = idx.birth.at(static_cast<std::size_t>(y->parent));
    if (x->rank >= i) {
      auto it = ref_of.find(x->id);
      if (it == ref_of.end()) throw std::logic_error("coupling: selected parent of rank >= i has no reference node");
      add(it->second, s, y_joins ? y : nullptr);
      add(-1, s, nullptr);
    } else {
      add(-1, s, y_joins ? y : nullptr);
    }
  }

  FamilyForest full = build_family_forest(rec, i);
  out.family.threshold = i;
  std::vector<std::int64_t> remap(full.nodes.size(), -1);
  for (std::size_t k = 0; k < full.nodes.size(); ++k) {
    ForestNode v = full.nodes[k];
    if (v.birth > ti + T) continue;
    remap[k] = static_cast<std::int64_t>(out.family.nodes.size());
    if (v.parent >= 0) v.parent = remap[static_cast<std::size_t>(v.parent)];
    v.root = remap[static_cast<std::size_t>(v.root)];
    out.family.nodes.push_back(v);
  }

  out.embedded = true;
  auto fail = [&](const std::string& why) {
    if (out.embedded) out.failure = why;
    out.embedded = false;
  };
  if (ref.root_count() != T + 1) fail("reference forest has " + std::to_string(ref.root_count()) + " roots");
  std::vector<bool> used(ref.nodes.size(), false);
  out.embedding.assign(out.family.nodes.size(), -1);
  for (std::size_t k = 0; k < out.family.nodes.size(); ++k) {
    const ForestNode& v = out.family.nodes[k];
    auto it = ref_of.find(v.id);
    if (it == ref_of.end()) {
      fail("individual " + std::to_string(v.id) + " has no reference node");
      continue;
    }
    const auto r = static_cast<std::size_t>(it->second);
    if (used[r]) fail("reference node " + std::to_string(r) + " used twice");
    used[r] = true;
    out.embedding[k] = it->second;
    const ForestNode& rv = ref.nodes[r];
    if (v.parent < 0) {
      if (rv.parent >= 0) fail("root individual " + std::to_string(v.id) + " maps to a non-root");
    } else if (rv.parent != out.embedding[static_cast<std::size_t>(v.parent)]) {
      fail("parent link of individual " + std::to_string(v.id) + " not preserved");
    }
  }
  return out;
}

std::optional<std::string> check_forest_structure(const FamilyForest& forest) {
  for (std::size_t k = 0; k < forest.nodes.size(); ++k) {
    const ForestNode& v = forest.nodes[k];
    const std::string tag = "node " + std::to_string(k);
    if (v.death && *v.death < v.birth) return tag + ": death before birth";
    if (v.parent < 0) {
      if (v.depth != 0) return tag + ": root with non-zero depth";
      if (v.root != static_cast<std::int64_t>(k)) return tag + ": root does not point to itself";
      continue;
    }
    if (v.parent >= static_cast<std::int64_t>(k)) return tag + ": parent not created earlier";
    const ForestNode& p = forest.nodes[static_cast<std::size_t>(v.parent)];
    if (v.depth != p.depth + 1) return tag + ": depth differs from parent depth + 1";
    if (v.root != p.root) return tag + ": root differs from the parent's root";
    if (v.birth < p.birth) return tag + ": born before its parent";
  }
  return std::nullopt;
}

}  // namespace htea
