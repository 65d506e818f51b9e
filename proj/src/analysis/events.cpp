#include "htea/analysis/events.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace htea {

std::vector<Lifetime> measure_lifetimes(const RunRecord& rec) {
  constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> first_birth_at, last_death_at;
  std::int64_t min_rank = -1;
  auto grow = [&](std::size_t r) {
    if (first_birth_at.size() <= r) {
      first_birth_at.resize(r + 1, kNone);
      last_death_at.resize(r + 1, kNone);
    }
  };
  for (const Event& e : rec.events) {
    if (!e.admitted || e.rank < 0) continue;
    const auto r = static_cast<std::size_t>(e.rank);
    grow(r);
    if (e.kind == EventKind::birth) {
      first_birth_at[r] = std::min(first_birth_at[r], e.round);
      if (min_rank < 0 || e.rank < min_rank) min_rank = e.rank;
    } else if (last_death_at[r] == kNone || e.round > last_death_at[r]) {
      last_death_at[r] = e.round;
    }
  }
  std::vector<Lifetime> out;
  if (min_rank < 0 || rec.summary.final_ranks.empty()) return out;
  const std::int64_t complete =
      static_cast<std::int64_t>(*std::min_element(rec.summary.final_ranks.begin(), rec.summary.final_ranks.end())) - 1;
  const auto top = static_cast<std::int64_t>(first_birth_at.size()) - 1;
  // suffix minimum of first births
  std::vector<std::uint64_t> t_at(first_birth_at.size() + 1, kNone);
  for (std::int64_t r = top; r >= 0; --r)
    t_at[static_cast<std::size_t>(r)] = std::min(t_at[static_cast<std::size_t>(r) + 1], first_birth_at[static_cast<std::size_t>(r)]);
  std::uint64_t running = kNone;
  for (std::int64_t r = 0; r <= std::min(complete, top); ++r) {
    const std::uint64_t d = last_death_at[static_cast<std::size_t>(r)];
    if (d != kNone) running = running == kNone ? d : std::max(running, d);
    if (r < min_rank) continue;
    const std::uint64_t t = t_at[static_cast<std::size_t>(r)];
    if (t == kNone || running == kNone) continue;
    out.push_back(Lifetime{r, t, running});
  }
  return out;
}

double GoodEventParams::k_lower_bound(double c, double alpha) {
  const double e2 = std::exp(2.0);
  return std::max(1.0, 9.0 * std::exp(alpha * c) / (2.0 * e2 * c * std::log(2.0)));
}

GoodEventParams GoodEventParams::make(double c, double alpha, double phi, std::optional<double> k,
                                      std::optional<double> eta) {
  if (!(c > 0.0)) throw std::invalid_argument("GoodEventParams: c must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("GoodEventParams: alpha must lie in (0, 1)");
  if (!(phi > 0.0 && phi < 1.0)) throw std::invalid_argument("GoodEventParams: phi must lie in (0, 1)");
  GoodEventParams p;
  p.c = c;
  p.alpha = alpha;
  p.phi = phi;
  const double kmin = k_lower_bound(c, alpha);
  p.k = k.value_or(1.05 * kmin);
  if (!(p.k > kmin)) throw std::invalid_argument("GoodEventParams: k must exceed " + std::to_string(kmin));
  p.c_d = c * phi / 16.0;
  p.c_e = 2.0 * std::exp(2.0) * c * p.k;
  p.K = static_cast<std::uint64_t>(std::ceil(2.0 * (p.c_e + 1.0) / p.c_d));
  p.g = phi * (std::log(8.0 * std::exp(alpha * c + 1.0)) - std::log(phi));
  p.eta_bound = std::min({p.g, 0.5 - p.g, c * phi / 128.0, p.c_d / 6.0});
  p.eta = eta;
  p.eta_feasible = eta ? (*eta > 0.0 && *eta < p.eta_bound) : p.eta_bound > 0.0;
  return p;
}

GoodEvents check_good_events(const RunRecord& rec, const FamilyForest& forest, const GoodEventParams& params,
                             const GoodEventContext& ctx, std::int64_t i) {
  if (forest.threshold != i) throw std::invalid_argument("check_good_events: forest built for another threshold");
  GoodEvents g;
  const double lm = std::log(ctx.mu);
  const double n = ctx.n;

  // E_a over the raw log: parents of rank <= i-1 with admitted offspring of rank >= i+1.
  std::vector<std::int32_t> rank_by_id;
  for (const Event& e : rec.events) {
    if (e.kind != EventKind::birth) continue;
    if (rank_by_id.size() <= e.id) rank_by_id.resize(e.id + 1, -1);
    rank_by_id[e.id] = e.rank;
  }
  for (const Event& e : rec.events) {
    if (e.kind != EventKind::birth || !e.admitted || e.parent < 0 || e.rank < i + 1) continue;
    if (rank_by_id.at(static_cast<std::size_t>(e.parent)) <= i - 1) g.a = false;
  }

  g.roots = forest.root_count();
  g.b = static_cast<double>(g.roots) <= ctx.epsilon * ctx.mu * lm * lm * lm;

  std::vector<std::vector<std::size_t>> kids(forest.nodes.size());
  for (std::size_t k = 0; k < forest.nodes.size(); ++k)
    if (forest.nodes[k].parent >= 0) kids[static_cast<std::size_t>(forest.nodes[k].parent)].push_back(k);

  const double depth_cap = params.phi * lm;
  const double flip_cap = params.c_d / 2.0 * lm;
  for (std::size_t k = 0; k < forest.nodes.size(); ++k) {
    const ForestNode& x = forest.nodes[k];
    if (x.rank != i) continue;
    const ForestNode& r = forest.nodes[static_cast<std::size_t>(x.root)];
    if (static_cast<double>(x.onemax) > static_cast<double>(r.onemax) + params.c_e * lm) g.e = false;
    for (std::size_t kid : kids[k]) {
      const ForestNode& y = forest.nodes[kid];
      if (y.rank <= i) continue;
      if (static_cast<double>(x.depth) <= depth_cap) g.c = false;
      if (!rec.has_flip_counts) {
        g.d = std::nullopt;
        continue;
      }
      bool ok;
      if (static_cast<double>(r.onemax) >= (1.0 - 8.0 * ctx.epsilon) * n) {
        ok = static_cast<double>(x.onemax) <= static_cast<double>(r.onemax) - params.c_d * lm;
      } else {
        ++g.d_outside_regime;
        ok = static_cast<double>(x.onemax) <= (1.0 - 4.0 * ctx.epsilon) * n;
      }
      ok = ok && static_cast<double>(y.flips) <= flip_cap;
      if (!ok && g.d) g.d = false;
    }
  }
  return g;
}

}  // namespace htea
