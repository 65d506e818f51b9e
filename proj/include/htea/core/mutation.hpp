#pragma once

#include <cstdint>
#include <vector>

#include "htea/core/bitstring.hpp"
#include "htea/core/rng.hpp"

namespace htea {

// Exact Binomial(n, p) draw. Sequential inversion for means below 10,
// otherwise summed geometric waiting times; p > 1/2 is reflected.
std::uint64_t sample_binomial(std::uint64_t n, double p, RngStream& rng);

// Number of failures before the first success, p in (0, 1].
std::uint64_t sample_geometric(double p, RngStream& rng);

// Uniform k-subset of {0, ..., n-1} by Floyd's algorithm, sorted ascending.
void sample_subset(Index n, Index k, RngStream& rng, std::vector<Index>& out);

// Standard bit mutation with rate c/n, as a reusable sampler holding scratch
// space so the per-offspring path does not allocate.
class Mutator {
 public:
  Mutator(std::size_t n, double c);

  // Flipped positions for one offspring, sorted ascending.
  void sample_flips(RngStream& rng, std::vector<Index>& flips);

  std::size_t n() const { return n_; }
  double c() const { return c_; }

 private:
  std::size_t n_;
  double c_;
  std::vector<std::uint8_t> mark_;
};

struct Mutation {
  BitString y;
  std::vector<Index> flips;
};

// Requires 0 <= c <= n.
Mutation standard_mutation(const BitString& x, double c, RngStream& rng);

}  // namespace htea
