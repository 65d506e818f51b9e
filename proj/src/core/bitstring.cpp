#include "htea/core/bitstring.hpp"

#include <bit>
#include <stdexcept>

#include "htea/core/rng.hpp"

namespace htea {

BitString::BitString(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {
  if (n == 0) throw std::invalid_argument("BitString: length must be at least 1");
}

BitString BitString::ones(std::size_t n) {
  BitString x(n);
  for (auto& w : x.words_) w = ~std::uint64_t{0};
  x.trim();
  return x;
}

BitString BitString::from_string(std::string_view s) {
  BitString x(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') x.set(static_cast<Index>(i), true);
    else if (s[i] != '0') throw std::invalid_argument("BitString: expected only '0' and '1'");
  }
  return x;
}

void BitString::trim() {
  const std::size_t r = n_ & 63;
  if (r != 0) words_.back() &= (std::uint64_t{1} << r) - 1;
}

std::size_t BitString::onemax() const {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool BitString::all_ones() const { return onemax() == n_; }

std::string BitString::to_string() const {
  std::string s(n_, '0');
  for (std::size_t i = 0; i < n_; ++i)
    if (get(static_cast<Index>(i))) s[i] = '1';
  return s;
}

BitString random_bitstring(std::size_t n, RngStream& rng) { return BitString::random(n, rng); }

std::size_t onemax(const BitString& x) { return x.onemax(); }

std::size_t ones_on(const BitString& x, std::span<const Index> I) {
  std::size_t ones = 0;
  for (Index j : I) {
    if (j >= x.size()) throw std::out_of_range("index set position outside the genome");
    ones += x.get(j);
  }
  return ones;
}

Density density(const BitString& x, std::span<const Index> I) {
  if (I.empty()) throw std::invalid_argument("density: index set must be non-empty");
  return Density{I.size() - ones_on(x, I), I.size()};
}

}  // namespace htea
