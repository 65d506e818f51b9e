#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace htea {

// Genome position, 0-based. Textual forms (instance dumps, CSV) are 1-based.
using Index = std::uint32_t;
using IndexSet = std::vector<Index>;

// Exact zero density |{i in I : x_i = 0}| / |I|.
struct Density {
  std::uint64_t zeros = 0;
  std::uint64_t size = 1;
  double value() const { return static_cast<double>(zeros) / static_cast<double>(size); }
  bool operator==(const Density&) const = default;
};

// Fixed-length bit string packed 64 bits per word; unused high bits of the
// last word are kept zero.
class BitString {
 public:
  explicit BitString(std::size_t n);

  static BitString ones(std::size_t n);
  // '1'/'0' characters, first character is position 1.
  static BitString from_string(std::string_view s);

  // Fills words from a source of 64-bit values, one call per word.
  template <class Source>
  static BitString random(std::size_t n, Source& src) {
    BitString x(n);
    for (auto& w : x.words_) w = src.next_u64();
    x.trim();
    return x;
  }

  std::size_t size() const { return n_; }
  bool get(Index i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(Index i, bool v) {
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v) words_[i >> 6] |= m; else words_[i >> 6] &= ~m;
  }
  void flip(Index i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::size_t onemax() const;
  bool all_ones() const;
  std::string to_string() const;

  std::span<const std::uint64_t> words() const { return words_; }

  bool operator==(const BitString&) const = default;

 private:
  void trim();
  std::size_t n_;
  std::vector<std::uint64_t> words_;
};

class RngStream;

BitString random_bitstring(std::size_t n, RngStream& rng);

std::size_t onemax(const BitString& x);

// Zero density of x on I. I must be non-empty with positions < n.
Density density(const BitString& x, std::span<const Index> I);

// Ones of x on I.
std::size_t ones_on(const BitString& x, std::span<const Index> I);

}  // namespace htea
