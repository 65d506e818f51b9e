#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace htea {

// Non-negative decimal number held exactly as num / 10^scale.
// Accepts "0.05", "3", ".5", "1e-3", "2.5E+1".
class Decimal {
 public:
  Decimal() = default;

  static Decimal parse(std::string_view text);
  // Shortest round-trip representation of v, then parsed exactly.
  static Decimal from_double(double v);

  // floor(value * m), exact.
  std::uint64_t floor_mul(std::uint64_t m) const;

  double to_double() const;
  const std::string& text() const { return text_; }

  int compare(const Decimal& other) const;
  bool operator==(const Decimal& o) const { return compare(o) == 0; }
  bool operator<(const Decimal& o) const { return compare(o) < 0; }
  bool operator<=(const Decimal& o) const { return compare(o) <= 0; }

  bool is_zero() const { return num_ == 0; }
  // value < 1
  bool below_one() const;

  // this + other, exact.
  Decimal plus(const Decimal& other) const;

 private:
  unsigned __int128 num_ = 0;
  int scale_ = 0;
  std::string text_ = "0";
};

}  // namespace htea
