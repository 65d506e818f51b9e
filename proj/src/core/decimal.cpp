#include "htea/core/decimal.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace htea {

namespace {

constexpr int kMaxScale = 36;
constexpr int kMaxDigits = 30;

unsigned __int128 pow10(int k) {
  unsigned __int128 p = 1;
  for (int i = 0; i < k; ++i) p *= 10;
  return p;
}

std::string render(unsigned __int128 num, int scale) {
  std::string digits;
  do {
    digits.push_back(static_cast<char>('0' + static_cast<int>(num % 10)));
    num /= 10;
  } while (num != 0);
  while (static_cast<int>(digits.size()) <= scale) digits.push_back('0');
  std::reverse(digits.begin(), digits.end());
  if (scale == 0) return digits;
  std::string out = digits.substr(0, digits.size() - scale) + "." + digits.substr(digits.size() - scale);
  while (out.back() == '0') out.pop_back();
  if (out.back() == '.') out.pop_back();
  return out;
}

[[noreturn]] void bad(std::string_view text) {
  throw std::invalid_argument("not a non-negative decimal number: '" + std::string(text) + "'");
}

}  // namespace

Decimal Decimal::parse(std::string_view text) {
  std::size_t i = 0;
  unsigned __int128 num = 0;
  int digits = 0, frac = 0;
  bool any = false, dot = false;
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '.') {
      if (dot) bad(text);
      dot = true;
      continue;
    }
    if (ch < '0' || ch > '9') break;
    any = true;
    if (num != 0 || ch != '0') ++digits;
    if (digits > kMaxDigits) bad(text);
    num = num * 10 + static_cast<unsigned>(ch - '0');
    if (dot) ++frac;
  }
  if (!any) bad(text);
  int exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') bad(text);
    ++i;
    if (i < text.size() && text[i] == '+') ++i;
    auto [p, ec] = std::from_chars(text.data() + i, text.data() + text.size(), exponent);
    if (ec != std::errc{} || p != text.data() + text.size()) bad(text);
  }
  int scale = frac - exponent;
  while (scale < 0) {
    num *= 10;
    ++scale;
    if (++digits > kMaxDigits) bad(text);
  }
  while (scale > 0 && num % 10 == 0 && num != 0) {
    num /= 10;
    --scale;
  }
  if (num == 0) scale = 0;
  if (scale > kMaxScale) bad(text);
  Decimal d;
  d.num_ = num;
  d.scale_ = scale;
  d.text_ = render(num, scale);
  return d;
}

Decimal Decimal::from_double(double v) {
  if (!(v >= 0.0) || v > 1e18) throw std::invalid_argument("Decimal::from_double: value out of range");
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::invalid_argument("Decimal::from_double: formatting failed");
  return parse(std::string_view(buf, static_cast<std::size_t>(p - buf)));
}

std::uint64_t Decimal::floor_mul(std::uint64_t m) const {
  const unsigned __int128 max = ~static_cast<unsigned __int128>(0);
  if (m != 0 && num_ > max / m) throw std::overflow_error("Decimal::floor_mul overflow");
  const unsigned __int128 q = (num_ * m) / pow10(scale_);
  if (q > UINT64_MAX) throw std::overflow_error("Decimal::floor_mul overflow");
  return static_cast<std::uint64_t>(q);
}

double Decimal::to_double() const {
  double v = 0.0;
  std::from_chars(text_.data(), text_.data() + text_.size(), v);
  return v;
}

int Decimal::compare(const Decimal& other) const {
  const int s = std::max(scale_, other.scale_);
  const unsigned __int128 a = num_ * pow10(s - scale_);
  const unsigned __int128 b = other.num_ * pow10(s - other.scale_);
  return a < b ? -1 : (a > b ? 1 : 0);
}

bool Decimal::below_one() const { return num_ < pow10(scale_); }

Decimal Decimal::plus(const Decimal& other) const {
  const int s = std::max(scale_, other.scale_);
  return parse(render(num_ * pow10(s - scale_) + other.num_ * pow10(s - other.scale_), s));
}

}  // namespace htea
