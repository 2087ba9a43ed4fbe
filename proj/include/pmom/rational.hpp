#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace pmom {

using i128 = __int128;
using u128 = unsigned __int128;

// Exact rational num/den in lowest terms with den > 0.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  // Accepts "p/q", integers, and decimal literals such as "0.0001" or "1e-4".
  // Decimal input is converted exactly ("1e-4" -> 1/10000).
  static Rational parse(std::string_view text);

  // Exact conversion of a finite binary64 value (every double is dyadic).
  static Rational from_double(double v);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  bool is_integer() const noexcept { return den_ == 1; }

  std::string str() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const i128 l = static_cast<i128>(a.num_) * b.den_;
    const i128 r = static_cast<i128>(b.num_) * a.den_;
    return l <=> r;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::int64_t gcd64(std::int64_t a, std::int64_t b);

}  // namespace pmom
