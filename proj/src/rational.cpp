#include "pmom/rational.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "pmom/error.hpp"

namespace pmom {

namespace {

constexpr i128 kI64Max = std::numeric_limits<std::int64_t>::max();

Rational reduce(i128 num, i128 den, std::string_view ctx) {
  if (den == 0) fail(ErrorKind::InvalidArgument, "zero denominator in '" + std::string(ctx) + "'");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  if (num > kI64Max || num < -kI64Max || den > kI64Max)
    fail(ErrorKind::Range, "rational out of 64-bit range: '" + std::string(ctx) + "'");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

i128 parse_int(std::string_view s, std::string_view ctx) {
  std::int64_t v = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last || first == last)
    fail(ErrorKind::InvalidArgument, "not an integer: '" + std::string(ctx) + "'");
  return v;
}

Rational parse_decimal(std::string_view s, std::string_view ctx) {
  bool neg = false;
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    neg = s[i] == '-';
    ++i;
  }
  i128 mant = 0;
  int exp10 = 0;
  bool any_digit = false;
  bool seen_dot = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (c >= '0' && c <= '9') {
      any_digit = true;
      mant = mant * 10 + (c - '0');
      if (mant > static_cast<i128>(1) << 100)
        fail(ErrorKind::Range, "too many digits: '" + std::string(ctx) + "'");
      if (seen_dot) --exp10;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any_digit) fail(ErrorKind::InvalidArgument, "not a number: '" + std::string(ctx) + "'");
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E')
      fail(ErrorKind::InvalidArgument, "not a number: '" + std::string(ctx) + "'");
    const i128 e = parse_int(s.substr(i + 1), ctx);
    if (e > 40 || e < -40) fail(ErrorKind::Range, "exponent out of range: '" + std::string(ctx) + "'");
    exp10 += static_cast<int>(e);
  }
  i128 num = neg ? -mant : mant;
  i128 den = 1;
  for (; exp10 > 0; --exp10) {
    num *= 10;
    if (num > kI64Max * 1000 || num < -kI64Max * 1000)
      fail(ErrorKind::Range, "value out of range: '" + std::string(ctx) + "'");
  }
  for (; exp10 < 0; ++exp10) {
    den *= 10;
    if (den > static_cast<i128>(1) << 110)
      fail(ErrorKind::Range, "value out of range: '" + std::string(ctx) + "'");
  }
  return reduce(num, den, ctx);
}

}  // namespace

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) fail(ErrorKind::InvalidArgument, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = gcd64(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

Rational Rational::parse(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) fail(ErrorKind::InvalidArgument, "empty rational");
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const i128 p = parse_int(trim(s.substr(0, slash)), s);
    const i128 q = parse_int(trim(s.substr(slash + 1)), s);
    return reduce(p, q, s);
  }
  return parse_decimal(s, s);
}

Rational Rational::from_double(double v) {
  if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "non-finite value");
  int e = 0;
  const double m = std::frexp(v, &e);  // v = m * 2^e, 0.5 <= |m| < 1
  i128 num = static_cast<i128>(std::ldexp(m, 53));
  e -= 53;
  i128 den = 1;
  while (e < 0 && (num % 2) == 0 && num != 0) {
    num /= 2;
    ++e;
  }
  if (num == 0) return Rational(0, 1);
  if (e > 0) {
    if (e > 62) fail(ErrorKind::Range, "value out of rational range");
    num <<= e;
  } else if (e < 0) {
    if (-e > 62) fail(ErrorKind::Range, "value needs a denominator above 2^62");
    den <<= -e;
  }
  return reduce(num, den, "double");
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace pmom
