#include "zeroprop/rational.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>

namespace zeroprop {
namespace {

[[noreturn]] void bad_literal(std::string_view text) {
  throw std::invalid_argument("not a decimal literal: '" + std::string(text) + "'");
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

Rational parse_fraction(std::string_view text, std::size_t slash) {
  Rational num = parse_decimal(text.substr(0, slash));
  std::string_view den_text = text.substr(slash + 1);
  if (!all_digits(den_text)) bad_literal(text);
  mpz_class den(std::string(den_text), 10);
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational q = num / Rational(den);
  q.canonicalize();
  return q;
}

}  // namespace

Rational parse_decimal(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text.empty()) bad_literal(text);

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return parse_fraction(text, slash);
  }

  bool negative = false;
  std::string_view s = text;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    s = s.substr(0, e);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 4) bad_literal(text);
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
  }

  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) bad_literal(text);
    if (!int_part.empty() && !all_digits(int_part)) bad_literal(text);
    if (!frac_part.empty() && !all_digits(frac_part)) bad_literal(text);
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(s)) bad_literal(text);
    digits = std::string(s);
  }

  mpz_class mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational q = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
  q.canonicalize();
  return q;
}

Rational from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("cannot convert a non-finite double to a rational");
  Rational q(v);
  q.canonicalize();
  return q;
}

double to_double(const Rational& q) {
  // mpq get_d truncates toward zero; step one ulp outward when that is closer.
  const double toward_zero = q.get_d();
  if (!std::isfinite(toward_zero) || toward_zero == std::numeric_limits<double>::max() ||
      toward_zero == -std::numeric_limits<double>::max()) {
    return toward_zero;
  }
  const Rational exact = from_double(toward_zero);
  if (exact == q) return toward_zero;
  const double outward =
      std::nextafter(toward_zero, q > exact ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity());
  const Rational err_in = abs(q - exact);
  const Rational err_out = abs(from_double(outward) - q);
  if (err_in < err_out) return toward_zero;
  if (err_out < err_in) return outward;
  std::uint64_t bits = 0;
  std::memcpy(&bits, &toward_zero, sizeof bits);
  return (bits & 1U) == 0 ? toward_zero : outward;
}

std::string shortest_decimal(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string decimal17(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

}  // namespace zeroprop
