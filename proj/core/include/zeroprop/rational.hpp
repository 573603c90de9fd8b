#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace zeroprop {

using Rational = mpq_class;

/// Parses a decimal literal ("-0.158", "4.635", "1e-3", "+2") or a fraction
/// ("3/4") into an exact rational. Throws std::invalid_argument on bad input.
Rational parse_decimal(std::string_view text);

/// Exact binary value of a finite double.
Rational from_double(double v);

/// Nearest double, ties to even.
double to_double(const Rational& q);

/// Shortest decimal that round-trips the double (locale independent).
std::string shortest_decimal(double v);

/// Decimal with 17 significant digits (locale independent).
std::string decimal17(double v);

}  // namespace zeroprop
