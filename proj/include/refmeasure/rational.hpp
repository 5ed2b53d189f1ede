#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace refmeasure {

/// Exact rational number. Probabilities, thresholds, and dyadic grids are kept
/// in this type so that boundary comparisons never depend on float rounding.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

double to_double(const Rational& r);

/// Exact conversion of a finite double into p/q (every finite double is a
/// dyadic rational). Throws DomainError on NaN or infinity.
Rational rational_from_double(double x);

/// Accepts "p/q", plain integers ("3"), and decimal literals ("0.75", "-1.5e-2")
/// with decimal (not binary) semantics.
Rational parse_rational(const std::string& text);

/// Canonical "p/q" rendering ("p" when the denominator is 1).
std::string format_rational(const Rational& r);

/// 2^-t as an exact rational, t >= 0.
Rational dyadic(int t);

}  // namespace refmeasure
