#pragma once

// Exact number helpers shared by every module: big integers and rationals
// are GMP's mpz_class / mpq_class.

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace rank1 {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Parses "p/q", "p" or "-p/q" into a canonical rational. Throws
/// std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Parses a decimal (optionally signed) big integer.
BigInt parse_bigint(std::string_view text);

/// "p/q" with q > 0; integers print as "p/1" so the form is uniform.
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

/// binary64 approximation, for reporting only.
double to_double(const Rational& q);

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// ceil(q) for rationals.
BigInt ceil(const Rational& q);

/// Signed machine integer when it fits, else throws std::overflow_error.
long long to_ll(const BigInt& z);

}  // namespace rank1
