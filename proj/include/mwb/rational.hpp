#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace mwb {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Parses "p/q", "-12", "3.25" or "1e-6" into an exact rational.
/// Throws InputError on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when integral) representation.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// Exact rational value of a finite double (every double is dyadic).
Rational rational_from_double(double x);

/// Natural log of |z| for z != 0, accurate for arbitrarily large z.
double log_abs(const Integer& z);

/// Natural log of a positive rational.
double log_of(const Rational& q);

double to_double(const Rational& q);

Integer factorial(unsigned n);
Integer binomial(unsigned n, unsigned k);
Integer ipow(const Integer& base, unsigned exp);
Rational qpow(const Rational& base, unsigned exp);

/// Exact determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination.
Integer bareiss_determinant(std::vector<std::vector<Integer>> m);

/// Shortest round-trip decimal for a double ("%.17g" fallback). Stable
/// across runs, which the report writers depend on.
std::string format_real(double x);

}  // namespace mwb
