#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace mmkit {

// All quantities in the library are exact rationals; no floating point is
// used anywhere on a value path.
using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

// Parses "p", "-p/q" or an exact decimal string such as "0.25".
// Throws validation_error(errc::parse_error) on malformed input or q == 0.
Rat parse_rational(std::string_view text);

// Canonical form: "p" when the denominator is 1, otherwise "p/q" with q > 1
// and gcd(p, q) == 1.  parse_rational(rat_to_string(x)) == x.
std::string rat_to_string(const Rat& x);

// Comma-separated list of rationals, e.g. "1/4,1/4" -> {1/4, 1/4}.
std::vector<Rat> parse_rational_list(std::string_view text);

inline Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }

inline Rat rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }

}  // namespace mmkit
