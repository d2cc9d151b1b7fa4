#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>

namespace pepa {

// Exact arbitrary-precision rational. All rate arithmetic, generator entries
// and stationary vectors use this type; doubles appear only in explicitly
// floating-point views.
using Rational = mpq_class;

// Accepts "7", "-7", "7/3" and decimal literals like "0.25" or "1.5e-2".
// Returns nullopt on anything else (including division by zero).
std::optional<Rational> parse_rational(const std::string& text);

// "7" for integers, "7/3" otherwise. Canonical (lowest terms, positive
// denominator), so equal rationals format identically.
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

std::size_t hash_rational(const Rational& value);

}  // namespace pepa
