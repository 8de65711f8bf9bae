#pragma once

#include <gmpxx.h>

#include <nlohmann/json.hpp>
#include <cstdint>
#include <string>

namespace toeplitz {

using BigInt = mpz_class;
using Rational = mpq_class;

Rational make_rational(const BigInt& num, const BigInt& den);

// "p/q" (or "p" when q == 1).
std::string to_fraction_string(const Rational& q);

// Decimal rendering truncated toward zero, `digits` places after the point.
std::string to_decimal_string(const Rational& q, int digits = 12);

double to_double(const Rational& q);

// {"num": "...", "den": "...", "fraction": "p/q", "decimal": "0.123"}
nlohmann::json rational_json(const Rational& q);

Rational parse_rational(const std::string& text);

std::string to_string(const BigInt& z);

// Returns false when z does not fit.
bool fits_int64(const BigInt& z);
bool fits_uint64(const BigInt& z);
std::int64_t to_int64(const BigInt& z);
std::uint64_t to_uint64(const BigInt& z);
BigInt from_int64(std::int64_t v);
BigInt from_uint64(std::uint64_t v);

}  // namespace toeplitz
