#include "toeplitz/rational.hpp"

#include "toeplitz/errors.hpp"

namespace toeplitz {

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw Error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_fraction_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_decimal_string(const Rational& q, int digits) {
  BigInt num = q.get_num();
  const BigInt& den = q.get_den();
  std::string sign;
  if (num < 0) {
    sign = "-";
    num = -num;
  }
  BigInt whole = num / den;
  BigInt rem = num % den;
  std::string out = sign + whole.get_str();
  if (digits <= 0) return out;
  out += '.';
  for (int i = 0; i < digits; ++i) {
    rem *= 10;
    BigInt d = rem / den;
    rem %= den;
    out += static_cast<char>('0' + d.get_si());
  }
  return out;
}

double to_double(const Rational& q) { return q.get_d(); }

nlohmann::json rational_json(const Rational& q) {
  return nlohmann::json{{"num", q.get_num().get_str()},
                        {"den", q.get_den().get_str()},
                        {"fraction", to_fraction_string(q)},
                        {"decimal", to_decimal_string(q)}};
}

Rational parse_rational(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0) throw ConfigError("not a rational number: '" + text + "'");
  if (q.get_den() == 0) throw ConfigError("zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const BigInt& z) { return z.get_str(); }

bool fits_int64(const BigInt& z) {
  static const BigInt lo = from_int64(INT64_MIN);
  static const BigInt hi = from_int64(INT64_MAX);
  return z >= lo && z <= hi;
}

bool fits_uint64(const BigInt& z) {
  static const BigInt hi = from_uint64(UINT64_MAX);
  return z >= 0 && z <= hi;
}

std::int64_t to_int64(const BigInt& z) {
  if (!fits_int64(z)) throw BudgetExceeded("integer " + z.get_str() + " exceeds 64-bit range");
  std::uint64_t mag = 0;
  BigInt a = abs(z);
  mpz_export(&mag, nullptr, -1, sizeof(mag), 0, 0, a.get_mpz_t());
  return z < 0 ? static_cast<std::int64_t>(0 - mag) : static_cast<std::int64_t>(mag);
}

std::uint64_t to_uint64(const BigInt& z) {
  if (!fits_uint64(z)) throw BudgetExceeded("integer " + z.get_str() + " exceeds unsigned 64-bit range");
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, z.get_mpz_t());
  return v;
}

BigInt from_uint64(std::uint64_t v) {
  BigInt z;
  mpz_import(z.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return z;
}

BigInt from_int64(std::int64_t v) {
  if (v >= 0) return from_uint64(static_cast<std::uint64_t>(v));
  BigInt z = from_uint64(0 - static_cast<std::uint64_t>(v));
  return -z;
}

}  // namespace toeplitz
