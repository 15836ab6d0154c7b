#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "mr1l/errors.hpp"

namespace mr1l {

using BigInt = mpz_class;

// Accurate log2 of a positive BigInt (values can be tens of thousands of
// bits wide, far outside double range).
inline double log2_big(const BigInt& v) {
  signed long exp = 0;
  double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp);
}

// Non-negative residue of v modulo a word-sized m (m >= 1).
inline std::uint64_t mod_word(const BigInt& v, std::uint64_t m) {
  // mpz_fdiv_ui floors the quotient, so the remainder is already in [0, m).
  return mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(m));
}

inline BigInt pow_big(std::uint64_t base, std::uint64_t exp) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base),
                static_cast<unsigned long>(exp));
  return r;
}

inline BigInt parse_big(const std::string& s) {
  BigInt v;
  if (v.set_str(s, 10) != 0) throw validation_error("invalid integer literal: " + s);
  return v;
}

inline std::optional<std::int64_t> to_i64(const BigInt& v) {
  if (!v.fits_slong_p()) return std::nullopt;
  return static_cast<std::int64_t>(v.get_si());
}

}  // namespace mr1l
