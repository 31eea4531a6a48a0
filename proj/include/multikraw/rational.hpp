#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace multikraw {

// All probability-level arithmetic is exact. GMP's canonical mpq keeps
// rationals in lowest terms with positive denominator; every constructor
// below canonicalizes. Floats are produced only at output boundaries.
using BigInt = mpz_class;
using Rational = mpq_class;

inline Rational rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational rational(const BigInt& num, const BigInt& den = 1) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational rational_pow(const Rational& base, long exp) {
    if (exp < 0) throw std::invalid_argument("rational_pow: negative exponent");
    Rational r;
    mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(base.get_mpq_t()),
               static_cast<unsigned long>(exp));
    mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(base.get_mpq_t()),
               static_cast<unsigned long>(exp));
    return r;
}

/// Parses "a/b", an integer "a", or a decimal literal like "0.25" (converted
/// by its exact decimal expansion, 25/100).
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& r);

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace multikraw
