#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wk {

/// Exact rational scalar. Backed by GMP; always kept in canonical form
/// (coprime numerator/denominator, positive denominator).
using Rational = mpq_class;
using Integer = mpz_class;

/// Raised when an operation is asked for outside its mathematical domain
/// (unstable surface type, bad index, malformed input value).
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when an internal cross-check fails: a quantity that must vanish
/// does not, a division that must be exact leaves a remainder, etc.
/// Never raised on well-formed input unless the library itself is wrong.
struct integrity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised on malformed or unreadable persistent state (cache files).
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rational make_rational(long num, long den) {
    if (den == 0) throw domain_error("make_rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "p/q" or "p" (optional sign, decimal digits). Throws domain_error
/// on anything else, including q = 0.
Rational parse_rational(const std::string& text);

/// Always renders as "p/q", q >= 1, even for integers ("5/1").
std::string fraction_string(const Rational& q);

/// Compact form: "p" when the denominator is 1, "p/q" otherwise.
std::string pretty_string(const Rational& q);

/// n! for n >= 0; domain_error for n < 0.
Integer factorial(long n);

/// n!! with the empty-product conventions 0!! = (-1)!! = 1; domain_error below -1.
Integer double_factorial(long n);

/// Binomial coefficient; 0 when k < 0 or k > n. n must be >= 0.
Integer binomial(long n, long k);

/// base^e for integer e (negative allowed when base != 0).
Rational rational_pow(const Rational& base, long e);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

}  // namespace wk
