#pragma once

#include <gmpxx.h>

#include <string>

#include "betamarg/errors.hpp"

namespace betamarg {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational rat(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "p", "-p/q", "+p/q". Used for exact CLI parameters.
inline Rational parse_rational(const std::string& text) {
    std::string s = text;
    if (!s.empty() && s.front() == '+') s.erase(s.begin());
    if (s.empty()) throw BadParameter("empty rational literal");
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        bool ok = (c >= '0' && c <= '9') || c == '/' || (c == '-' && i == 0);
        if (!ok) throw BadParameter("bad rational literal: " + text);
    }
    try {
        Rational q(s);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw BadParameter("bad rational literal: " + text);
    }
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline bool is_nonneg_integer(const Rational& q) { return is_integer(q) && q >= 0; }

// q = m - 1/2 for integer m
inline bool is_half_odd(const Rational& q) { return q.get_den() == 2; }

inline long to_long(const Rational& q) {
    if (!is_integer(q) || !q.get_num().fits_slong_p())
        throw BadParameter("rational does not fit a machine integer: " + q.get_str());
    return q.get_num().get_si();
}

inline Integer factorial(unsigned long n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

// (2k-1)!! with (-1)!! = 1
inline Integer double_factorial_odd(long k) {
    Integer r = 1;
    for (long j = 2 * k - 1; j >= 1; j -= 2) r *= j;
    return r;
}

inline Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline Rational pow_rational(const Rational& q, long e) {
    if (e == 0) return 1;
    if (q == 0 && e < 0) throw BadParameter("0 raised to a negative power");
    Rational base = e > 0 ? q : Rational(1) / q;
    unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
    Rational acc = 1;
    while (n) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

}  // namespace betamarg
