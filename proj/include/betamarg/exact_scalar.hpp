#pragma once

#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "betamarg/errors.hpp"
#include "betamarg/rational.hpp"

namespace betamarg {

// Basis element pi^(pi_half/2) * sqrt(rad), rad squarefree positive.
struct Radical {
    int pi_half = 0;
    Integer rad = 1;

    friend bool operator<(const Radical& a, const Radical& b) {
        if (a.pi_half != b.pi_half) return a.pi_half < b.pi_half;
        return a.rad < b.rad;
    }
    friend bool operator==(const Radical& a, const Radical& b) {
        return a.pi_half == b.pi_half && a.rad == b.rad;
    }
};

// Splits n > 0 as s^2 * m with m squarefree; returns {s, m}.
// Inputs come from small rate arithmetic, so trial division is enough;
// guarded by a perfect-square check for any large leftover.
inline std::pair<Integer, Integer> squarefree_split(Integer n) {
    if (n <= 0) throw BadParameter("squarefree_split needs a positive integer");
    Integer s = 1, m = 1;
    for (Integer p = 2; p * p <= n && p < 100000; p = (p == 2 ? Integer(3) : p + 2)) {
        if (n % p == 0) {
            int c = 0;
            while (n % p == 0) {
                n /= p;
                ++c;
            }
            for (int i = 0; i + 1 < c; i += 2) s *= p;
            if (c % 2) m *= p;
        }
    }
    if (n > 1) {
        if (mpz_perfect_square_p(n.get_mpz_t())) {
            Integer r;
            mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
            s *= r;
        } else {
            m *= n;
        }
    }
    return {s, m};
}

// Exact scalar: finite sum of q * pi^(k/2) * sqrt(m), q rational, k integer,
// m squarefree. Closed under +, -, *; inversion is defined for monomials,
// which is all the pipeline's normalisation constants ever are.
class ExactScalar {
  public:
    ExactScalar() = default;
    ExactScalar(const Rational& q) { add(Radical{}, q); }  // NOLINT implicit
    ExactScalar(long n) { add(Radical{}, Rational(n)); }   // NOLINT implicit

    static ExactScalar pi_pow_half(int k, const Rational& coeff = 1) {
        ExactScalar r;
        r.add(Radical{k, 1}, coeff);
        return r;
    }

    // sqrt(q) for q > 0 rational: sqrt(p/d) = sqrt(p*d)/d
    static ExactScalar sqrt_rational(const Rational& q) {
        if (q <= 0) throw BadParameter("sqrt_rational needs a positive rational");
        auto [s, m] = squarefree_split(q.get_num() * q.get_den());
        ExactScalar r;
        r.add(Radical{0, m}, Rational(s) / q.get_den());
        return r;
    }

    bool is_zero() const { return terms_.empty(); }

    bool is_rational() const {
        if (terms_.empty()) return true;
        return terms_.size() == 1 && terms_.begin()->first == Radical{};
    }

    Rational to_rational() const {
        if (terms_.empty()) return 0;
        if (!is_rational()) throw BadParameter("ExactScalar is not rational: " + to_string());
        return terms_.begin()->second;
    }

    bool is_monomial() const { return terms_.size() <= 1; }

    ExactScalar& operator+=(const ExactScalar& o) {
        for (const auto& [k, v] : o.terms_) add(k, v);
        return *this;
    }
    ExactScalar& operator-=(const ExactScalar& o) {
        for (const auto& [k, v] : o.terms_) add(k, -v);
        return *this;
    }
    friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
    friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
    friend ExactScalar operator-(const ExactScalar& a) {
        ExactScalar r;
        for (const auto& [k, v] : a.terms_) r.add(k, -v);
        return r;
    }

    friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
        ExactScalar r;
        for (const auto& [ka, va] : a.terms_)
            for (const auto& [kb, vb] : b.terms_) {
                // sqrt(m1)*sqrt(m2) = g*sqrt((m1/g)*(m2/g)), g = gcd; the result
                // radicand is squarefree because m1, m2 are.
                Integer g;
                mpz_gcd(g.get_mpz_t(), ka.rad.get_mpz_t(), kb.rad.get_mpz_t());
                Radical k{ka.pi_half + kb.pi_half, (ka.rad / g) * (kb.rad / g)};
                r.add(k, va * vb * g);
            }
        return r;
    }
    ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }

    ExactScalar& scale(const Rational& q) {
        if (q == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, v] : terms_) v *= q;
        return *this;
    }
    friend ExactScalar operator*(const Rational& q, ExactScalar a) { return a.scale(q); }

    // 1/x for monomials: (q*pi^(k/2)*sqrt(m))^-1 = (1/(q*m))*pi^(-k/2)*sqrt(m)
    ExactScalar invert() const {
        if (terms_.empty()) throw ZeroIntegral("division by exact zero");
        if (terms_.size() != 1)
            throw BadParameter("ExactScalar inversion needs a monomial, got: " + to_string());
        const auto& [k, v] = *terms_.begin();
        ExactScalar r;
        r.add(Radical{-k.pi_half, k.rad}, Rational(1) / (v * k.rad));
        return r;
    }

    friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) {
        return a * b.invert();
    }

    friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

    // Sign of a monomial (used to absorb signs during normalisation).
    int monomial_sign() const {
        if (terms_.empty()) return 0;
        if (terms_.size() != 1)
            throw BadParameter("sign of a non-monomial ExactScalar: " + to_string());
        return sgn(terms_.begin()->second);
    }

    const std::map<Radical, Rational>& terms() const { return terms_; }

    // Deterministic textual form: tokens "num/den[*sqrt(m)][*pi^(k/2)]"
    // ordered by (k, m).
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, v] : terms_) {
            if (!first) os << (v >= 0 ? " + " : " - ");
            else if (v < 0) os << "-";
            first = false;
            Rational av = abs(v);
            os << av.get_str();
            if (k.rad != 1) os << "*sqrt(" << k.rad.get_str() << ")";
            if (k.pi_half != 0) {
                if (k.pi_half % 2 == 0) os << "*pi^" << (k.pi_half / 2);
                else os << "*pi^(" << k.pi_half << "/2)";
            }
        }
        return os.str();
    }

  private:
    void add(const Radical& k, const Rational& v) {
        if (v == 0) return;
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, v);
        } else {
            it->second += v;
            if (it->second == 0) terms_.erase(it);
        }
    }

    std::map<Radical, Rational> terms_;
};

// Gamma(g)/Gamma(g-k) = (g-1)(g-2)...(g-k), exact rational.
inline Rational gamma_ratio(const Rational& g, unsigned long k) {
    Rational r = 1;
    for (unsigned long j = 1; j <= k; ++j) {
        Rational f = g - Rational(static_cast<long>(j));
        if (is_integer(f) && f <= 0)
            throw PoleCrossing("gamma_ratio crosses a pole at argument " + f.get_str());
        r *= f;
    }
    return r;
}

// Gamma(q) for q a positive integer or half-odd-integer.
// Gamma(n) = (n-1)!, Gamma(n+1/2) = (2n)!/(4^n n!) * sqrt(pi).
inline ExactScalar gamma_exact(const Rational& q) {
    if (is_integer(q)) {
        if (q <= 0) throw PoleCrossing("gamma_exact at pole " + q.get_str());
        return ExactScalar(Rational(factorial(to_long(q) - 1)));
    }
    if (is_half_odd(q)) {
        Rational n2 = q - rat(1, 2);
        long n = to_long(n2);
        if (n >= 0) {
            Rational c(factorial(2 * n), factorial(n) * pow_rational(4, n).get_num());
            c.canonicalize();
            return ExactScalar::pi_pow_half(1, c);
        }
        // Gamma(1/2 - n) via reflection through the recurrence
        ExactScalar g = ExactScalar::pi_pow_half(1);
        Rational a = rat(1, 2);
        while (a > q) {
            a -= 1;
            g = g * ExactScalar(Rational(1) / a);
        }
        return g;
    }
    throw BadParameter("gamma_exact needs an integer or half-integer argument, got " +
                       q.get_str());
}

}  // namespace betamarg
