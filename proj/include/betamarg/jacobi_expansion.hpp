#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>

#include "betamarg/bigfloat.hpp"
#include "betamarg/errors.hpp"
#include "betamarg/exact_scalar.hpp"
#include "betamarg/rational.hpp"

namespace betamarg {

// Basis function x^a (1-x)^b on (0,1).
struct JacKey {
    Rational a;
    Rational b;

    friend bool operator<(const JacKey& l, const JacKey& r) {
        int c = cmp(l.a, r.a);
        if (c) return c < 0;
        return cmp(l.b, r.b) < 0;
    }
    friend bool operator==(const JacKey& l, const JacKey& r) { return l.a == r.a && l.b == r.b; }
};

class JacobiExpansion {
  public:
    JacobiExpansion() = default;

    static JacobiExpansion term(const Rational& a, const Rational& b, const ExactScalar& c) {
        JacobiExpansion f;
        f.add({a, b}, c);
        return f;
    }
    static JacobiExpansion one() { return term(0, 0, ExactScalar(1)); }

    void add(const JacKey& k, const ExactScalar& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const std::map<JacKey, ExactScalar>& terms() const { return terms_; }

    friend bool operator==(const JacobiExpansion& a, const JacobiExpansion& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const JacobiExpansion& a, const JacobiExpansion& b) {
        return !(a == b);
    }

    JacobiExpansion& operator+=(const JacobiExpansion& o) {
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    JacobiExpansion& operator-=(const JacobiExpansion& o) {
        for (const auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    friend JacobiExpansion operator+(JacobiExpansion a, const JacobiExpansion& b) {
        return a += b;
    }
    friend JacobiExpansion operator-(JacobiExpansion a, const JacobiExpansion& b) {
        return a -= b;
    }
    friend JacobiExpansion operator-(const JacobiExpansion& a) {
        JacobiExpansion r;
        for (const auto& [k, c] : a.terms_) r.terms_.emplace(k, -c);
        return r;
    }

    JacobiExpansion scaled(const ExactScalar& c) const {
        JacobiExpansion r;
        if (c.is_zero()) return r;
        for (const auto& [k, v] : terms_) r.add(k, v * c);
        return r;
    }
    JacobiExpansion scaled(const Rational& q) const { return scaled(ExactScalar(q)); }

    JacobiExpansion mul_xpow(const Rational& da) const {
        JacobiExpansion r;
        for (const auto& [k, c] : terms_) r.terms_.emplace(JacKey{k.a + da, k.b}, c);
        return r;
    }
    JacobiExpansion mul_omx_pow(const Rational& db) const {  // (1-x)^db
        JacobiExpansion r;
        for (const auto& [k, c] : terms_) r.terms_.emplace(JacKey{k.a, k.b + db}, c);
        return r;
    }

    // d/dx x^a (1-x)^b = a x^(a-1) (1-x)^b - b x^a (1-x)^(b-1)
    JacobiExpansion derivative() const {
        JacobiExpansion r;
        for (const auto& [k, c] : terms_) {
            if (k.a != 0) r.add({k.a - 1, k.b}, k.a * c);
            if (k.b != 0) r.add({k.a, k.b - 1}, -k.b * c);
        }
        return r;
    }

    // x (1-x) d/dx f  -- the combination the Jacobi recurrence needs; it keeps
    // every exponent at or above its input floor.
    JacobiExpansion x_omx_derivative() const {
        JacobiExpansion r;
        for (const auto& [k, c] : terms_) {
            if (k.a != 0) r.add({k.a, k.b + 1}, k.a * c);
            if (k.b != 0) r.add({k.a + 1, k.b}, -k.b * c);
        }
        return r;
    }

    // Exact antiderivative vanishing at 0. Per term: b in Z>=0 expands in
    // powers of x; otherwise a in Z>=0 expands in powers of (1-x).
    JacobiExpansion integrate_from_zero() const {
        JacobiExpansion out;
        for (const auto& [k, c] : terms_) {
            if (k.a <= -1)
                throw IntegrabilityViolation("power x^" + k.a.get_str() +
                                             " not integrable at 0");
            if (is_nonneg_integer(k.b)) {
                long b = to_long(k.b);
                for (long p = 0; p <= b; ++p) {
                    Rational coef = Rational(binomial(b, p)) / (k.a + p + 1);
                    if (p % 2) coef = -coef;
                    out.add({k.a + p + 1, 0}, c * ExactScalar(coef));
                }
            } else if (is_nonneg_integer(k.a)) {
                if (k.b <= -1)
                    throw IntegrabilityViolation("power (1-x)^" + k.b.get_str() +
                                                 " not integrable at 1");
                long a = to_long(k.a);
                // B~(a,b) = a! / ((b+1)(b+2)...(b+a+1))
                Rational bt(factorial(a));
                for (long j = 0; j <= a; ++j) bt /= (k.b + 1 + j);
                out.add({0, 0}, c * ExactScalar(bt));
                for (long p = 0; p <= a; ++p) {
                    Rational coef = Rational(binomial(a, p)) / (k.b + p + 1);
                    if (p % 2) coef = -coef;
                    out.add({0, k.b + p + 1}, -(c * ExactScalar(coef)));
                }
            } else {
                throw UnsupportedTermShape("cannot integrate x^" + k.a.get_str() + " (1-x)^" +
                                           k.b.get_str() + " exactly");
            }
        }
        return out;
    }

    ExactScalar limit_at_one() const {
        ExactScalar lim;
        for (const auto& [k, c] : terms_) {
            if (k.b < 0) throw DivergentLimit("term (1-x)^" + k.b.get_str() + " diverges at 1");
            if (k.b == 0) lim += c;
        }
        return lim;
    }

    ExactScalar value_at_zero() const {
        ExactScalar v;
        for (const auto& [k, c] : terms_) {
            if (k.a < 0) throw DivergentLimit("term x^" + k.a.get_str() + " at 0");
            if (k.a == 0) v += c;
        }
        return v;
    }

    // Canonical basis with b in [0,1): expands the integer part of each
    // (1-x)^b binomially. The raw x^a(1-x)^b monomials are linearly dependent
    // across integer b-shifts, so use this before structural comparisons.
    // Kept out of the recurrence hot path on purpose.
    JacobiExpansion canonicalized() const {
        JacobiExpansion r;
        for (const auto& [k, c] : terms_) {
            Integer fl;
            mpz_fdiv_q(fl.get_mpz_t(), k.b.get_num().get_mpz_t(), k.b.get_den().get_mpz_t());
            Rational fb = k.b - Rational(fl);  // fractional part in [0,1)
            if (fl < 0) {
                r.add(k, c);  // negative integer part stays as-is
                continue;
            }
            long ip = fl.get_si();
            for (long j = 0; j <= ip; ++j) {
                Rational coef = Rational(binomial(ip, j));
                if (j % 2) coef = -coef;
                r.add({k.a + j, fb}, c * ExactScalar(coef));
            }
        }
        return r;
    }

    bool value_equal(const JacobiExpansion& o) const {
        return (canonicalized() - o.canonicalized()).is_zero();
    }

    // f(1-x): swaps the exponent roles
    JacobiExpansion reflected() const {
        JacobiExpansion r;
        for (const auto& [k, c] : terms_) r.add({k.b, k.a}, c);
        return r;
    }

    BigFloat eval(const Rational& x, mpfr_prec_t prec) const {
        if (x <= 0 || x >= 1) throw BadParameter("eval needs 0 < x < 1");
        return eval_rough(BigFloat::from(x, prec), prec);
    }

    BigFloat eval_rough(const BigFloat& xf, mpfr_prec_t prec) const {
        BigFloat omx = BigFloat::from(1L, prec) - xf;
        BigFloat acc(prec);
        for (const auto& [k, c] : terms_) {
            BigFloat t = to_bigfloat(c, prec);
            if (k.a != 0) t *= BigFloat::pow_rat(xf, k.a);
            if (k.b != 0) t *= BigFloat::pow_rat(omx, k.b);
            acc += t;
        }
        return acc;
    }

    Rational min_b() const {
        Rational m;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            if (first || k.b < m) m = k.b;
            first = false;
        }
        if (first) throw BadParameter("min_b of empty expansion");
        return m;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.to_string() << ")";
            if (k.a != 0) os << "*x^(" << k.a.get_str() << ")";
            if (k.b != 0) os << "*(1-x)^(" << k.b.get_str() << ")";
        }
        return os.str();
    }

  private:
    std::map<JacKey, ExactScalar> terms_;
};

}  // namespace betamarg
