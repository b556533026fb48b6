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

// One basis function x^a * e^(-s x) * erf(sqrt(u x))^erf_flag.
// Distinct keys are linearly independent, so the term map is canonical.
struct LagKey {
    Rational a;
    Rational s;
    Rational u;
    bool erf = false;

    friend bool operator<(const LagKey& l, const LagKey& r) {
        int c = cmp(l.a, r.a);
        if (c) return c < 0;
        c = cmp(l.s, r.s);
        if (c) return c < 0;
        c = cmp(l.u, r.u);
        if (c) return c < 0;
        return l.erf < r.erf;
    }
    friend bool operator==(const LagKey& l, const LagKey& r) {
        return l.a == r.a && l.s == r.s && l.u == r.u && l.erf == r.erf;
    }
};

class LaguerreExpansion {
  public:
    LaguerreExpansion() = default;

    static LaguerreExpansion term(const Rational& a, const Rational& s, const ExactScalar& c) {
        LaguerreExpansion f;
        f.add({a, s, 0, false}, c);
        return f;
    }
    static LaguerreExpansion erf_term(const Rational& a, const Rational& s, const Rational& u,
                                      const ExactScalar& c) {
        if (u <= 0) throw BadParameter("erf term needs u > 0");
        LaguerreExpansion f;
        f.add({a, s, u, true}, c);
        return f;
    }
    static LaguerreExpansion one() { return term(0, 0, ExactScalar(1)); }

    void add(const LagKey& k, const ExactScalar& c) {
        if (c.is_zero()) return;
        if (!k.erf && k.u != 0) throw BadParameter("non-erf term with u != 0");
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
    const std::map<LagKey, ExactScalar>& terms() const { return terms_; }

    friend bool operator==(const LaguerreExpansion& a, const LaguerreExpansion& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const LaguerreExpansion& a, const LaguerreExpansion& b) {
        return !(a == b);
    }

    LaguerreExpansion& operator+=(const LaguerreExpansion& o) {
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    LaguerreExpansion& operator-=(const LaguerreExpansion& o) {
        for (const auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    friend LaguerreExpansion operator+(LaguerreExpansion a, const LaguerreExpansion& b) {
        return a += b;
    }
    friend LaguerreExpansion operator-(LaguerreExpansion a, const LaguerreExpansion& b) {
        return a -= b;
    }
    friend LaguerreExpansion operator-(const LaguerreExpansion& a) {
        LaguerreExpansion r;
        for (const auto& [k, c] : a.terms_) r.terms_.emplace(k, -c);
        return r;
    }

    LaguerreExpansion scaled(const ExactScalar& c) const {
        LaguerreExpansion r;
        if (c.is_zero()) return r;
        for (const auto& [k, v] : terms_) r.add(k, v * c);
        return r;
    }
    LaguerreExpansion scaled(const Rational& q) const { return scaled(ExactScalar(q)); }

    // f(x) * x^da
    LaguerreExpansion mul_xpow(const Rational& da) const {
        LaguerreExpansion r;
        for (const auto& [k, c] : terms_) r.terms_.emplace(LagKey{k.a + da, k.s, k.u, k.erf}, c);
        return r;
    }
    // f(x) * e^(-ds x)
    LaguerreExpansion mul_exp(const Rational& ds) const {
        LaguerreExpansion r;
        for (const auto& [k, c] : terms_) {
            Rational s = k.s + ds;
            if (s < 0) throw UnsupportedTermShape("negative exponential rate");
            r.terms_.emplace(LagKey{k.a, s, k.u, k.erf}, c);
        }
        return r;
    }

    // d/dx, term-wise; erf uses d/dx erf(sqrt(ux)) = sqrt(u/pi) x^(-1/2) e^(-ux).
    LaguerreExpansion derivative() const {
        LaguerreExpansion r;
        for (const auto& [k, c] : terms_) {
            if (k.a != 0) r.add({k.a - 1, k.s, k.u, k.erf}, k.a * c);
            if (k.s != 0) r.add({k.a, k.s, k.u, k.erf}, -k.s * c);
            if (k.erf) {
                ExactScalar d =
                    c * ExactScalar::sqrt_rational(k.u) * ExactScalar::pi_pow_half(-1);
                r.add({k.a - rat(1, 2), k.s + k.u, 0, false}, d);
            }
        }
        return r;
    }

    // Exact antiderivative F with F(0) = 0.
    // Plain powers use the closed forms for int_0^x t^r e^(-st) dt with r a
    // non-negative integer or half-odd-integer; erf-carrying terms reduce by
    // parts within each (s,u) group, and the reduction must cancel at
    // exponent -1/2 or the integral is not elementary.
    LaguerreExpansion integrate_from_zero() const {
        LaguerreExpansion out;
        std::map<std::pair<Rational, Rational>, std::map<Rational, ExactScalar>> groups;
        for (const auto& [k, c] : terms_) {
            if (!k.erf) {
                if (k.a <= -1)
                    throw IntegrabilityViolation("power " + k.a.get_str() +
                                                 " not integrable at 0");
                if (k.s == 0) {
                    out.add({k.a + 1, 0, 0, false}, ExactScalar(Rational(1) / (k.a + 1)) * c);
                } else if (is_nonneg_integer(k.a)) {
                    integral_power_int(out, c, to_long(k.a), k.s);
                } else if (is_half_odd(k.a) && k.a > -1) {
                    integral_power_halfodd(out, c, to_long(k.a + rat(1, 2)), k.s);
                } else {
                    throw UnsupportedTermShape("cannot integrate x^" + k.a.get_str() +
                                               " e^(-" + k.s.get_str() + "x) exactly");
                }
            } else {
                if (k.s == 0)
                    throw UnsupportedTermShape("erf term with zero exponential rate");
                if (k.a < rat(-1, 2) || (!is_integer(k.a) && !is_half_odd(k.a)))
                    throw UnsupportedTermShape("erf term with exponent " + k.a.get_str());
                auto& g = groups[{k.s, k.u}];
                auto it = g.find(k.a);
                if (it == g.end()) g.emplace(k.a, c);
                else it->second += c;
            }
        }
        for (auto& [su, pending] : groups) {
            const Rational& s = su.first;
            const Rational& u = su.second;
            while (!pending.empty()) {
                auto top = std::prev(pending.end());
                Rational a = top->first;
                ExactScalar c = top->second;
                pending.erase(top);
                if (c.is_zero()) continue;
                if (a == 0) {
                    // int_0^x e^(-st) erf(sqrt(ut)) dt
                    //   = -e^(-sx) erf(sqrt(ux))/s + sqrt(u/(u+s)) erf(sqrt((u+s)x))/s
                    ExactScalar inv_s(Rational(1) / s);
                    out.add({0, s, u, true}, -(c * inv_s));
                    out.add({0, 0, u + s, true},
                            c * inv_s * ExactScalar::sqrt_rational(u / (u + s)));
                } else if (a == rat(-1, 2)) {
                    throw NonElementaryIntegral(
                        "residual x^(-1/2) e^(-" + s.get_str() + "x) erf(sqrt(" + u.get_str() +
                        "x)) with coefficient " + c.to_string());
                } else {
                    // by parts against e^(-st)
                    ExactScalar inv_s(Rational(1) / s);
                    out.add({a, s, u, true}, -(c * inv_s));
                    ExactScalar down = c * ExactScalar(a) * inv_s;
                    auto it = pending.find(a - 1);
                    if (it == pending.end()) pending.emplace(a - 1, down);
                    else it->second += down;
                    ExactScalar mid = c * inv_s * ExactScalar::sqrt_rational(u) *
                                      ExactScalar::pi_pow_half(-1);
                    Rational am = a - rat(1, 2);
                    if (is_nonneg_integer(am)) integral_power_int(out, mid, to_long(am), u + s);
                    else integral_power_halfodd(out, mid, to_long(am + rat(1, 2)), u + s);
                }
            }
        }
        return out;
    }

    // Value as x -> infinity; requires no divergent term.
    ExactScalar limit_at_infinity() const {
        ExactScalar lim;
        for (const auto& [k, c] : terms_) {
            if (k.s > 0) continue;
            if (k.a > 0) throw DivergentLimit("term x^" + k.a.get_str() + " diverges");
            if (k.a == 0) lim += c;  // erf(sqrt(ux)) -> 1
        }
        return lim;
    }

    ExactScalar value_at_zero() const {
        ExactScalar v;
        for (const auto& [k, c] : terms_) {
            if (k.a < 0 && !k.erf) throw DivergentLimit("term x^" + k.a.get_str() + " at 0");
            if (k.a == 0 && !k.erf) v += c;
        }
        return v;
    }

    BigFloat eval(const Rational& x, mpfr_prec_t prec) const {
        if (x <= 0) throw BadParameter("eval needs x > 0");
        return eval_rough(BigFloat::from(x, prec), prec);
    }

    // evaluation at an already-rounded point (quadrature nodes)
    BigFloat eval_rough(const BigFloat& xf, mpfr_prec_t prec) const {
        BigFloat acc(prec);
        for (const auto& [k, c] : terms_) {
            BigFloat t = to_bigfloat(c, prec);
            if (k.a != 0) t *= BigFloat::pow_rat(xf, k.a);
            if (k.s != 0) t *= exp(-(BigFloat::from(k.s, prec) * xf));
            if (k.erf) t *= erf(sqrt(BigFloat::from(k.u, prec) * xf));
            acc += t;
        }
        return acc;
    }

    bool has_erf() const {
        for (const auto& [k, c] : terms_)
            if (k.erf) return true;
        return false;
    }

    std::set<Rational> erf_arguments() const {
        std::set<Rational> us;
        for (const auto& [k, c] : terms_)
            if (k.erf) us.insert(k.u);
        return us;
    }

    // max power of x attached to rate s (-1 if the rate is absent)
    Rational max_degree_at_rate(const Rational& s) const {
        Rational d = -1;
        for (const auto& [k, c] : terms_)
            if (k.s == s && !k.erf && k.a > d) d = k.a;
        return d;
    }

    std::set<Rational> rates() const {
        std::set<Rational> ss;
        for (const auto& [k, c] : terms_) ss.insert(k.s);
        return ss;
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
            if (k.s != 0) os << "*exp(-" << k.s.get_str() << "*x)";
            if (k.erf) os << "*erf(sqrt(" << k.u.get_str() << "*x))";
        }
        return os.str();
    }

  private:
    // (7.1b) shape: int_0^x t^r e^(-st) dt, r in Z>=0
    static void integral_power_int(LaguerreExpansion& out, const ExactScalar& c, long r,
                                   const Rational& s) {
        Rational rfact(factorial(r));
        out.add({0, 0, 0, false}, c * ExactScalar(rfact * pow_rational(s, -(r + 1))));
        for (long k = 0; k <= r; ++k) {
            Rational coef = Rational(factorial(r)) / Rational(factorial(k)) *
                            pow_rational(s, k - r - 1);
            out.add({Rational(k), s, 0, false}, -(c * ExactScalar(coef)));
        }
    }

    // rescaled (7.1bX): int_0^x t^(m-1/2) e^(-st) dt, m in Z>=0; produces an
    // erf(sqrt(sx)) term.
    static void integral_power_halfodd(LaguerreExpansion& out, const ExactScalar& c, long m,
                                       const Rational& s) {
        ExactScalar gm = gamma_exact(Rational(m) + rat(1, 2));
        ExactScalar head = c * gm * ExactScalar(pow_rational(s, -m)) *
                           ExactScalar::sqrt_rational(Rational(1) / s);
        out.add({0, 0, s, true}, head);
        for (long k = 0; k < m; ++k) {
            ExactScalar coef = c * gm * gamma_exact(Rational(k) + rat(3, 2)).invert() *
                               ExactScalar(pow_rational(s, k - m));
            out.add({Rational(k) + rat(1, 2), s, 0, false}, -coef);
        }
    }

    std::map<LagKey, ExactScalar> terms_;
};

}  // namespace betamarg
