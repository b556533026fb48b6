#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "betamarg/bigfloat.hpp"
#include "betamarg/errors.hpp"
#include "betamarg/exact_scalar.hpp"
#include "betamarg/rational.hpp"

namespace betamarg {

// q^e for q >= 0 and e an integer or half-odd-integer, as an exact scalar.
inline ExactScalar exact_pow_half(const Rational& base, const Rational& e) {
    if (base < 0) throw BadParameter("exact_pow_half needs base >= 0");
    if (base == 0) {
        if (e > 0) return ExactScalar();
        if (e == 0) return ExactScalar(1);
        throw BadParameter("0 to a negative power");
    }
    if (is_integer(e)) return ExactScalar(pow_rational(base, to_long(e)));
    if (!is_half_odd(e)) throw UnsupportedTermShape("exponent " + e.get_str() + " not in Z/2");
    long n = to_long(e - rat(1, 2));
    return ExactScalar(pow_rational(base, n)) * ExactScalar::sqrt_rational(base);
}

// One piecewise term c * t^a * (orient*(v t - u))^e, active on (lo, hi).
// The affine base keeps printed forms like (1-2x)^(5/2) exact without pulling
// irrational scale factors into the coefficient.
struct PPKey {
    Rational a;      // exponent of t
    Rational u, v;   // base = orient*(v t - u); v=1,u=0 when e=0
    int orient = 1;  // +1 or -1
    Rational e;      // base exponent
    Rational lo, hi;
    bool hi_inf = false;

    friend bool operator<(const PPKey& l, const PPKey& r) {
        int c = cmp(l.lo, r.lo);
        if (c) return c < 0;
        if (l.hi_inf != r.hi_inf) return l.hi_inf < r.hi_inf;
        c = cmp(l.hi, r.hi);
        if (c) return c < 0;
        c = cmp(l.a, r.a);
        if (c) return c < 0;
        c = cmp(l.u, r.u);
        if (c) return c < 0;
        c = cmp(l.v, r.v);
        if (c) return c < 0;
        if (l.orient != r.orient) return l.orient < r.orient;
        return cmp(l.e, r.e) < 0;
    }
    friend bool operator==(const PPKey& l, const PPKey& r) {
        return l.a == r.a && l.u == r.u && l.v == r.v && l.orient == r.orient && l.e == r.e &&
               l.lo == r.lo && l.hi_inf == r.hi_inf && (l.hi_inf || l.hi == r.hi);
    }
};

// Identity of an affine radical base, for interval collapse.
struct BaseKey {
    Rational u, v;
    int orient = 1;
    friend bool operator<(const BaseKey& l, const BaseKey& r) {
        int c = cmp(l.u, r.u);
        if (c) return c < 0;
        c = cmp(l.v, r.v);
        if (c) return c < 0;
        return l.orient < r.orient;
    }
    friend bool operator==(const BaseKey& l, const BaseKey& r) {
        return l.u == r.u && l.v == r.v && l.orient == r.orient;
    }
};

// Exact per-interval view: plain monomials plus radical families
// (orient(vt-u))^e with polynomial companions expanded onto the base.
struct CollapsedInterval {
    Rational lo, hi;
    bool hi_inf = false;
    std::map<Rational, ExactScalar> monomials;               // t^q -> coeff
    std::map<BaseKey, std::map<Rational, ExactScalar>> rads; // base -> e -> coeff

    bool empty() const { return monomials.empty() && rads.empty(); }

    friend bool operator==(const CollapsedInterval& x, const CollapsedInterval& y) {
        return x.lo == y.lo && x.hi_inf == y.hi_inf && (x.hi_inf || x.hi == y.hi) &&
               x.monomials == y.monomials && x.rads == y.rads;
    }
};

class PiecewisePower {
  public:
    PiecewisePower() = default;
    explicit PiecewisePower(char var) : var_(var) {}

    char var() const { return var_; }
    void set_var(char v) { var_ = v; }

    void add_term(const PPKey& key, const ExactScalar& c) {
        if (c.is_zero()) return;
        PPKey k = key;
        if (k.e == 0) {
            k.u = 0;
            k.v = 1;
            k.orient = 1;
        }
        if (!k.hi_inf && k.lo >= k.hi) return;  // empty window
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    const std::map<PPKey, ExactScalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void scale(const ExactScalar& c) {
        if (c.is_zero()) {
            terms_.clear();
            return;
        }
        for (auto& [k, v] : terms_) v = v * c;
    }

    PiecewisePower& operator+=(const PiecewisePower& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }

    std::vector<Rational> breakpoints() const {
        std::set<Rational> bp;
        for (const auto& [k, c] : terms_) {
            bp.insert(k.lo);
            if (!k.hi_inf) bp.insert(k.hi);
        }
        return {bp.begin(), bp.end()};
    }

    // exact value of one term at rational t > 0 (ignores the window)
    static ExactScalar term_value(const PPKey& k, const ExactScalar& c, const Rational& t) {
        ExactScalar val = c * exact_pow_half(t, k.a);
        if (k.e != 0) {
            Rational base = Rational(k.orient) * (k.v * t - k.u);
            if (base < 0) throw BadParameter("negative radical base inside active window");
            val = val * exact_pow_half(base, k.e);
        }
        return val;
    }

    // value strictly inside an interval
    ExactScalar eval_exact(const Rational& t) const {
        ExactScalar s;
        for (const auto& [k, c] : terms_)
            if (k.lo < t && (k.hi_inf || t < k.hi)) s += term_value(k, c, t);
        return s;
    }

    // one-sided limit at t0: side = +1 from above, -1 from below
    ExactScalar one_sided(const Rational& t0, int side) const {
        ExactScalar s;
        for (const auto& [k, c] : terms_) {
            bool active = side > 0 ? (k.lo <= t0 && (k.hi_inf || t0 < k.hi))
                                   : (k.lo < t0 && (k.hi_inf || t0 <= k.hi));
            if (active) s += term_value(k, c, t0);
        }
        return s;
    }

    BigFloat eval(const Rational& t, mpfr_prec_t prec) const {
        return to_bigfloat(eval_exact(t), prec);
    }

    // exact integral over (alpha, beta)
    ExactScalar integrate_range(const Rational& alpha, const Rational& beta) const {
        ExactScalar total;
        for (const auto& [k, c] : terms_) {
            Rational lo = std::max(alpha, k.lo);
            Rational hi = k.hi_inf ? beta : std::min(beta, k.hi);
            if (lo >= hi) continue;
            total += c * term_integral(k, lo, hi);
        }
        return total;
    }

    // exact per-interval normal form over (lo, hi); every active term must
    // collapse onto either plain t-powers or a single radical base
    CollapsedInterval collapse(const Rational& lo, const Rational& hi, bool hi_inf = false) const {
        CollapsedInterval out;
        out.lo = lo;
        out.hi = hi;
        out.hi_inf = hi_inf;
        Rational probe = hi_inf ? Rational(lo + 1) : Rational((lo + hi) / 2);
        for (const auto& [k, c] : terms_) {
            bool active = k.lo < probe && (k.hi_inf || probe < k.hi);
            if (!active) continue;
            if (k.e == 0) {
                add_mono(out, k.a, c);
            } else if (is_integer(k.e) && k.e >= 0) {
                // expand (orient(vt-u))^e into t-powers
                long e = to_long(k.e);
                Rational A = Rational(k.orient) * k.v;
                Rational B = Rational(-k.orient) * k.u;
                for (long i = 0; i <= e; ++i) {
                    Rational coef = Rational(binomial(e, i)) * pow_rational(A, i) *
                                    pow_rational(B, e - i);
                    if (coef != 0) add_mono(out, k.a + i, c * ExactScalar(coef));
                }
            } else {
                // fractional base power: fold t^a onto the base
                if (!is_nonneg_integer(k.a))
                    throw UnsupportedTermShape("cannot collapse t^" + k.a.get_str() +
                                               " times fractional base power");
                long a = to_long(k.a);
                BaseKey bk{k.u, k.v, k.orient};
                auto& fam = out.rads[bk];
                // t = (orient*B + u)/v
                for (long i = 0; i <= a; ++i) {
                    Rational coef = Rational(binomial(a, i)) *
                                    pow_rational(Rational(k.orient), i) *
                                    pow_rational(k.u, a - i) / pow_rational(k.v, a);
                    if (coef == 0) continue;
                    ExactScalar cc = c * ExactScalar(coef);
                    auto it = fam.find(k.e + i);
                    if (it == fam.end()) fam.emplace(k.e + i, cc);
                    else {
                        it->second += cc;
                        if (it->second.is_zero()) fam.erase(it);
                    }
                }
                if (fam.empty()) out.rads.erase(bk);
            }
        }
        return out;
    }

    std::vector<CollapsedInterval> collapse_all() const {
        std::vector<CollapsedInterval> out;
        auto bp = breakpoints();
        bool unbounded = false;
        for (const auto& [k, c] : terms_)
            if (k.hi_inf) unbounded = true;
        for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
            auto ci = collapse(bp[i], bp[i + 1]);
            if (!ci.empty()) out.push_back(std::move(ci));
        }
        if (unbounded && !bp.empty()) {
            auto ci = collapse(bp.back(), bp.back() + 1, true);
            if (!ci.empty()) out.push_back(std::move(ci));
        }
        return out;
    }

    std::string to_string() const {
        std::ostringstream os;
        bool outer_first = true;
        for (const auto& ci : collapse_all()) {
            if (!outer_first) os << "\n";
            outer_first = false;
            os << "on (" << ci.lo.get_str() << ", " << (ci.hi_inf ? "inf" : ci.hi.get_str())
               << "): ";
            bool first = true;
            for (const auto& [a, c] : ci.monomials) {
                if (!first) os << " + ";
                first = false;
                os << "(" << c.to_string() << ")";
                if (a != 0) os << "*" << var_ << "^(" << a.get_str() << ")";
            }
            for (const auto& [bk, fam] : ci.rads) {
                for (const auto& [e, c] : fam) {
                    if (!first) os << " + ";
                    first = false;
                    os << "(" << c.to_string() << ")*(";
                    if (bk.orient > 0) {
                        if (bk.v != 1) os << bk.v.get_str() << "*";
                        os << var_;
                        if (bk.u != 0) os << " - " << bk.u.get_str();
                    } else {
                        os << bk.u.get_str() << " - ";
                        if (bk.v != 1) os << bk.v.get_str() << "*";
                        os << var_;
                    }
                    os << ")^(" << e.get_str() << ")";
                }
            }
            if (first) os << "0";
        }
        return os.str();
    }

  private:
    static void add_mono(CollapsedInterval& out, const Rational& a, const ExactScalar& c) {
        auto it = out.monomials.find(a);
        if (it == out.monomials.end()) {
            out.monomials.emplace(a, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) out.monomials.erase(it);
        }
    }

    // antiderivative of t^a (orient(vt-u))^e evaluated between rational bounds
    static ExactScalar term_integral(const PPKey& k, const Rational& lo, const Rational& hi) {
        if (k.e == 0) {
            if (k.a == -1) throw UnsupportedTermShape("log antiderivative not supported");
            Rational p = k.a + 1;
            return ExactScalar(Rational(1) / p) *
                   (exact_pow_half(hi, p) - exact_pow_half(lo, p));
        }
        if (k.a == 0) return base_power_integral(k, k.e, lo, hi);
        if (!is_nonneg_integer(k.a))
            throw UnsupportedTermShape("integral of t^" + k.a.get_str() +
                                       " times affine base power");
        long a = to_long(k.a);
        ExactScalar total;
        for (long i = 0; i <= a; ++i) {
            Rational coef = Rational(binomial(a, i)) * pow_rational(Rational(k.orient), i) *
                            pow_rational(k.u, a - i) / pow_rational(k.v, a);
            if (coef == 0) continue;
            total += ExactScalar(coef) * base_power_integral(k, k.e + i, lo, hi);
        }
        return total;
    }

    // int (orient(vt-u))^p dt = orient * (orient(vt-u))^(p+1) / (v (p+1))
    static ExactScalar base_power_integral(const PPKey& k, const Rational& p,
                                           const Rational& lo, const Rational& hi) {
        if (p == -1) throw UnsupportedTermShape("log antiderivative not supported");
        Rational bhi = Rational(k.orient) * (k.v * hi - k.u);
        Rational blo = Rational(k.orient) * (k.v * lo - k.u);
        if (bhi < 0 || blo < 0)
            throw BadParameter("integration range leaves the base's sign domain");
        ExactScalar diff = exact_pow_half(bhi, p + 1) - exact_pow_half(blo, p + 1);
        Rational scale = Rational(k.orient) / (k.v * (p + 1));
        return ExactScalar(scale) * diff;
    }

    std::map<PPKey, ExactScalar> terms_;
    char var_ = 't';
};

}  // namespace betamarg
