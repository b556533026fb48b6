#pragma once

#include <functional>

#include "betamarg/bigfloat.hpp"
#include "betamarg/errors.hpp"

namespace betamarg {

// Double-exponential quadrature. Handles endpoint singularities of the
// x^lambda kind, which is what the ensemble weights throw at it.
class Quadrature {
  public:
    using Fn = std::function<BigFloat(const BigFloat&)>;

    // int_a^b f, finite interval, tanh-sinh nodes x = mid + half*tanh((pi/2) sinh t)
    static BigFloat finite(const Fn& f, const Rational& a, const Rational& b,
                           mpfr_prec_t prec, const BigFloat& abs_tol, int max_level = 11) {
        BigFloat half = BigFloat::from((b - a) / 2, prec);
        BigFloat pi_half = BigFloat::pi(prec) / BigFloat::from(2L, prec);
        BigFloat af = BigFloat::from(a, prec);
        BigFloat bf = BigFloat::from(b, prec);

        auto node = [&](const BigFloat& t, BigFloat& x, BigFloat& w) {
            BigFloat y = pi_half * sinh(t);
            BigFloat c = cosh(y);
            w = pi_half * cosh(t) / (c * c);
            // distance to the near endpoint stays accurate: 1 -+ tanh(y) = e^(-+y)/cosh(y)
            if (y.sign() >= 0) x = bf - half * (exp(-y) / c);
            else x = af + half * (exp(y) / c);
        };
        return levels(f, node, half, prec, abs_tol, max_level);
    }

    // int_0^inf f, exp-sinh nodes x = exp((pi/2) sinh t)
    static BigFloat semi_infinite(const Fn& f, mpfr_prec_t prec, const BigFloat& abs_tol,
                                  int max_level = 11) {
        BigFloat one = BigFloat::from(1L, prec);
        BigFloat pi_half = BigFloat::pi(prec) / BigFloat::from(2L, prec);
        auto node = [&](const BigFloat& t, BigFloat& x, BigFloat& w) {
            BigFloat y = pi_half * sinh(t);
            x = exp(y);
            w = pi_half * cosh(t) * x;
        };
        return levels(f, node, one, prec, abs_tol, max_level);
    }

  private:
    template <class Node>
    static BigFloat levels(const Fn& f, const Node& node, const BigFloat& scale,
                           mpfr_prec_t prec, const BigFloat& abs_tol, int max_level) {
        // term cutoff well below the requested tolerance
        BigFloat tiny = abs_tol * BigFloat::from(1e-6, prec);
        BigFloat sum(prec);
        {
            BigFloat x(prec), w(prec);
            node(BigFloat(prec), x, w);
            sum = w * f(x) * scale;
        }
        BigFloat h = BigFloat::from(1L, prec);
        BigFloat prev(prec);
        for (int level = 0; level <= max_level; ++level) {
            if (level > 0) h = h / BigFloat::from(2L, prec);
            BigFloat add(prec);
            // level 0 walks every integer node; later levels only the new odd multiples
            long step = level == 0 ? 1 : 2;
            long start = 1;
            for (int dir = 0; dir < 2; ++dir) {
                int misses = 0;
                for (long k = start;; k += step) {
                    BigFloat t = BigFloat::from(k, prec) * h;
                    if (dir == 1) t = -t;
                    BigFloat x(prec), w(prec);
                    node(t, x, w);
                    if (x.is_nan() || w.is_nan() || x.sign() <= 0) break;
                    BigFloat term = w * f(x) * scale;
                    if (term.is_nan()) break;
                    add += term;
                    if (abs(term) < tiny) {
                        if (++misses >= 3) break;
                    } else {
                        misses = 0;
                    }
                    if (k > 2000000) throw NonConvergence("quadrature node runaway");
                }
            }
            if (level == 0) {
                sum += add;
                prev = sum * h;
                continue;
            }
            sum += add;
            BigFloat cur = sum * h;
            if (abs(cur - prev) < abs_tol && level >= 3) return cur;
            prev = cur;
        }
        return prev;
    }
};

}  // namespace betamarg
