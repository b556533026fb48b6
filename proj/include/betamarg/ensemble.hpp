#pragma once

#include <string>

#include "betamarg/errors.hpp"
#include "betamarg/rational.hpp"

namespace betamarg {

enum class Family { Laguerre, Jacobi };

enum class Regime {
    LaguerreInteger,      // lambda1 in Z>=0, any positive integer beta
    LaguerreHalfInteger,  // lambda1 + 1/2 in Z>=0, beta odd
    JacobiRouteA,         // lambda2 in Z>=0, lambda1 > -1
    JacobiRouteB,         // lambda1 in Z>=0, lambda2 > -1; swap + reflect
};

inline std::string to_string(Family f) { return f == Family::Laguerre ? "laguerre" : "jacobi"; }

inline std::string to_string(Regime r) {
    switch (r) {
        case Regime::LaguerreInteger: return "laguerre-integer";
        case Regime::LaguerreHalfInteger: return "laguerre-half-integer";
        case Regime::JacobiRouteA: return "jacobi-A";
        case Regime::JacobiRouteB: return "jacobi-B";
    }
    return "?";
}

struct EnsembleSpec {
    Family family = Family::Laguerre;
    long beta = 2;
    Rational lambda1 = 0;
    Rational lambda2 = 0;  // Jacobi only
    Regime regime = Regime::LaguerreInteger;

    static EnsembleSpec laguerre(long beta, const Rational& lambda1) {
        EnsembleSpec s;
        s.family = Family::Laguerre;
        s.beta = beta;
        s.lambda1 = lambda1;
        if (beta < 1) throw RegimeUnsupported("beta must be a positive integer");
        if (lambda1 <= -1) throw RegimeUnsupported("lambda1 must exceed -1");
        if (is_nonneg_integer(lambda1)) {
            s.regime = Regime::LaguerreInteger;
        } else if (is_half_odd(lambda1) && lambda1 >= rat(-1, 2) && beta % 2 == 1) {
            s.regime = Regime::LaguerreHalfInteger;
        } else {
            throw RegimeUnsupported(
                "Laguerre needs lambda1 in Z>=0, or lambda1+1/2 in Z>=0 with beta odd; got "
                "lambda1=" + lambda1.get_str() + ", beta=" + std::to_string(beta));
        }
        return s;
    }

    static EnsembleSpec jacobi(long beta, const Rational& lambda1, const Rational& lambda2) {
        EnsembleSpec s;
        s.family = Family::Jacobi;
        s.beta = beta;
        s.lambda1 = lambda1;
        s.lambda2 = lambda2;
        if (beta < 1) throw RegimeUnsupported("beta must be a positive integer");
        if (lambda1 <= -1 || lambda2 <= -1) throw RegimeUnsupported("lambda parameters must exceed -1");
        if (is_nonneg_integer(lambda2)) {
            s.regime = Regime::JacobiRouteA;
        } else if (is_nonneg_integer(lambda1)) {
            s.regime = Regime::JacobiRouteB;
        } else {
            throw RegimeUnsupported(
                "Jacobi needs lambda2 in Z>=0 (route A) or lambda1 in Z>=0 (route B); got "
                "lambda1=" + lambda1.get_str() + ", lambda2=" + lambda2.get_str());
        }
        return s;
    }

    // exponent gamma = N(lambda1 + beta(N-1)/2 + 1) of the fixed-trace transform
    Rational fixed_trace_gamma(long N) const {
        return Rational(N) * (lambda1 + rat(beta, 2) * (N - 1) + 1);
    }

    std::string key_string(long N = 0, long n = 0) const {
        std::string k = to_string(family) + "_b" + std::to_string(beta) + "_l1_" +
                        lambda1.get_str();
        if (family == Family::Jacobi) k += "_l2_" + lambda2.get_str();
        k += "_" + to_string(regime);
        if (N > 0) k += "_N" + std::to_string(N) + "_n" + std::to_string(n);
        return k;
    }
};

}  // namespace betamarg
