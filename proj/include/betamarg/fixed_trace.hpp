#pragma once

#include <algorithm>

#include "betamarg/marginal_table.hpp"
#include "betamarg/piecewise_power.hpp"

namespace betamarg {

// q^e as exact scalar for e in Z/2 (rates and inverse-Laplace prefactors)
inline ExactScalar exact_rational_pow(const Rational& q, const Rational& e) {
    return exact_pow_half(q, e);
}

// Bromwich image of erf(sqrt(s))/s^(p+1/2) shifted by e^(-qs): a bounded
// (t-q)^(p-1/2) window on (q, q+1) plus a polynomial tail in (t-q-1) beyond.
inline void append_g_function(PiecewisePower& pp, const ExactScalar& coeff, long p,
                              const Rational& q) {
    if (p < 0) throw BadParameter("g function needs p >= 0");
    ExactScalar inv_sqrt_pi = ExactScalar::pi_pow_half(-1);
    Rational dd(double_factorial_odd(p));  // (2p-1)!!
    // window: 2^p (t-q)^(p-1/2) / (sqrt(pi) (2p-1)!!) on 0 < t-q < 1
    {
        PPKey k;
        k.a = 0;
        k.u = q;
        k.v = 1;
        k.orient = 1;
        k.e = Rational(p) - rat(1, 2);
        k.lo = q;
        k.hi = q + 1;
        pp.add_term(k, coeff * inv_sqrt_pi * ExactScalar(pow_rational(2, p) / dd));
    }
    // tail: sum_{j=1}^p 2^j (2p-2j-1)!!/(sqrt(pi)(p-j)!(2p-1)!!) (t-q-1)^(p-j) (t-q)^(j-1)
    for (long j = 1; j <= p; ++j) {
        Rational cj = pow_rational(2, j) * Rational(double_factorial_odd(p - j)) /
                      (Rational(factorial(p - j)) * dd);
        // (t-q)^(j-1) = sum_i C(j-1,i) (t-q-1)^i
        for (long i = 0; i <= j - 1; ++i) {
            PPKey k;
            k.a = 0;
            k.u = q + 1;
            k.v = 1;
            k.orient = 1;
            k.e = Rational(p - j + i);
            k.lo = q + 1;
            k.hi_inf = true;
            pp.add_term(k, coeff * inv_sqrt_pi * ExactScalar(cj * Rational(binomial(j - 1, i))));
        }
    }
}

// standalone closed form of the g function, variable t
inline PiecewisePower g_function(long p, const Rational& q) {
    PiecewisePower pp('t');
    append_g_function(pp, ExactScalar(1), p, q);
    return pp;
}

// Term-wise inverse Laplace transform of F_N^L(n;2s/beta)/(2s/beta)^gamma in
// the variable t, up to one overall constant fixed later by normalisation.
// Power terms y^a e^(-sy) map to (t - 2s/beta)^(gamma-a-1)/Gamma(gamma-a);
// erf terms need u = beta/2 and route through the g function.
inline PiecewisePower fixed_trace_phi(const LaguerreExpansion& F, const EnsembleSpec& spec,
                                      long N) {
    Rational gamma = spec.fixed_trace_gamma(N);
    Rational two_over_beta = rat(2, spec.beta);
    PiecewisePower pp('t');
    for (const auto& [k, c] : F.terms()) {
        Rational qt = k.s * two_over_beta;  // breakpoint shift in t
        ExactScalar rel = c * exact_rational_pow(two_over_beta, k.a);
        if (!k.erf) {
            Rational nu = gamma - k.a;
            if (nu <= 0)
                throw UnsupportedTermShape("inverse Laplace needs gamma - a > 0, got " +
                                           nu.get_str());
            PPKey key;
            key.a = 0;
            key.u = qt;
            key.v = 1;
            key.orient = 1;
            key.e = nu - 1;
            key.lo = qt;
            key.hi_inf = true;
            pp.add_term(key, rel * gamma_exact(nu).invert());
        } else {
            if (k.u != rat(spec.beta, 2))
                throw UnsupportedTermShape("erf argument rate " + k.u.get_str() +
                                           " outside the fixed-trace basis");
            Rational p = gamma - k.a - rat(1, 2);
            if (!is_nonneg_integer(p))
                throw UnsupportedTermShape("erf term exponent " + k.a.get_str() +
                                           " incompatible with gamma " + gamma.get_str());
            append_g_function(pp, rel, to_long(p), qt);
        }
    }
    return pp;
}

// The trailing region t > N must cancel identically: the largest eigenvalue
// of a unit-trace spectrum is at least 1/N. Throws when it does not.
inline void check_tail_cancellation(const PiecewisePower& phi, long N) {
    auto bp = phi.breakpoints();
    Rational last = bp.empty() ? Rational(N) : bp.back();
    if (last < N) last = N;
    auto ci = phi.collapse(last, last + 1, true);
    if (!ci.empty())
        throw Error("fixed-trace transform does not vanish beyond t = N");
}

// F^{fL}(n;x): x-space CDF of the n-th largest fixed-trace eigenvalue,
// normalised so the value at x = 1 is exactly 1.
inline PiecewisePower fixed_trace_cdf(const LaguerreExpansion& F, const EnsembleSpec& spec,
                                      long N) {
    Rational gamma = spec.fixed_trace_gamma(N);
    PiecewisePower phi = fixed_trace_phi(F, spec, N);
    check_tail_cancellation(phi, N);

    // on (0,1) the transform is a single power c*t^(gamma-1); c normalises
    ExactScalar c13 = phi.eval_exact(rat(1, 3)) * exact_rational_pow(rat(1, 3), 1 - gamma);
    ExactScalar c23 = phi.eval_exact(rat(2, 3)) * exact_rational_pow(rat(2, 3), 1 - gamma);
    if (!(c13 - c23).is_zero())
        throw Error("fixed-trace transform is not a pure power on (0,1)");
    if (c13.is_zero()) throw ZeroIntegral("fixed-trace normalisation constant vanishes");
    ExactScalar inv_norm = c13.invert();

    PiecewisePower out('x');
    for (const auto& [k, c] : phi.terms()) {
        // t = 1/x: t^0 (t-q)^e -> x^(gamma-1-e) (1-qx)^e
        PPKey key;
        key.a = gamma - 1 - k.e;
        if (k.u == 0) {
            key.e = 0;  // pure power of x
        } else {
            key.u = 1;
            key.v = k.u;
            key.orient = -1;  // 1 - qx
            key.e = k.e;
        }
        key.lo = k.hi_inf ? Rational(0) : Rational(1) / k.hi;
        if (k.lo == 0) {
            key.hi_inf = true;
        } else {
            key.hi = Rational(1) / k.lo;
        }
        out.add_term(key, c * inv_norm);
    }
    return out;
}

inline PiecewisePower fixed_trace_cdf(const LaguerreTable& table, long N, long n) {
    return fixed_trace_cdf(table.at(N, n).F, table.spec(), N);
}

struct ConductanceSetup {
    long n1, N;
    EnsembleSpec spec;  // mapped Laguerre ensemble
    Rational gamma;
};

inline ConductanceSetup conductance_setup(long N1, long N2, long beta) {
    if (beta != 1 && beta != 2 && beta != 4)
        throw RegimeUnsupported("conductance needs beta in {1,2,4}");
    if (N1 < 1 || N2 < 1) throw BadParameter("channel counts must be positive");
    ConductanceSetup s;
    s.n1 = std::max(N1, N2);
    s.N = std::min(N1, N2);
    Rational lambda1 = rat(beta, 2) * (s.n1 - s.N + 1) - 1;
    s.spec = EnsembleSpec::laguerre(beta, lambda1);
    s.gamma = s.spec.fixed_trace_gamma(s.N);
    return s;
}

// Landauer conductance PDF on (0, N): the trace distribution of the
// lambda2 = 0 Jacobi ensemble, computed as the un-prefactored inverse
// Laplace transform of F_N^L(1;.) and normalised to unit mass.
inline PiecewisePower conductance_pdf(long N1, long N2, long beta) {
    ConductanceSetup s = conductance_setup(N1, N2, beta);
    auto table = compute_laguerre_table(s.spec, s.N);
    PiecewisePower phi = fixed_trace_phi(table.at(s.N, 1).F, s.spec, s.N);
    check_tail_cancellation(phi, s.N);
    ExactScalar mass = phi.integrate_range(0, Rational(s.N));
    if (mass.is_zero()) throw ZeroIntegral("conductance transform has zero mass");
    phi.scale(mass.invert());
    phi.set_var('g');
    return phi;
}

}  // namespace betamarg
