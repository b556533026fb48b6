#pragma once

#include "betamarg/ensemble.hpp"
#include "betamarg/errors.hpp"
#include "betamarg/jacobi_expansion.hpp"
#include "betamarg/laguerre_expansion.hpp"

namespace betamarg {

// Parameters of one differential-difference sweep lifting N-variable gap
// probabilities; alpha is the current power of the (x - x_l) insertion.
struct RecurrenceParams {
    long N = 1;
    long beta = 1;
    Rational lambda1 = 0;
    Rational lambda2 = 0;  // Jacobi only
    long alpha = 0;
};

// (beta/2)(N-p) L_{p+1} = ((beta/2)(N-p) x + B_p) L_p + x L_p' - D_p x L_{p-1}
//   B_p = (p-N)[lambda1 + alpha + 1 + (beta/2)(N-p-1)]
//   D_p = p[(beta/2)(N-p) + alpha + 1]
inline LaguerreExpansion laguerre_step(const LaguerreExpansion& Lp,
                                       const LaguerreExpansion& Lpm1,
                                       const RecurrenceParams& pr, long p) {
    if (p < 0 || p >= pr.N) throw BadParameter("laguerre_step needs 0 <= p <= N-1");
    Rational hb = rat(pr.beta, 2);
    Rational Bp = Rational(p - pr.N) * (pr.lambda1 + pr.alpha + 1 + hb * (pr.N - p - 1));
    Rational Dp = Rational(p) * (hb * (pr.N - p) + pr.alpha + 1);
    Rational lead = hb * (pr.N - p);

    LaguerreExpansion r = Lp.mul_xpow(1).scaled(lead);
    r += Lp.scaled(Bp);
    r += Lp.derivative().mul_xpow(1);
    if (p > 0 && Dp != 0) r -= Lpm1.mul_xpow(1).scaled(Dp);
    return r.scaled(Rational(1) / lead);
}

// (N-p) E_p J_{p+1} = (A_p x + B_p) J_p - x(x-1) J_p' + D_p x(x-1) J_{p-1}
//   A_p = (N-p)[lambda1 + lambda2 + beta(N-p-1) + 2(alpha+1)]
//   B_p = (p-N)[lambda1 + alpha + 1 + (beta/2)(N-p-1)]
//   D_p = p[(beta/2)(N-p) + alpha + 1]
//   E_p = lambda1 + lambda2 + 1 + (beta/2)(2N-p-2) + (alpha+1)
inline JacobiExpansion jacobi_step(const JacobiExpansion& Jp, const JacobiExpansion& Jpm1,
                                   const RecurrenceParams& pr, long p) {
    if (p < 0 || p >= pr.N) throw BadParameter("jacobi_step needs 0 <= p <= N-1");
    Rational hb = rat(pr.beta, 2);
    Rational Ap =
        Rational(pr.N - p) * (pr.lambda1 + pr.lambda2 + Rational(pr.beta) * (pr.N - p - 1) +
                              2 * Rational(pr.alpha + 1));
    Rational Bp = Rational(p - pr.N) * (pr.lambda1 + pr.alpha + 1 + hb * (pr.N - p - 1));
    Rational Dp = Rational(p) * (hb * (pr.N - p) + pr.alpha + 1);
    Rational Ep = pr.lambda1 + pr.lambda2 + 1 + hb * (2 * pr.N - p - 2) + (pr.alpha + 1);
    if (Ep == 0) throw BadParameter("jacobi_step hit E_p = 0");
    Rational lead = Rational(pr.N - p) * Ep;

    JacobiExpansion r = Jp.mul_xpow(1).scaled(Ap);
    r += Jp.scaled(Bp);
    r += Jp.x_omx_derivative();  // -x(x-1) d/dx = +x(1-x) d/dx
    if (p > 0 && Dp != 0) r -= Jpm1.mul_xpow(1).mul_omx_pow(1).scaled(Dp);
    return r.scaled(Rational(1) / lead);
}

// Runs the full beta*N step ladder on a seed proportional to E_N(n;(x,b)) and
// multiplies by the weight; the result is proportional to f_{N+1}(n+1;x) with
// a constant (sign included) fixed downstream by normalisation.
inline LaguerreExpansion laguerre_full_sweep(const LaguerreExpansion& seed,
                                             const EnsembleSpec& spec, long N) {
    LaguerreExpansion Lp = seed, Lpm1;
    for (long alpha = 0; alpha < spec.beta; ++alpha) {
        RecurrenceParams pr{N, spec.beta, spec.lambda1, 0, alpha};
        Lpm1 = LaguerreExpansion();
        for (long p = 0; p < N; ++p) {
            LaguerreExpansion next = laguerre_step(Lp, Lpm1, pr, p);
            Lpm1 = std::move(Lp);
            Lp = std::move(next);
        }
    }
    return Lp.mul_xpow(spec.lambda1).mul_exp(rat(spec.beta, 2));
}

inline JacobiExpansion jacobi_full_sweep(const JacobiExpansion& seed, const EnsembleSpec& spec,
                                         long N) {
    JacobiExpansion Jp = seed, Jpm1;
    for (long alpha = 0; alpha < spec.beta; ++alpha) {
        RecurrenceParams pr{N, spec.beta, spec.lambda1, spec.lambda2, alpha};
        Jpm1 = JacobiExpansion();
        for (long p = 0; p < N; ++p) {
            JacobiExpansion next = jacobi_step(Jp, Jpm1, pr, p);
            Jpm1 = std::move(Jp);
            Jp = std::move(next);
        }
    }
    return Jp.mul_xpow(spec.lambda1).mul_omx_pow(spec.lambda2);
}

}  // namespace betamarg
