#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "betamarg/fixed_trace.hpp"
#include "betamarg/quadrature.hpp"

using namespace betamarg;

namespace {

BigFloat tol10(int decimal_exp, mpfr_prec_t prec) {
    return pow(BigFloat::from(10L, prec), BigFloat::from(static_cast<long>(decimal_exp), prec));
}

// 2F1(1/2, 1; p+1; z) for z <= 0 via Euler's integral
// = p * int_0^1 (1-u)^(p-1) (1 - z u)^(-1/2) du
BigFloat gauss_2f1_half(long p, const BigFloat& z, mpfr_prec_t prec) {
    BigFloat val = Quadrature::finite(
        [&](const BigFloat& u) {
            BigFloat one = BigFloat::from(1L, prec);
            return pow(one - u, BigFloat::from(p - 1, prec)) / sqrt(one - z * u);
        },
        0, 1, prec, tol10(-static_cast<int>(prec / 4), prec));
    return val * BigFloat::from(p, prec);
}

}  // namespace

TEST_CASE("g function base cases") {
    // p=0: chi_{0<t-q<1} / (sqrt(pi) sqrt(t-q))
    auto g0 = g_function(0, 2);
    PiecewisePower expect0('t');
    PPKey k;
    k.a = 0;
    k.u = 2;
    k.v = 1;
    k.orient = 1;
    k.e = rat(-1, 2);
    k.lo = 2;
    k.hi = 3;
    expect0.add_term(k, ExactScalar::pi_pow_half(-1));
    CHECK(g0.terms() == expect0.terms());

    // p=1: (2/sqrt(pi)) sqrt(t-q) chi_{0<t-q<1} + (2/sqrt(pi)) chi_{t>q+1}
    auto g1 = g_function(1, 0);
    PiecewisePower expect1('t');
    PPKey kw;
    kw.a = 0;
    kw.u = 0;
    kw.v = 1;
    kw.orient = 1;
    kw.e = rat(1, 2);
    kw.lo = 0;
    kw.hi = 1;
    expect1.add_term(kw, ExactScalar::pi_pow_half(-1, 2));
    PPKey kt;
    kt.a = 0;
    kt.e = 0;
    kt.lo = 1;
    kt.hi_inf = true;
    expect1.add_term(kt, ExactScalar::pi_pow_half(-1, 2));
    CHECK(g1.terms() == expect1.terms());
}

TEST_CASE("g function recurrence consistency") {
    // g(p,q;t) = (t-q)/(p-1/2) g(p-1,q;t) + (t-1-q)^(p-1)/((p-1)!(p-1/2)sqrt(pi)) chi_{t>q+1}
    mpfr_prec_t prec = bits_for_digits(40);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> num(1, 40);
    for (long p : {1L, 2L, 3L}) {
        for (int trial = 0; trial < 6; ++trial) {
            Rational q = rat(num(rng), 10);
            Rational t = q + rat(num(rng), 12);  // inside or beyond the window
            if (t == q + 1) t += rat(1, 24);
            auto gp = g_function(p, q);
            auto gm = g_function(p - 1, q);
            BigFloat lhs = gp.eval(t, prec);
            BigFloat rhs = to_bigfloat(
                ExactScalar(Rational(1) / (Rational(p) - rat(1, 2))) * gm.eval_exact(t) *
                    ExactScalar(t - q),
                prec);
            if (t > q + 1) {
                ExactScalar tail = exact_pow_half(t - 1 - q, Rational(p - 1)) *
                                   ExactScalar(Rational(1) / (Rational(factorial(p - 1)) *
                                                              (Rational(p) - rat(1, 2)))) *
                                   ExactScalar::pi_pow_half(-1);
                rhs += to_bigfloat(tail, prec);
            }
            CHECK(abs(lhs - rhs) < tol10(-35, prec));
        }
    }
}

TEST_CASE("g function matches the hypergeometric representation") {
    // g(p,q;t) = (t-q)^(p-1/2)/Gamma(p+1/2) chi_{t>q}
    //            - (t-q-1)^p/(sqrt(pi) p!) 2F1(1/2,1;p+1;q-t+1) chi_{t>q+1}
    mpfr_prec_t prec = bits_for_digits(40);
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> num(1, 30);
    for (long p : {1L, 2L, 3L}) {
        for (int trial = 0; trial < 4; ++trial) {
            Rational q = rat(num(rng), 10);
            Rational t = q + rat(num(rng) + 12, 12);  // force t > q+1
            BigFloat lhs = g_function(p, q).eval(t, prec);
            BigFloat tq = BigFloat::from(t - q, prec);
            BigFloat rhs = pow(tq, BigFloat::from(Rational(p) - rat(1, 2), prec)) /
                           to_bigfloat(gamma_exact(Rational(p) + rat(1, 2)), prec);
            BigFloat z = BigFloat::from(q - t + 1, prec);
            rhs -= pow(BigFloat::from(t - q - 1, prec), BigFloat::from(p, prec)) /
                   (sqrt(BigFloat::pi(prec)) * BigFloat::from(Rational(factorial(p)), prec)) *
                   gauss_2f1_half(p, z, prec);
            CHECK(abs(lhs - rhs) < tol10(-30, prec));
        }
    }
}

TEST_CASE("B4: fixed-trace CDF of the largest eigenvalue, N=3, lambda1=-1/2") {
    auto table = compute_laguerre_table(EnsembleSpec::laguerre(1, rat(-1, 2)), 3);
    auto F = fixed_trace_cdf(table, 3, 1);

    // zero below 1/3
    CHECK(F.collapse(rat(1, 4), rat(1, 3)).empty());
    CHECK(F.collapse(rat(1, 100), rat(1, 5)).empty());

    // (1/3,1/2): (1/8)sqrt(x)(35 - 175x + 273x^2 - 125x^3) - (1-2x)^(5/2)(1+5x)
    CollapsedInterval mid = F.collapse(rat(1, 3), rat(1, 2));
    std::map<Rational, ExactScalar> poly{
        {rat(1, 2), ExactScalar(rat(35, 8))},
        {rat(3, 2), ExactScalar(rat(-175, 8))},
        {rat(5, 2), ExactScalar(rat(273, 8))},
        {rat(7, 2), ExactScalar(rat(-125, 8))},
    };
    CHECK(mid.monomials == poly);
    BaseKey b12{1, 2, -1};  // (1 - 2x)
    REQUIRE(mid.rads.count(b12) == 1);
    // (1+5x)(1-2x)^(5/2) with 1+5x = 7/2 - (5/2)(1-2x)
    std::map<Rational, ExactScalar> radexp{
        {rat(5, 2), ExactScalar(rat(-7, 2))},
        {rat(7, 2), ExactScalar(rat(5, 2))},
    };
    CHECK(mid.rads.at(b12) == radexp);

    // (1/2,1): the pure sqrt(x) polynomial
    CollapsedInterval hi = F.collapse(rat(1, 2), 1);
    CHECK(hi.monomials == poly);
    CHECK(hi.rads.empty());

    // plateau: identically 1 beyond x = 1
    CollapsedInterval plat = F.collapse(1, 2, true);
    CHECK(plat.rads.empty());
    REQUIRE(plat.monomials.size() == 1);
    CHECK(plat.monomials.at(0) == ExactScalar(1));

    // exact continuity at every breakpoint
    for (const Rational& bp : F.breakpoints()) {
        if (bp == 0) continue;
        CHECK((F.one_sided(bp, +1) - F.one_sided(bp, -1)).is_zero());
    }

    // monotone on a 20-point grid and pinned at 1 for x >= 1/n
    mpfr_prec_t prec = bits_for_digits(50);
    BigFloat prev(prec);
    for (int k = 1; k <= 20; ++k) {
        BigFloat v = F.eval(rat(k, 21), prec);
        CHECK(v >= prev - tol10(-40, prec));
        prev = v;
    }
    CHECK(F.one_sided(1, -1) == ExactScalar(1));

    // mean of the largest fixed-trace eigenvalue sits in (1/3, 1)
    ExactScalar mean = ExactScalar(1) - F.integrate_range(0, 1);
    BigFloat m = to_bigfloat(mean, prec);
    CHECK(m > BigFloat::from(rat(1, 3), prec));
    CHECK(m < BigFloat::from(1L, prec));
}

TEST_CASE("integer-regime fixed trace equals the Gamma-ratio closed form") {
    // beta=2, lambda1=1, N=3: build the transform directly from the CDF
    // coefficients with gamma_ratio and compare term maps
    EnsembleSpec spec = EnsembleSpec::laguerre(2, 1);
    auto table = compute_laguerre_table(spec, 3);
    long N = 3, n = 2;
    Rational gamma = spec.fixed_trace_gamma(N);

    // expected: Gamma(gamma) sum_j Theta(1-jx) sum_a alpha_{ja}/Gamma(gamma-a)
    //           (2x/beta)^a (1-jx)^(gamma-a-1), with the additive constant of
    //           F carried by the j=0, a=0 slot
    PiecewisePower expect('x');
    for (const auto& [k, c] : table.at(N, n).F.terms()) {
        REQUIRE_FALSE(k.erf);
        long a = to_long(k.a);
        Rational j = k.s / rat(spec.beta, 2);
        PPKey key;
        key.a = k.a;
        key.lo = 0;
        if (j == 0) {
            key.e = 0;  // (1 - 0 x)^(gamma-a-1) == 1
            key.hi_inf = true;
        } else {
            key.u = 1;
            key.v = j;
            key.orient = -1;
            key.e = gamma - k.a - 1;
            key.hi = Rational(1) / j;
        }
        // Gamma(gamma)/Gamma(gamma-a) as the falling product
        ExactScalar coeff =
            c * ExactScalar(gamma_ratio(gamma, a) * pow_rational(rat(2, spec.beta), a));
        expect.add_term(key, coeff);
    }
    // normalise the expected form by its value at x=1 (only the j=0 slot is active there)
    ExactScalar at1 = expect.one_sided(1, -1);
    expect.scale(at1.invert());

    auto got = fixed_trace_cdf(table, N, n);
    CHECK(got.terms() == expect.terms());
}

TEST_CASE("integer-regime fixed trace plateaus and continuity") {
    // Laguerre N=4, beta=3, lambda1=1
    EnsembleSpec spec = EnsembleSpec::laguerre(3, 1);
    auto table = compute_laguerre_table(spec, 4);
    mpfr_prec_t prec = bits_for_digits(50);
    for (long n = 1; n <= 4; ++n) {
        auto F = fixed_trace_cdf(table, 4, n);
        for (const Rational& bp : F.breakpoints()) {
            if (bp == 0) continue;
            CHECK((F.one_sided(bp, +1) - F.one_sided(bp, -1)).is_zero());
        }
        // plateau F = 1 for x >= 1/n, checked exactly on each interval
        auto bps = F.breakpoints();
        Rational plateau_start = rat(1, n);
        for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
            if (bps[i] >= plateau_start) {
                auto ci = F.collapse(bps[i], bps[i + 1]);
                CHECK(ci.rads.empty());
                REQUIRE(ci.monomials.size() == 1);
                CHECK(ci.monomials.at(0) == ExactScalar(1));
            }
        }
        // monotone grid
        BigFloat prev(prec);
        for (int k = 1; k <= 20; ++k) {
            BigFloat v = F.eval(rat(k, 21), prec);
            CHECK(v >= prev - tol10(-40, prec));
            prev = v;
        }
    }
}

TEST_CASE("conductance reproduces the printed N1=N2=3 density") {
    auto P = conductance_pdf(3, 3, 1);

    // (0,1): (6/7) g^(7/2)
    auto c01 = P.collapse(0, 1);
    CHECK(c01.rads.empty());
    REQUIRE(c01.monomials.size() == 1);
    CHECK(c01.monomials.at(rat(7, 2)) == ExactScalar(rat(6, 7)));

    // (1,2) and (2,3): (3/28)(35g^3 - 175g^2 + 273g - 125), the second window
    // adding -(3/28) 8 (g-2)^(5/2)(g+5)
    std::map<Rational, ExactScalar> poly{
        {0, ExactScalar(rat(-375, 28))},
        {1, ExactScalar(rat(819, 28))},
        {2, ExactScalar(rat(-525, 28))},
        {3, ExactScalar(rat(105, 28))},
    };
    auto c12 = P.collapse(1, 2);
    CHECK(c12.monomials == poly);
    CHECK(c12.rads.empty());

    auto c23 = P.collapse(2, 3);
    CHECK(c23.monomials == poly);
    BaseKey g2{2, 1, 1};
    REQUIRE(c23.rads.count(g2) == 1);
    // -(6/7)(g-2)^(5/2)(g+5) with g+5 = (g-2)+7
    std::map<Rational, ExactScalar> radexp{
        {rat(5, 2), ExactScalar(-6)},
        {rat(7, 2), ExactScalar(rat(-6, 7))},
    };
    CHECK(c23.rads.at(g2) == radexp);

    // nothing beyond g = 3, unit mass, continuity
    CHECK(P.collapse(3, 4, true).empty());
    CHECK(P.integrate_range(0, 3) == ExactScalar(1));
    for (const Rational& bp : P.breakpoints()) {
        if (bp == 0) continue;
        CHECK((P.one_sided(bp, +1) - P.one_sided(bp, -1)).is_zero());
    }
}

TEST_CASE("conductance reproduces the printed N1=N2=4 density") {
    auto P = conductance_pdf(4, 4, 1);
    Rational c = rat(5, 27456);

    // (0,1): (5/27456) 429 g^7
    auto c01 = P.collapse(0, 1);
    CHECK(c01.rads.empty());
    REQUIRE(c01.monomials.size() == 1);
    CHECK(c01.monomials.at(7) == ExactScalar(c * 429));

    // (1,2): same polynomial minus (5/27456) 512 (g-1)^(9/2)(6g^2-64g+201)
    auto c12 = P.collapse(1, 2);
    REQUIRE(c12.monomials.size() == 1);
    CHECK(c12.monomials.at(7) == ExactScalar(c * 429));
    BaseKey g1{1, 1, 1};
    REQUIRE(c12.rads.count(g1) == 1);
    // 6g^2 - 64g + 201 = 6B^2 - 52B + 143 at B = g-1
    std::map<Rational, ExactScalar> rad1{
        {rat(9, 2), ExactScalar(c * -512 * 143)},
        {rat(11, 2), ExactScalar(c * 512 * 52)},
        {rat(13, 2), ExactScalar(c * -512 * 6)},
    };
    CHECK(c12.rads.at(g1) == rad1);

    // (2,3): -(5/27456)(429g^7 - 72072g^5 + 672672g^4 - 2800512g^3
    //         + 6150144g^2 - 6935552g + 3158016)
    std::map<Rational, ExactScalar> poly2{
        {0, ExactScalar(c * -3158016)}, {1, ExactScalar(c * 6935552)},
        {2, ExactScalar(c * -6150144)}, {3, ExactScalar(c * 2800512)},
        {4, ExactScalar(c * -672672)},  {5, ExactScalar(c * 72072)},
        {7, ExactScalar(c * -429)},
    };
    auto c23 = P.collapse(2, 3);
    CHECK(c23.monomials == poly2);
    CHECK(c23.rads.empty());

    // (3,4): adds +(5/27456) 1024 (g-3)^(11/2)(3g+4), 3g+4 = 3B+13 at B = g-3
    auto c34 = P.collapse(3, 4);
    CHECK(c34.monomials == poly2);
    BaseKey g3{3, 1, 1};
    REQUIRE(c34.rads.count(g3) == 1);
    std::map<Rational, ExactScalar> rad3{
        {rat(11, 2), ExactScalar(c * 1024 * 13)},
        {rat(13, 2), ExactScalar(c * 1024 * 3)},
    };
    CHECK(c34.rads.at(g3) == rad3);

    CHECK(P.collapse(4, 5, true).empty());
    CHECK(P.integrate_range(0, 4) == ExactScalar(1));
}

TEST_CASE("conductance is symmetric in the channel counts") {
    auto a = conductance_pdf(2, 4, 1);
    auto b = conductance_pdf(4, 2, 1);
    CHECK(a.terms() == b.terms());
    CHECK(a.integrate_range(0, 2) == ExactScalar(1));
}

TEST_CASE("conductance supports beta 2 and 4 through the integer regime") {
    auto p2 = conductance_pdf(3, 3, 2);
    CHECK(p2.integrate_range(0, 3) == ExactScalar(1));
    auto p4 = conductance_pdf(2, 2, 4);
    CHECK(p4.integrate_range(0, 2) == ExactScalar(1));
    CHECK_THROWS_AS(conductance_pdf(2, 2, 3), RegimeUnsupported);
}

TEST_CASE("fixed trace against numeric Bromwich sanity") {
    // F^{fL}(1;x) for the beta=2, lambda1=0, N=2 ensemble has gamma = 4:
    // classical result F(x) = (1-(2x-1)^3 Theta(2x-1) - ... ) -- instead of a
    // closed form, verify plateau, continuity, mean, and the gap qualification
    EnsembleSpec spec = EnsembleSpec::laguerre(2, 0);
    auto table = compute_laguerre_table(spec, 2);
    auto F = fixed_trace_cdf(table, 2, 1);
    CHECK(F.collapse(rat(1, 4), rat(1, 2)).empty());  // vanishes below 1/N
    CHECK(F.one_sided(1, -1) == ExactScalar(1));
    mpfr_prec_t prec = bits_for_digits(40);
    BigFloat half = F.eval(rat(3, 4), prec);
    CHECK(half > BigFloat(prec));
    CHECK(half < BigFloat::from(1L, prec));
}
