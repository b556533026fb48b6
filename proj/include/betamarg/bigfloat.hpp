#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "betamarg/exact_scalar.hpp"
#include "betamarg/rational.hpp"

namespace betamarg {

inline mpfr_prec_t bits_for_digits(unsigned digits) {
    return static_cast<mpfr_prec_t>(digits * 3.3219280948873626 + 64);
}

// Arbitrary-precision float on mpfr_t. Precision is fixed per value; binary
// operations round into the wider operand's precision.
class BigFloat {
  public:
    explicit BigFloat(mpfr_prec_t prec_bits = 128) { mpfr_init2(v_, prec_bits); mpfr_set_zero(v_, 1); }

    BigFloat(const BigFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    static BigFloat from(const Rational& q, mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
        return r;
    }
    static BigFloat from(long n, mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_set_si(r.v_, n, MPFR_RNDN);
        return r;
    }
    static BigFloat from(double d, mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_set_d(r.v_, d, MPFR_RNDN);
        return r;
    }
    static BigFloat pi(mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    mpfr_srcptr raw() const { return v_; }
    mpfr_ptr raw() { return v_; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
        BigFloat r(std::max(a.prec(), b.prec()));
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
        BigFloat r(std::max(a.prec(), b.prec()));
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
        BigFloat r(std::max(a.prec(), b.prec()));
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
        BigFloat r(std::max(a.prec(), b.prec()));
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator-(const BigFloat& a) {
        BigFloat r(a.prec());
        mpfr_neg(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    BigFloat& operator+=(const BigFloat& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator-=(const BigFloat& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator*=(const BigFloat& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator/=(const BigFloat& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) == 0; }

    friend BigFloat abs(const BigFloat& a) {
        BigFloat r(a.prec());
        mpfr_abs(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat sqrt(const BigFloat& a) {
        BigFloat r(a.prec());
        mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat exp(const BigFloat& a) {
        BigFloat r(a.prec());
        mpfr_exp(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat log(const BigFloat& a) {
        BigFloat r(a.prec());
        mpfr_log(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat erf(const BigFloat& a) {
        BigFloat r(a.prec());
        mpfr_erf(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat erfc(const BigFloat& a) {
        BigFloat r(a.prec());
        mpfr_erfc(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat tgamma(const BigFloat& a) {
        BigFloat r(a.prec());
        mpfr_gamma(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat cosh(const BigFloat& a) {
        BigFloat r(a.prec());
        mpfr_cosh(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat sinh(const BigFloat& a) {
        BigFloat r(a.prec());
        mpfr_sinh(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat pow(const BigFloat& a, const BigFloat& b) {
        BigFloat r(std::max(a.prec(), b.prec()));
        mpfr_pow(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat pow_si(const BigFloat& a, long e) {
        BigFloat r(a.prec());
        mpfr_pow_si(r.v_, a.v_, e, MPFR_RNDN);
        return r;
    }
    // x^q for x >= 0, q rational
    static BigFloat pow_rat(const BigFloat& x, const Rational& q) {
        BigFloat e = BigFloat::from(q, x.prec());
        return pow(x, e);
    }
    friend BigFloat ldexp2(const BigFloat& a, long e) {  // a * 2^e
        BigFloat r(a.prec());
        mpfr_mul_2si(r.v_, a.v_, e, MPFR_RNDN);
        return r;
    }

    // Round-trippable decimal form, deterministic for fixed digits.
    std::string to_string(unsigned digits = 0) const {
        if (digits == 0) digits = static_cast<unsigned>(prec() / 3.33) - 2;
        char* s = nullptr;
        int n = mpfr_asprintf(&s, "%.*Rg", static_cast<int>(digits), v_);
        std::string out = n >= 0 ? std::string(s) : std::string("nan");
        mpfr_free_str(s);
        return out;
    }

  private:
    mpfr_t v_;
};

inline BigFloat to_bigfloat(const ExactScalar& s, mpfr_prec_t prec) {
    BigFloat acc(prec);
    BigFloat pi = BigFloat::pi(prec);
    for (const auto& [k, v] : s.terms()) {
        BigFloat t = BigFloat::from(v, prec);
        if (k.pi_half != 0)
            t *= pow(pi, BigFloat::from(Rational(k.pi_half, 2), prec));
        if (k.rad != 1) {
            BigFloat m(prec);
            mpfr_set_z(m.raw(), k.rad.get_mpz_t(), MPFR_RNDN);
            t *= sqrt(m);
        }
        acc += t;
    }
    return acc;
}

struct BigComplex {
    BigFloat re, im;

    explicit BigComplex(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
    BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}

    friend BigComplex operator+(const BigComplex& a, const BigComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend BigComplex operator-(const BigComplex& a, const BigComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
        BigFloat d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    friend BigComplex operator-(const BigComplex& a) { return {-a.re, -a.im}; }
    friend BigFloat abs(const BigComplex& a) { return sqrt(a.re * a.re + a.im * a.im); }
};

}  // namespace betamarg
