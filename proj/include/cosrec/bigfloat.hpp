#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

namespace cosrec {

// Fixed-mantissa real number. Precision is chosen at construction and sticks
// with the value; binary operations run at the wider of the two operands.
// Rounding is to-nearest except where a member says otherwise.
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t prec = 64) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    BigFloat(double x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
    BigFloat(const mpz_class& x, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_z(v_, x.get_mpz_t(), MPFR_RNDN);
    }
    BigFloat(const mpq_class& x, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_q(v_, x.get_mpq_t(), MPFR_RNDN);
    }
    BigFloat(const BigFloat& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    BigFloat(BigFloat&& o) noexcept { mpfr_init2(v_, 2); mpfr_swap(v_, o.v_); }
    BigFloat& operator=(BigFloat o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    static BigFloat pi(mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    // sgn(x) * floor(|x| * 2^N): the numerator of the dyadic truncation
    mpz_class trunc_scaled(long N) const {
        BigFloat s(*this);
        mpfr_mul_2si(s.v_, s.v_, N, MPFR_RNDN);
        mpz_class out;
        mpfr_get_z(out.get_mpz_t(), s.v_, MPFR_RNDZ);
        return out;
    }

    mpz_class round_to_mpz() const {
        mpz_class out;
        mpfr_get_z(out.get_mpz_t(), v_, MPFR_RNDN);
        return out;
    }

    BigFloat& mul_2si(long e) {
        mpfr_mul_2si(v_, v_, e, MPFR_RNDN);
        return *this;
    }

#define COSREC_BF_BINOP(op, fn)                                          \
    friend BigFloat operator op(const BigFloat& a, const BigFloat& b) {  \
        BigFloat r(std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_)));  \
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);                                 \
        return r;                                                        \
    }
    COSREC_BF_BINOP(+, mpfr_add)
    COSREC_BF_BINOP(-, mpfr_sub)
    COSREC_BF_BINOP(*, mpfr_mul)
    COSREC_BF_BINOP(/, mpfr_div)
#undef COSREC_BF_BINOP

    BigFloat& operator+=(const BigFloat& o) { return *this = *this + o; }
    BigFloat& operator-=(const BigFloat& o) { return *this = *this - o; }
    BigFloat& operator*=(const BigFloat& o) { return *this = *this * o; }
    BigFloat& operator/=(const BigFloat& o) { return *this = *this / o; }

    friend BigFloat operator-(const BigFloat& a) {
        BigFloat r(mpfr_get_prec(a.v_));
        mpfr_neg(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

#define COSREC_BF_FUN(name, fn)                     \
    friend BigFloat name(const BigFloat& a) {       \
        BigFloat r(mpfr_get_prec(a.v_));            \
        fn(r.v_, a.v_, MPFR_RNDN);                  \
        return r;                                   \
    }
    COSREC_BF_FUN(abs, mpfr_abs)
    COSREC_BF_FUN(sqrt, mpfr_sqrt)
    COSREC_BF_FUN(cos, mpfr_cos)
    COSREC_BF_FUN(acos, mpfr_acos)
#undef COSREC_BF_FUN

    friend BigFloat floor(const BigFloat& a) {
        BigFloat r(mpfr_get_prec(a.v_));
        mpfr_floor(r.v_, a.v_);
        return r;
    }

    friend int cmp(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_); }
    friend bool operator<(const BigFloat& a, const BigFloat& b) { return cmp(a, b) < 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return cmp(a, b) > 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return cmp(a, b) <= 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return cmp(a, b) >= 0; }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return cmp(a, b) == 0; }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }

    std::string str(std::size_t digits = 20) const {
        char* s = nullptr;
        mpfr_asprintf(&s, "%.*Rg", static_cast<int>(digits), v_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

private:
    mpfr_t v_;
};

}  // namespace cosrec
