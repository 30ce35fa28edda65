#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>

namespace cmline {

/// Arbitrary-precision binary float with an explicit bit precision.
///
/// Thin RAII owner of an `mpfr_t`. Binary operations return a value whose
/// precision is the larger of the operands' precisions, so a computation
/// seeded at P bits stays at P bits throughout. Rounding is to nearest.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t bits = 64) {
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
  }
  BigFloat(long x, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  BigFloat(double x, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  BigFloat(const mpz_class& x, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_z(v_, x.get_mpz_t(), MPFR_RNDN);
  }
  BigFloat(const mpq_class& x, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_q(v_, x.get_mpq_t(), MPFR_RNDN);
  }
  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
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

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  static BigFloat pi(mpfr_prec_t bits) {
    BigFloat r(bits);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }
  static BigFloat log2_const(mpfr_prec_t bits) {
    BigFloat r(bits);
    mpfr_const_log2(r.v_, MPFR_RNDN);
    return r;
  }
  /// 2^e at the given precision.
  static BigFloat pow2(long e, mpfr_prec_t bits) {
    BigFloat r(bits);
    mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
    return r;
  }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  mpz_class round_to_integer() const {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
    return z;
  }

  /// Decimal rendering with `digits` significant digits.
  std::string to_string(int digits = 30) const {
    char* buf = nullptr;
    std::string fmt = "%." + std::to_string(digits) + "Rg";
    mpfr_asprintf(&buf, fmt.c_str(), v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

#define CMLINE_BIGFLOAT_BINOP(op, fn)                                      \
  friend BigFloat operator op(const BigFloat& a, const BigFloat& b) {      \
    BigFloat r(std::max(a.precision(), b.precision()));                    \
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);                                       \
    return r;                                                              \
  }                                                                        \
  BigFloat& operator op##=(const BigFloat& b) {                            \
    if (b.precision() > precision()) mpfr_prec_round(v_, b.precision(), MPFR_RNDN); \
    fn(v_, v_, b.v_, MPFR_RNDN);                                           \
    return *this;                                                          \
  }
  CMLINE_BIGFLOAT_BINOP(+, mpfr_add)
  CMLINE_BIGFLOAT_BINOP(-, mpfr_sub)
  CMLINE_BIGFLOAT_BINOP(*, mpfr_mul)
  CMLINE_BIGFLOAT_BINOP(/, mpfr_div)
#undef CMLINE_BIGFLOAT_BINOP

  friend BigFloat operator*(const BigFloat& a, long s) {
    BigFloat r(a.precision());
    mpfr_mul_si(r.v_, a.v_, s, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator*(long s, const BigFloat& a) { return a * s; }
  friend BigFloat operator*(const BigFloat& a, const mpz_class& s) {
    BigFloat r(a.precision());
    mpfr_mul_z(r.v_, a.v_, s.get_mpz_t(), MPFR_RNDN);
    return r;
  }
  friend BigFloat operator/(const BigFloat& a, long s) {
    BigFloat r(a.precision());
    mpfr_div_si(r.v_, a.v_, s, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator+(const BigFloat& a, long s) {
    BigFloat r(a.precision());
    mpfr_add_si(r.v_, a.v_, s, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator-(const BigFloat& a, long s) {
    BigFloat r(a.precision());
    mpfr_sub_si(r.v_, a.v_, s, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator-(const BigFloat& a) {
    BigFloat r(a.precision());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

#define CMLINE_BIGFLOAT_UNARY(name, fn)                \
  friend BigFloat name(const BigFloat& a) {            \
    BigFloat r(a.precision());                         \
    fn(r.v_, a.v_, MPFR_RNDN);                         \
    return r;                                          \
  }
  CMLINE_BIGFLOAT_UNARY(sqrt, mpfr_sqrt)
  CMLINE_BIGFLOAT_UNARY(exp, mpfr_exp)
  CMLINE_BIGFLOAT_UNARY(log, mpfr_log)
  CMLINE_BIGFLOAT_UNARY(cos, mpfr_cos)
  CMLINE_BIGFLOAT_UNARY(sin, mpfr_sin)
  CMLINE_BIGFLOAT_UNARY(abs, mpfr_abs)
#undef CMLINE_BIGFLOAT_UNARY

  friend BigFloat hypot(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.precision(), b.precision()));
    mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

 private:
  mpfr_t v_;
};

/// Complex number as a pair of BigFloats.
struct Complex {
  BigFloat re;
  BigFloat im;

  explicit Complex(mpfr_prec_t bits = 64) : re(bits), im(bits) {}
  Complex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}

  mpfr_prec_t precision() const { return std::max(re.precision(), im.precision()); }

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator*(const Complex& a, const BigFloat& s) { return {a.re * s, a.im * s}; }
  friend Complex operator*(const Complex& a, long s) { return {a.re * s, a.im * s}; }
  friend Complex operator/(const Complex& a, const Complex& b) {
    BigFloat n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  Complex& operator+=(const Complex& b) { re += b.re; im += b.im; return *this; }
  Complex& operator-=(const Complex& b) { re -= b.re; im -= b.im; return *this; }
  Complex& operator*=(const Complex& b) { *this = *this * b; return *this; }

  friend BigFloat abs(const Complex& a) { return hypot(a.re, a.im); }
};

}  // namespace cmline
