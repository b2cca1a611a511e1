#pragma once

// Exact integer/rational arithmetic and precision-controlled reals.
//
// Integer and Rational are GMP values; Real is an RAII handle over an MPFR
// number whose mantissa width travels with the value. Binary operations on
// Reals round to the wider of the two operand precisions.

#include <mpfr.h>
#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>

namespace zerosum {

using Integer = mpz_class;

inline constexpr unsigned kDefaultPrecisionBits = 256;
inline constexpr unsigned kMinPrecisionBits = 64;

struct PrecisionContext {
  unsigned bits = kDefaultPrecisionBits;

  // Throws std::invalid_argument when bits < kMinPrecisionBits.
  void validate() const;
};

// Reads ZEROSUM_BITS if set, otherwise kDefaultPrecisionBits.
PrecisionContext default_precision();

/// Exact rational in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(const Integer& v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(const Integer& num, const Integer& den);

  // Accepts "a", "-a", "a/b".
  static Rational parse(const std::string& text);

  Integer numerator() const { return v_.get_num(); }
  Integer denominator() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  Rational operator-() const { return from_raw(-v_); }
  friend Rational operator+(const Rational& a, const Rational& b) { return from_raw(a.v_ + b.v_); }
  friend Rational operator-(const Rational& a, const Rational& b) { return from_raw(a.v_ - b.v_); }
  friend Rational operator*(const Rational& a, const Rational& b) { return from_raw(a.v_ * b.v_); }
  friend Rational operator/(const Rational& a, const Rational& b);

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  int sign() const { return sgn(v_); }
  std::string to_string() const;
  double to_double() const { return v_.get_d(); }

 private:
  static Rational from_raw(mpq_class v);
  mpq_class v_;
};

Rational pow(const Rational& base, unsigned long exponent);

/// Multiple-precision binary floating point value (round-to-nearest).
class Real {
 public:
  explicit Real(unsigned bits = kDefaultPrecisionBits);
  Real(long v, unsigned bits);
  Real(const Integer& v, unsigned bits);
  Real(const Rational& v, unsigned bits);
  // Decimal or scientific notation; throws std::invalid_argument otherwise.
  Real(const std::string& decimal, unsigned bits);

  static Real from_double(double v, unsigned bits);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  unsigned precision() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }
  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  Real operator-() const;
  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  // Binary exponent e with 2^(e-1) <= |x| < 2^e; meaningless for zero.
  long exponent2() const { return mpfr_get_exp(v_); }

  // Round to nearest integer, then floor.
  Integer floor() const;

  // Scientific notation with `digits` significant decimal digits
  // (0 selects enough digits to round-trip the binary value).
  std::string to_string(std::size_t digits = 0) const;

  // Reinterpret the value at a new precision (rounded to nearest).
  Real with_precision(unsigned bits) const;

 private:
  mpfr_t v_;
};

Real abs(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real pow(const Real& base, unsigned long exponent);
Real pow(const Real& base, const Real& exponent);
Real euler_e(unsigned bits);

/// Exact binomial coefficient; zero when b > a.
Integer binom(unsigned long a, unsigned long b);
/// Exact binomial coefficient for arbitrary-size a; zero when b > a or b < 0.
Integer binom(const Integer& a, const Integer& b);

/// Exact lower Sondow bound k^{kn} / ((k-1)^{(k-1)n} * 4(k-1)n).
Rational sondow_lower(long k, long n);
/// Exact upper Sondow bound k^{kn} / (k-1)^{(k-1)n}.
Rational sondow_upper(long k, long n);
/// sondow_lower(k,n) < C(kn,n) < sondow_upper(k,n), compared exactly.
bool check_sondow(long k, long n);

/// n-th root of a positive rational. Exact whenever x is the n-th power of a
/// rational; otherwise correctly rounded from the rounded input.
Real nth_root(const Rational& x, unsigned long n, const PrecisionContext& ctx);
Real nth_root(const Real& x, unsigned long n);

inline constexpr std::size_t kDefaultExactDigitCutoff = 4000;

/// Natural log of C(a, b) for 0 <= b <= a. Uses the exact integer value while
/// its decimal length is estimated below `exact_digit_cutoff`, otherwise a
/// log-gamma difference evaluated with enough guard bits to absorb
/// cancellation. Throws std::domain_error when C(a,b) = 0.
Real log_binom(const Integer& a, const Integer& b, const PrecisionContext& ctx,
               std::size_t exact_digit_cutoff = kDefaultExactDigitCutoff);

}  // namespace zerosum
