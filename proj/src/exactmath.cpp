#include "zerosum/exactmath.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace zerosum {

void PrecisionContext::validate() const {
  if (bits < kMinPrecisionBits) {
    throw std::invalid_argument("precision must be at least " + std::to_string(kMinPrecisionBits) +
                                " bits, got " + std::to_string(bits));
  }
}

PrecisionContext default_precision() {
  PrecisionContext ctx;
  if (const char* env = std::getenv("ZEROSUM_BITS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0') {
      throw std::invalid_argument("ZEROSUM_BITS is not an integer: " + std::string(env));
    }
    ctx.bits = static_cast<unsigned>(v);
  }
  ctx.validate();
  return ctx;
}

// ---------------------------------------------------------------------------
// Rational

Rational::Rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational Rational::from_raw(mpq_class v) {
  v.canonicalize();
  Rational r;
  r.v_ = std::move(v);
  return r;
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.sign() == 0) throw std::domain_error("rational division by zero");
  return Rational::from_raw(a.v_ / b.v_);
}

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(text, 10));
    return Rational(Integer(text.substr(0, slash), 10), Integer(text.substr(slash + 1), 10));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("not a rational: '" + text + "'");
  }
}

std::string Rational::to_string() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational pow(const Rational& base, unsigned long exponent) {
  Integer num;
  Integer den;
  mpz_pow_ui(num.get_mpz_t(), base.numerator().get_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.denominator().get_mpz_t(), exponent);
  return Rational(num, den);
}

// ---------------------------------------------------------------------------
// Real

Real::Real(unsigned bits) {
  mpfr_init2(v_, bits);
  mpfr_set_zero(v_, 1);
}

Real::Real(long v, unsigned bits) {
  mpfr_init2(v_, bits);
  mpfr_set_si(v_, v, MPFR_RNDN);
}

Real::Real(const Integer& v, unsigned bits) {
  mpfr_init2(v_, bits);
  mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
}

Real::Real(const Rational& v, unsigned bits) {
  mpfr_init2(v_, bits);
  mpfr_set_q(v_, v.raw().get_mpq_t(), MPFR_RNDN);
}

Real::Real(const std::string& decimal, unsigned bits) {
  mpfr_init2(v_, bits);
  if (decimal.empty() || mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN) != 0) {
    mpfr_clear(v_);
    throw std::invalid_argument("not a decimal number: '" + decimal + "'");
  }
}

Real Real::from_double(double v, unsigned bits) {
  Real r(bits);
  mpfr_set_d(r.v_, v, MPFR_RNDN);
  return r;
}

Real::Real(const Real& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_swap(v_, other.v_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

namespace {

// Widen `x` in place so that a binary operation with `o` rounds at the larger
// precision.
void widen_to(mpfr_ptr x, mpfr_srcptr o) {
  if (mpfr_get_prec(o) > mpfr_get_prec(x)) mpfr_prec_round(x, mpfr_get_prec(o), MPFR_RNDN);
}

}  // namespace

Real Real::operator-() const {
  Real r(*this);
  mpfr_neg(r.v_, r.v_, MPFR_RNDN);
  return r;
}

Real& Real::operator+=(const Real& o) {
  widen_to(v_, o.v_);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& o) {
  widen_to(v_, o.v_);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(const Real& o) {
  widen_to(v_, o.v_);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(const Real& o) {
  widen_to(v_, o.v_);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.v_, b.v_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

Integer Real::floor() const {
  if (!is_finite()) throw std::domain_error("floor of a non-finite value");
  Integer z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
  return z;
}

std::string Real::to_string(std::size_t digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return sign() > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(v_)) return "0";
  if (digits == 0) digits = mpfr_get_str_ndigits(10, mpfr_get_prec(v_));
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, digits, v_, MPFR_RNDN);
  std::string mant(raw);
  mpfr_free_str(raw);
  std::string out;
  if (mant.front() == '-') {
    out = "-";
    mant.erase(0, 1);
  }
  // Trailing zeros carry no information.
  while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
  const long e = static_cast<long>(exp10) - 1;
  if (e >= -6 && e < 21) {
    if (e < 0) {
      out += "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + mant;
    } else if (static_cast<std::size_t>(e) + 1 >= mant.size()) {
      out += mant + std::string(static_cast<std::size_t>(e) + 1 - mant.size(), '0');
    } else {
      out += mant.substr(0, static_cast<std::size_t>(e) + 1) + "." +
             mant.substr(static_cast<std::size_t>(e) + 1);
    }
    return out;
  }
  out += mant.substr(0, 1);
  if (mant.size() > 1) out += "." + mant.substr(1);
  out += "e" + std::to_string(e);
  return out;
}

Real Real::with_precision(unsigned bits) const {
  Real r(bits);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

Real abs(const Real& x) {
  Real r(x);
  mpfr_abs(r.get(), r.get(), MPFR_RNDN);
  return r;
}

Real exp(const Real& x) {
  Real r(x.precision());
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real log(const Real& x) {
  Real r(x.precision());
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real pow(const Real& base, unsigned long exponent) {
  Real r(base.precision());
  mpfr_pow_ui(r.get(), base.get(), exponent, MPFR_RNDN);
  return r;
}

Real pow(const Real& base, const Real& exponent) {
  Real r(std::max(base.precision(), exponent.precision()));
  mpfr_pow(r.get(), base.get(), exponent.get(), MPFR_RNDN);
  return r;
}

Real euler_e(unsigned bits) { return exp(Real(1L, bits)); }

// ---------------------------------------------------------------------------
// Binomials and Sondow bounds

Integer binom(unsigned long a, unsigned long b) {
  Integer r;
  if (b > a) return r;
  mpz_bin_uiui(r.get_mpz_t(), a, b);
  return r;
}

Integer binom(const Integer& a, const Integer& b) {
  Integer r;
  if (b < 0 || b > a) return r;
  // C(a, b) = C(a, a-b); mpz_bin_ui wants the smaller lower index.
  const Integer lower = std::min<Integer>(b, a - b);
  if (!lower.fits_ulong_p()) throw std::length_error("binomial lower index too large");
  mpz_bin_ui(r.get_mpz_t(), a.get_mpz_t(), lower.get_ui());
  return r;
}

namespace {

void check_sondow_args(long k, long n) {
  if (k < 2) throw std::invalid_argument("Sondow bounds need integer k >= 2, got " + std::to_string(k));
  if (n < 1) throw std::invalid_argument("Sondow bounds need n >= 1, got " + std::to_string(n));
}

Integer ipow(long base, unsigned long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), e);
  return r;
}

}  // namespace

Rational sondow_upper(long k, long n) {
  check_sondow_args(k, n);
  const auto uk = static_cast<unsigned long>(k);
  const auto un = static_cast<unsigned long>(n);
  return Rational(ipow(k, uk * un), ipow(k - 1, (uk - 1) * un));
}

Rational sondow_lower(long k, long n) {
  check_sondow_args(k, n);
  return sondow_upper(k, n) / Rational(Integer(4 * (k - 1) * n));
}

bool check_sondow(long k, long n) {
  check_sondow_args(k, n);
  const Rational c(binom(static_cast<unsigned long>(k * n), static_cast<unsigned long>(n)));
  return sondow_lower(k, n) < c && c < sondow_upper(k, n);
}

// ---------------------------------------------------------------------------
// Roots and log-domain binomials

namespace {

// Exact integer n-th root of v >= 0, if there is one.
bool exact_root(const Integer& v, unsigned long n, Integer& out) {
  return mpz_root(out.get_mpz_t(), v.get_mpz_t(), n) != 0;
}

}  // namespace

Real nth_root(const Rational& x, unsigned long n, const PrecisionContext& ctx) {
  ctx.validate();
  if (x.sign() <= 0) throw std::domain_error("nth_root of a nonpositive value");
  if (n == 0) throw std::invalid_argument("nth_root with n = 0");
  Integer rn;
  Integer rd;
  if (exact_root(x.numerator(), n, rn) && exact_root(x.denominator(), n, rd)) {
    return Real(Rational(rn, rd), ctx.bits);
  }
  const Real wide(x, ctx.bits + 32);
  return nth_root(wide, n).with_precision(ctx.bits);
}

Real nth_root(const Real& x, unsigned long n) {
  if (x.sign() <= 0) throw std::domain_error("nth_root of a nonpositive value");
  if (n == 0) throw std::invalid_argument("nth_root with n = 0");
  Real r(x.precision());
  mpfr_rootn_ui(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}

Real log_binom(const Integer& a, const Integer& b, const PrecisionContext& ctx,
               std::size_t exact_digit_cutoff) {
  ctx.validate();
  if (b < 0 || b > a) throw std::domain_error("log_binom of a zero binomial");
  const Integer lower = std::min<Integer>(b, a - b);
  if (lower == 0) return Real(ctx.bits);

  // log10 C(a, lower) <= lower * log10(e * a / lower).
  const double digits_estimate =
      lower.get_d() * std::log10(std::exp(1.0) * a.get_d() / lower.get_d());
  if (digits_estimate < static_cast<double>(exact_digit_cutoff)) {
    return log(Real(binom(a, lower), ctx.bits + 16)).with_precision(ctx.bits);
  }

  // lnGamma(a+1) has magnitude ~ a log a; keep ctx.bits after subtracting.
  const auto guard = static_cast<unsigned>(2 * mpz_sizeinbase(a.get_mpz_t(), 2) + 64);
  const unsigned wp = ctx.bits + guard;
  auto lgamma1 = [wp](const Integer& v) {
    Real arg(v, wp);
    arg += Real(1L, wp);
    Real out(wp);
    mpfr_lngamma(out.get(), arg.get(), MPFR_RNDN);
    return out;
  };
  Real result = lgamma1(a) - lgamma1(lower) - lgamma1(a - lower);
  return result.with_precision(ctx.bits);
}

}  // namespace zerosum
