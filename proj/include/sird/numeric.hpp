#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace sird {

enum class Errc {
  InvalidArgument,
  DegenerateInput,
  NoAdmissiblePermutation,
  SingularDiagonal,
  DegenerateCorner,
  PrecisionExhausted,
  NoPolynomialFound,
  FactorizationFailed,
  ParseError,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

const char* errc_name(Errc code);

/// Arbitrary-precision binary float (MPFR), RAII-managed.
/// Every value carries its own precision; binary operations round to
/// the larger of the two operand precisions.
class BigFloat {
 public:
  static constexpr mpfr_prec_t kMinPrec = 64;

  explicit BigFloat(mpfr_prec_t prec = kMinPrec);
  BigFloat(const BigFloat& o);
  BigFloat(BigFloat&& o) noexcept;
  BigFloat& operator=(const BigFloat& o);
  BigFloat& operator=(BigFloat&& o) noexcept;
  ~BigFloat();

  static BigFloat from_long(long v, mpfr_prec_t prec);
  static BigFloat from_mpz(const mpz_class& v, mpfr_prec_t prec);
  static BigFloat from_mpq(const mpq_class& v, mpfr_prec_t prec);
  static BigFloat from_decimal(std::string_view text, mpfr_prec_t prec);
  static BigFloat pow2(long e, mpfr_prec_t prec);  // 2^e, exact

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

  BigFloat add(const BigFloat& o) const;
  BigFloat sub(const BigFloat& o) const;
  BigFloat mul(const BigFloat& o) const;
  BigFloat div(const BigFloat& o) const;
  BigFloat neg() const;
  BigFloat abs() const;
  BigFloat sqrt() const;

  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int cmp(const BigFloat& o) const { return mpfr_cmp(v_, o.v_); }
  int cmp(const mpq_class& q) const { return mpfr_cmp_q(v_, q.get_mpq_t()); }

  /// Exact floor(x + 1/2) (round half toward +infinity).
  mpz_class nearest_integer() const;
  mpz_class floor() const;

  /// The represented value is a dyadic rational; recover it exactly.
  mpq_class to_rational_exact() const;
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  std::string to_decimal(size_t significant_digits) const;

 private:
  mpfr_t v_;
};

enum class Mode { Exact, Float };

/// One scalar value in either exact-rational or float(p) arithmetic.
///
/// Exact values are canonical reduced fractions (GMP keeps them so).
/// Mixed-mode operations promote the exact operand to the float
/// operand's precision; mixed-mode comparisons are exact.
class Scalar {
 public:
  Scalar() : v_(mpq_class(0)) {}
  explicit Scalar(long v) : v_(mpq_class(v)) {}
  explicit Scalar(const mpz_class& v) : v_(mpq_class(v)) {}
  explicit Scalar(const mpq_class& v) : v_(v) { mpq_class& q = std::get<mpq_class>(v_); q.canonicalize(); }
  explicit Scalar(const BigFloat& v) : v_(v) {}
  explicit Scalar(BigFloat&& v) : v_(std::move(v)) {}

  /// Parses "p/q", plain decimals ("-12.75"), and scientific notation
  /// ("3.1e-40"); exact mode keeps the value as a rational.
  static Scalar parse(std::string_view text, Mode mode, mpfr_prec_t prec = BigFloat::kMinPrec);

  Mode mode() const { return std::holds_alternative<mpq_class>(v_) ? Mode::Exact : Mode::Float; }
  mpfr_prec_t precision() const;

  const mpq_class& rational() const;
  const BigFloat& big_float() const;

  Scalar to_mode(Mode mode, mpfr_prec_t prec) const;

  Scalar operator-() const;
  Scalar abs() const;
  Scalar sqrt() const;  // float mode only
  int sign() const;
  bool is_zero() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& o) { *this = *this + o; return *this; }
  Scalar& operator-=(const Scalar& o) { *this = *this - o; return *this; }
  Scalar& operator*=(const Scalar& o) { *this = *this * o; return *this; }
  Scalar& operator/=(const Scalar& o) { *this = *this / o; return *this; }

  int cmp(const Scalar& o) const;
  bool operator==(const Scalar& o) const { return cmp(o) == 0; }
  bool operator!=(const Scalar& o) const { return cmp(o) != 0; }
  bool operator<(const Scalar& o) const { return cmp(o) < 0; }
  bool operator<=(const Scalar& o) const { return cmp(o) <= 0; }
  bool operator>(const Scalar& o) const { return cmp(o) > 0; }
  bool operator>=(const Scalar& o) const { return cmp(o) >= 0; }

  double to_double() const;
  std::string to_decimal(size_t significant_digits) const;
  /// Lossless text form: "p/q" or "p" in exact mode, full-precision
  /// decimal in float mode.
  std::string serialize() const;

 private:
  std::variant<mpq_class, BigFloat> v_;
};

/// floor(c + 1/2): rounds half up, so 0.5 -> 1 and -0.5 -> 0.
mpz_class nearest_integer(const Scalar& c);

/// Zero-detection policy. Exact mode uses threshold 0; float(p) mode
/// defaults to 2^-(p-20), leaving 20 guard bits of slack above the
/// last representable bit.
struct ZeroPolicy {
  Scalar threshold;  // nonnegative

  static ZeroPolicy exact() { return ZeroPolicy{Scalar(0)}; }
  static ZeroPolicy for_precision(mpfr_prec_t p);
  static ZeroPolicy with_threshold(Scalar t);

  bool is_zero(const Scalar& c) const;
};

bool is_effectively_zero(const Scalar& c, const ZeroPolicy& policy);

/// Parses a decimal/scientific/fraction literal into an exact rational.
mpq_class parse_rational(std::string_view text);

/// Decimal rendering of an exact rational with the given number of
/// significant digits (exact when the fraction terminates within them).
std::string rational_to_decimal(const mpq_class& q, size_t significant_digits);

struct ComplexRational {
  mpq_class re;
  mpq_class im;

  bool is_real() const { return sgn(im) == 0; }
  ComplexRational mul(const ComplexRational& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
};

/// Parses "a+bi" / "a-bi" / "a" / "bi" with decimal-string parts.
ComplexRational parse_complex(std::string_view text);
std::string complex_to_string(const ComplexRational& z, size_t significant_digits);

struct ComplexFloat {
  BigFloat re;
  BigFloat im;

  explicit ComplexFloat(mpfr_prec_t prec = BigFloat::kMinPrec) : re(prec), im(prec) {}
  ComplexFloat(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}

  static ComplexFloat from_rational(const ComplexRational& z, mpfr_prec_t prec);

  ComplexFloat add(const ComplexFloat& o) const { return {re.add(o.re), im.add(o.im)}; }
  ComplexFloat sub(const ComplexFloat& o) const { return {re.sub(o.re), im.sub(o.im)}; }
  ComplexFloat mul(const ComplexFloat& o) const;
  ComplexFloat div(const ComplexFloat& o) const;
  BigFloat abs2() const { return re.mul(re).add(im.mul(im)); }
};

}  // namespace sird
