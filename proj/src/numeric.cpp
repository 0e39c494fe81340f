#include "sird/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <sstream>

namespace sird {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::NoAdmissiblePermutation: return "NoAdmissiblePermutation";
    case Errc::SingularDiagonal: return "SingularDiagonal";
    case Errc::DegenerateCorner: return "DegenerateCorner";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::NoPolynomialFound: return "NoPolynomialFound";
    case Errc::FactorizationFailed: return "FactorizationFailed";
    case Errc::ParseError: return "ParseError";
  }
  return "UnknownError";
}

// ---------------------------------------------------------------------------
// BigFloat

BigFloat::BigFloat(mpfr_prec_t prec) {
  mpfr_init2(v_, std::max<mpfr_prec_t>(prec, MPFR_PREC_MIN));
  mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(const BigFloat& o) {
  mpfr_init2(v_, o.precision());
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& o) noexcept {
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, o.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& o) {
  if (this != &o) {
    mpfr_set_prec(v_, o.precision());
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& o) noexcept {
  if (this != &o) mpfr_swap(v_, o.v_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

BigFloat BigFloat::from_long(long v, mpfr_prec_t prec) {
  BigFloat r(prec);
  mpfr_set_si(r.v_, v, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::from_mpz(const mpz_class& v, mpfr_prec_t prec) {
  // Raise the precision if needed so integer inputs convert exactly.
  mpfr_prec_t need = std::max<mpfr_prec_t>(prec, mpz_sizeinbase(v.get_mpz_t(), 2));
  BigFloat r(need);
  mpfr_set_z(r.v_, v.get_mpz_t(), MPFR_RNDN);
  return r;
}

BigFloat BigFloat::from_mpq(const mpq_class& v, mpfr_prec_t prec) {
  BigFloat r(prec);
  mpfr_set_q(r.v_, v.get_mpq_t(), MPFR_RNDN);
  return r;
}

BigFloat BigFloat::from_decimal(std::string_view text, mpfr_prec_t prec) {
  BigFloat r(prec);
  std::string s(text);
  char* end = nullptr;
  mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end == s.c_str() || *end != '\0')
    throw Error(Errc::ParseError, "not a decimal number: '" + s + "'");
  return r;
}

BigFloat BigFloat::pow2(long e, mpfr_prec_t prec) {
  BigFloat r(prec);
  mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
  return r;
}

static mpfr_prec_t join_prec(const BigFloat& a, const BigFloat& b) {
  return std::max(a.precision(), b.precision());
}

BigFloat BigFloat::add(const BigFloat& o) const {
  BigFloat r(join_prec(*this, o));
  mpfr_add(r.v_, v_, o.v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::sub(const BigFloat& o) const {
  BigFloat r(join_prec(*this, o));
  mpfr_sub(r.v_, v_, o.v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::mul(const BigFloat& o) const {
  BigFloat r(join_prec(*this, o));
  mpfr_mul(r.v_, v_, o.v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::div(const BigFloat& o) const {
  BigFloat r(join_prec(*this, o));
  mpfr_div(r.v_, v_, o.v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::neg() const {
  BigFloat r(precision());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::abs() const {
  BigFloat r(precision());
  mpfr_abs(r.v_, v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::sqrt() const {
  BigFloat r(precision());
  mpfr_sqrt(r.v_, v_, MPFR_RNDN);
  return r;
}

mpz_class BigFloat::floor() const {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
  return z;
}

mpz_class BigFloat::nearest_integer() const {
  // floor(x + 1/2) computed exactly: split x into floor and fractional
  // part (both exact at this precision) and bump when frac >= 1/2.
  mpz_class fl = floor();
  BigFloat frac(precision());
  mpfr_frac(frac.v_, v_, MPFR_RNDN);  // exact: same-exponent tail bits
  if (mpfr_sgn(frac.v_) < 0) mpfr_add_ui(frac.v_, frac.v_, 1, MPFR_RNDN);
  if (mpfr_cmp_d(frac.v_, 0.5) >= 0) fl += 1;
  return fl;
}

mpq_class BigFloat::to_rational_exact() const {
  if (is_zero()) return mpq_class(0);
  if (!is_finite()) throw Error(Errc::InvalidArgument, "non-finite float");
  mpz_class mant;
  mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), v_);
  mpq_class q(mant);
  if (e >= 0) {
    mpz_class p2;
    mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(e));
    q *= mpq_class(p2);
  } else {
    mpz_class p2;
    mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(-e));
    q /= mpq_class(p2);
  }
  q.canonicalize();
  return q;
}

std::string BigFloat::to_decimal(size_t significant_digits) const {
  if (!is_finite()) return mpfr_nan_p(v_) ? "nan" : (sign() > 0 ? "inf" : "-inf");
  if (is_zero()) return "0";
  char fmt[32];
  std::snprintf(fmt, sizeof(fmt), "%%.%zuRg", significant_digits);
  char* out = nullptr;
  mpfr_asprintf(&out, fmt, v_);
  std::string s(out);
  mpfr_free_str(out);
  return s;
}

// ---------------------------------------------------------------------------
// Scalar

Scalar Scalar::parse(std::string_view text, Mode mode, mpfr_prec_t prec) {
  mpq_class q = parse_rational(text);
  if (mode == Mode::Exact) return Scalar(q);
  return Scalar(BigFloat::from_mpq(q, prec));
}

mpfr_prec_t Scalar::precision() const {
  if (mode() == Mode::Exact) return 0;
  return std::get<BigFloat>(v_).precision();
}

const mpq_class& Scalar::rational() const {
  if (mode() != Mode::Exact) throw Error(Errc::InvalidArgument, "scalar is not exact-rational");
  return std::get<mpq_class>(v_);
}

const BigFloat& Scalar::big_float() const {
  if (mode() != Mode::Float) throw Error(Errc::InvalidArgument, "scalar is not a float");
  return std::get<BigFloat>(v_);
}

Scalar Scalar::to_mode(Mode mode, mpfr_prec_t prec) const {
  if (mode == Mode::Float) {
    if (this->mode() == Mode::Float) {
      BigFloat r(prec);
      mpfr_set(r.raw(), big_float().raw(), MPFR_RNDN);
      return Scalar(std::move(r));
    }
    return Scalar(BigFloat::from_mpq(rational(), prec));
  }
  if (this->mode() == Mode::Exact) return *this;
  return Scalar(big_float().to_rational_exact());
}

Scalar Scalar::operator-() const {
  if (mode() == Mode::Exact) return Scalar(mpq_class(-rational()));
  return Scalar(big_float().neg());
}

Scalar Scalar::abs() const {
  if (mode() == Mode::Exact) return Scalar(mpq_class(::abs(rational())));
  return Scalar(big_float().abs());
}

Scalar Scalar::sqrt() const {
  if (mode() == Mode::Exact)
    throw Error(Errc::InvalidArgument, "sqrt is float-mode only; exact paths carry squares");
  if (big_float().sign() < 0) throw Error(Errc::InvalidArgument, "sqrt of negative value");
  return Scalar(big_float().sqrt());
}

int Scalar::sign() const {
  if (mode() == Mode::Exact) return sgn(rational());
  return big_float().sign();
}

bool Scalar::is_zero() const { return sign() == 0; }

namespace {

using MpfrBinOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
using MpfrQOp = int (*)(mpfr_ptr, mpfr_srcptr, mpq_srcptr, mpfr_rnd_t);

template <typename ExactOp>
Scalar binop(const Scalar& a, const Scalar& b, ExactOp eop, MpfrBinOp fop, MpfrQOp fqop) {
  if (a.mode() == Mode::Exact && b.mode() == Mode::Exact) return Scalar(eop(a.rational(), b.rational()));
  if (a.mode() == Mode::Float && b.mode() == Mode::Float) {
    BigFloat r(std::max(a.precision(), b.precision()));
    fop(r.raw(), a.big_float().raw(), b.big_float().raw(), MPFR_RNDN);
    return Scalar(std::move(r));
  }
  if (a.mode() == Mode::Float) {
    BigFloat r(a.precision());
    fqop(r.raw(), a.big_float().raw(), b.rational().get_mpq_t(), MPFR_RNDN);
    return Scalar(std::move(r));
  }
  // exact op float: promote the exact side to the float's precision.
  BigFloat lhs = BigFloat::from_mpq(a.rational(), b.precision());
  BigFloat r(b.precision());
  fop(r.raw(), lhs.raw(), b.big_float().raw(), MPFR_RNDN);
  return Scalar(std::move(r));
}

}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  return binop(a, b, [](const mpq_class& x, const mpq_class& y) { return mpq_class(x + y); }, mpfr_add, mpfr_add_q);
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  return binop(a, b, [](const mpq_class& x, const mpq_class& y) { return mpq_class(x - y); }, mpfr_sub, mpfr_sub_q);
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  return binop(a, b, [](const mpq_class& x, const mpq_class& y) { return mpq_class(x * y); }, mpfr_mul, mpfr_mul_q);
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.is_zero()) throw Error(Errc::InvalidArgument, "scalar division by zero");
  return binop(a, b, [](const mpq_class& x, const mpq_class& y) { return mpq_class(x / y); }, mpfr_div, mpfr_div_q);
}

int Scalar::cmp(const Scalar& o) const {
  if (mode() == Mode::Exact && o.mode() == Mode::Exact) return ::cmp(rational(), o.rational());
  if (mode() == Mode::Float && o.mode() == Mode::Float) return big_float().cmp(o.big_float());
  if (mode() == Mode::Float) return big_float().cmp(o.rational());
  return -o.big_float().cmp(rational());
}

double Scalar::to_double() const {
  if (mode() == Mode::Exact) return rational().get_d();
  return big_float().to_double();
}

std::string Scalar::to_decimal(size_t significant_digits) const {
  if (mode() == Mode::Exact) return rational_to_decimal(rational(), significant_digits);
  return big_float().to_decimal(significant_digits);
}

std::string Scalar::serialize() const {
  if (mode() == Mode::Exact) {
    const mpq_class& q = rational();
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
  }
  // Enough digits to reproduce every bit: ceil(p * log10(2)) + 2.
  size_t digits = static_cast<size_t>(precision() * 0.30103) + 3;
  return big_float().to_decimal(digits);
}

mpz_class nearest_integer(const Scalar& c) {
  if (c.mode() == Mode::Exact) {
    // floor((2p + q) / (2q)) with q > 0 canonical.
    const mpq_class& x = c.rational();
    mpz_class num = 2 * x.get_num() + x.get_den();
    mpz_class den = 2 * x.get_den();
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return r;
  }
  if (!c.big_float().is_finite()) throw Error(Errc::InvalidArgument, "nearest_integer of non-finite value");
  return c.big_float().nearest_integer();
}

ZeroPolicy ZeroPolicy::for_precision(mpfr_prec_t p) {
  if (p < BigFloat::kMinPrec)
    throw Error(Errc::InvalidArgument, "float precision must be at least 64 bits");
  return ZeroPolicy{Scalar(BigFloat::pow2(-(static_cast<long>(p) - 20), p))};
}

ZeroPolicy ZeroPolicy::with_threshold(Scalar t) {
  if (t.sign() < 0) throw Error(Errc::InvalidArgument, "zero threshold must be nonnegative");
  return ZeroPolicy{std::move(t)};
}

bool ZeroPolicy::is_zero(const Scalar& c) const { return c.abs() <= threshold; }

bool is_effectively_zero(const Scalar& c, const ZeroPolicy& policy) { return policy.is_zero(c); }

// ---------------------------------------------------------------------------
// Parsing / formatting

namespace {

bool is_digit_str(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

mpq_class parse_rational(std::string_view text) {
  // Trim whitespace.
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error(Errc::ParseError, "empty number literal");

  std::string s(text);
  if (auto slash = s.find('/'); slash != std::string::npos) {
    mpq_class q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
      throw Error(Errc::ParseError, "not a rational literal: '" + s + "'");
    if (q.get_den() == 0) throw Error(Errc::ParseError, "zero denominator: '" + s + "'");
    q.canonicalize();
    return q;
  }

  bool negative = false;
  size_t pos = 0;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    negative = s[pos] == '-';
    ++pos;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false, seen_digit = false;
  long exponent = 0;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      seen_digit = true;
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if ((c == 'e' || c == 'E') && seen_digit) {
      std::string es = s.substr(pos + 1);
      if (!es.empty() && (es[0] == '+' || es[0] == '-')) {
        if (!is_digit_str(es.substr(1))) throw Error(Errc::ParseError, "bad exponent: '" + s + "'");
      } else if (!is_digit_str(es)) {
        throw Error(Errc::ParseError, "bad exponent: '" + s + "'");
      }
      exponent = std::stol(es);
      pos = s.size() - 1;
    } else {
      throw Error(Errc::ParseError, "not a number literal: '" + s + "'");
    }
  }
  if (!seen_digit) throw Error(Errc::ParseError, "not a number literal: '" + s + "'");

  mpz_class mant(digits.empty() ? "0" : digits, 10);
  if (negative) mant = -mant;
  long p10 = exponent - frac_digits;
  mpq_class q(mant);
  mpz_class pow;
  mpz_ui_pow_ui(pow.get_mpz_t(), 10, static_cast<unsigned long>(p10 < 0 ? -p10 : p10));
  if (p10 >= 0)
    q *= mpq_class(pow);
  else
    q /= mpq_class(pow);
  q.canonicalize();
  return q;
}

std::string rational_to_decimal(const mpq_class& q, size_t significant_digits) {
  if (sgn(q) == 0) return "0";
  // Render via MPFR at enough precision for the requested digits.
  mpfr_prec_t p = static_cast<mpfr_prec_t>(significant_digits * 4 + 64);
  return BigFloat::from_mpq(q, p).to_decimal(significant_digits);
}

ComplexRational parse_complex(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw Error(Errc::ParseError, "empty complex literal");

  if (s.back() == 'i' || s.back() == 'I') {
    s.pop_back();
    if (s.empty() || s == "+") return {mpq_class(0), mpq_class(1)};
    if (s == "-") return {mpq_class(0), mpq_class(-1)};
    // Find the split between the real part and the imaginary coefficient:
    // the last '+'/'-' that is not an exponent sign and not leading.
    for (size_t i = s.size(); i-- > 1;) {
      char c = s[i];
      if ((c == '+' || c == '-') && s[i - 1] != 'e' && s[i - 1] != 'E' && s[i - 1] != '/') {
        std::string re = s.substr(0, i);
        std::string im = s.substr(i);
        if (im == "+") im = "1";
        if (im == "-") im = "-1";
        return {parse_rational(re), parse_rational(im)};
      }
    }
    return {mpq_class(0), parse_rational(s)};  // pure imaginary
  }
  return {parse_rational(s), mpq_class(0)};
}

std::string complex_to_string(const ComplexRational& z, size_t significant_digits) {
  std::string re = rational_to_decimal(z.re, significant_digits);
  if (sgn(z.im) == 0) return re;
  std::string im = rational_to_decimal(abs(z.im), significant_digits);
  return re + (sgn(z.im) < 0 ? "-" : "+") + im + "i";
}

ComplexFloat ComplexFloat::from_rational(const ComplexRational& z, mpfr_prec_t prec) {
  return {BigFloat::from_mpq(z.re, prec), BigFloat::from_mpq(z.im, prec)};
}

ComplexFloat ComplexFloat::mul(const ComplexFloat& o) const {
  return {re.mul(o.re).sub(im.mul(o.im)), re.mul(o.im).add(im.mul(o.re))};
}

ComplexFloat ComplexFloat::div(const ComplexFloat& o) const {
  BigFloat d = o.abs2();
  if (d.is_zero()) throw Error(Errc::InvalidArgument, "complex division by zero");
  BigFloat r = re.mul(o.re).add(im.mul(o.im)).div(d);
  BigFloat i = im.mul(o.re).sub(re.mul(o.im)).div(d);
  return {std::move(r), std::move(i)};
}

}  // namespace sird
