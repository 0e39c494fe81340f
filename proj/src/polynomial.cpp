#include "sird/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace sird {

namespace {
const mpz_class kZero = 0;
}

IntPolynomial::IntPolynomial(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }

IntPolynomial IntPolynomial::from_longs(std::initializer_list<long> ascending) {
  std::vector<mpz_class> c;
  for (long v : ascending) c.emplace_back(v);
  return IntPolynomial(std::move(c));
}

void IntPolynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

const mpz_class& IntPolynomial::coeff(size_t i) const { return i < c_.size() ? c_[i] : kZero; }

const mpz_class& IntPolynomial::leading() const {
  if (c_.empty()) throw Error(Errc::InvalidArgument, "zero polynomial has no leading coefficient");
  return c_.back();
}

mpz_class IntPolynomial::height() const {
  mpz_class h = 0;
  for (const auto& c : c_) {
    mpz_class a = abs(c);
    if (a > h) h = a;
  }
  return h;
}

mpz_class IntPolynomial::content() const {
  mpz_class g = 0;
  for (const auto& c : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

mpz_class IntPolynomial::one_norm() const {
  mpz_class s = 0;
  for (const auto& c : c_) s += abs(c);
  return s;
}

mpz_class IntPolynomial::two_norm_squared() const {
  mpz_class s = 0;
  for (const auto& c : c_) s += c * c;
  return s;
}

IntPolynomial IntPolynomial::primitive_part() const {
  if (is_zero()) throw Error(Errc::InvalidArgument, "primitive part of the zero polynomial");
  mpz_class g = content();
  if (c_.back() < 0) g = -g;
  std::vector<mpz_class> r(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) mpz_divexact(r[i].get_mpz_t(), c_[i].get_mpz_t(), g.get_mpz_t());
  return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::derivative() const {
  if (c_.size() <= 1) return IntPolynomial();
  std::vector<mpz_class> r(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * static_cast<long>(i);
  return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::negate() const {
  std::vector<mpz_class> r(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r[i] = -c_[i];
  return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::mul(const IntPolynomial& o) const {
  if (is_zero() || o.is_zero()) return IntPolynomial();
  std::vector<mpz_class> r(c_.size() + o.c_.size() - 1);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  }
  return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::mul_scalar(const mpz_class& k) const {
  std::vector<mpz_class> r(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r[i] = c_[i] * k;
  return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::add(const IntPolynomial& o) const {
  std::vector<mpz_class> r(std::max(c_.size(), o.c_.size()));
  for (size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
  return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::sub(const IntPolynomial& o) const {
  std::vector<mpz_class> r(std::max(c_.size(), o.c_.size()));
  for (size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) - o.coeff(i);
  return IntPolynomial(std::move(r));
}

std::optional<IntPolynomial> IntPolynomial::divide_exact(const IntPolynomial& d) const {
  if (d.is_zero()) throw Error(Errc::InvalidArgument, "division by the zero polynomial");
  if (is_zero()) return IntPolynomial();
  if (degree() < d.degree()) return std::nullopt;

  // Long division over the rationals; accept only an integral quotient
  // with zero remainder.
  std::vector<mpq_class> rem(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) rem[i] = c_[i];
  size_t qlen = c_.size() - d.c_.size() + 1;
  std::vector<mpq_class> q(qlen);
  mpq_class lead(d.c_.back());
  for (size_t k = qlen; k-- > 0;) {
    mpq_class f = rem[k + d.c_.size() - 1] / lead;
    q[k] = f;
    if (sgn(f) == 0) continue;
    for (size_t j = 0; j < d.c_.size(); ++j) rem[k + j] -= f * mpq_class(d.c_[j]);
  }
  for (const auto& r : rem)
    if (sgn(r) != 0) return std::nullopt;
  std::vector<mpz_class> qi(qlen);
  for (size_t i = 0; i < qlen; ++i) {
    if (q[i].get_den() != 1) return std::nullopt;
    qi[i] = q[i].get_num();
  }
  return IntPolynomial(std::move(qi));
}

ComplexFloat IntPolynomial::eval(const ComplexFloat& z) const {
  mpfr_prec_t p = std::max(z.re.precision(), z.im.precision());
  ComplexFloat acc(p);
  for (size_t i = c_.size(); i-- > 0;) {
    acc = acc.mul(z);
    acc.re = acc.re.add(BigFloat::from_mpz(c_[i], p));
  }
  return acc;
}

ComplexRational IntPolynomial::eval(const ComplexRational& z) const {
  ComplexRational acc{mpq_class(0), mpq_class(0)};
  for (size_t i = c_.size(); i-- > 0;) {
    acc = acc.mul(z);
    acc.re += mpq_class(c_[i]);
  }
  return acc;
}

mpq_class IntPolynomial::eval(const mpq_class& x) const {
  mpq_class acc = 0;
  for (size_t i = c_.size(); i-- > 0;) acc = acc * x + mpq_class(c_[i]);
  return acc;
}

std::string IntPolynomial::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    mpz_class a = abs(c_[i]);
    if (first) {
      if (c_[i] < 0) out << "-";
      first = false;
    } else {
      out << (c_[i] < 0 ? " - " : " + ");
    }
    if (i == 0 || a != 1) out << a.get_str();
    if (i >= 1) out << "x";
    if (i >= 2) out << "^" << i;
  }
  return out.str();
}

IntPolynomial polynomial_gcd(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero())
    throw Error(Errc::InvalidArgument, "gcd arguments must be nonzero");
  IntPolynomial f = a.primitive_part(), g = b.primitive_part();
  if (f.degree() < g.degree()) std::swap(f, g);
  while (!g.is_zero()) {
    // Pseudo-remainder with incremental scaling: each step replaces r by
    // lc(g) r - lc(r) x^d g, which stays integral and drops the degree.
    IntPolynomial r = f;
    while (!r.is_zero() && r.degree() >= g.degree()) {
      std::vector<mpz_class> shift(static_cast<size_t>(r.degree() - g.degree()), 0);
      shift.push_back(r.leading());
      r = r.mul_scalar(g.leading()).sub(IntPolynomial(std::move(shift)).mul(g));
    }
    f = g;
    g = r.is_zero() ? IntPolynomial() : r.primitive_part();
  }
  return f.primitive_part();
}

IntPolynomial squarefree_part(const IntPolynomial& f) {
  if (f.is_zero()) throw Error(Errc::InvalidArgument, "squarefree part of the zero polynomial");
  IntPolynomial fp = f.primitive_part();
  if (fp.degree() <= 1) return fp;
  IntPolynomial g = polynomial_gcd(fp, fp.derivative());
  if (g.degree() == 0) return fp;
  auto q = fp.divide_exact(g);
  if (!q) throw Error(Errc::FactorizationFailed, "squarefree division failed");
  return q->primitive_part();
}

}  // namespace sird
