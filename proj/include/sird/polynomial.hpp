#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sird/numeric.hpp"

namespace sird {

/// Integer-coefficient polynomial, coefficients ascending by degree.
/// The zero polynomial has an empty coefficient list.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<mpz_class> coeffs);

  static IntPolynomial from_longs(std::initializer_list<long> ascending);

  bool is_zero() const { return c_.empty(); }
  /// Degree of the zero polynomial is -1 by convention.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<mpz_class>& coeffs() const { return c_; }
  const mpz_class& coeff(size_t i) const;  // 0 past the end
  const mpz_class& leading() const;

  mpz_class height() const;   // max |c_i|
  mpz_class content() const;  // gcd of coefficients (0 for the zero poly)
  mpz_class one_norm() const;
  mpz_class two_norm_squared() const;

  /// Content removed and leading coefficient made positive.
  IntPolynomial primitive_part() const;
  IntPolynomial derivative() const;
  IntPolynomial negate() const;

  IntPolynomial mul(const IntPolynomial& o) const;
  IntPolynomial mul_scalar(const mpz_class& k) const;
  IntPolynomial add(const IntPolynomial& o) const;
  IntPolynomial sub(const IntPolynomial& o) const;

  /// Quotient when the division is exact over the integers, else nullopt.
  std::optional<IntPolynomial> divide_exact(const IntPolynomial& d) const;

  ComplexFloat eval(const ComplexFloat& z) const;
  ComplexRational eval(const ComplexRational& z) const;
  mpq_class eval(const mpq_class& x) const;

  bool operator==(const IntPolynomial& o) const { return c_ == o.c_; }

  std::string to_string() const;  // human form, e.g. "x^2 - 4x + 7"

 private:
  void trim();
  std::vector<mpz_class> c_;
};

/// Primitive-Euclid gcd over Z[x] (both arguments nonzero); the result
/// is primitive with positive leading coefficient.
IntPolynomial polynomial_gcd(const IntPolynomial& a, const IntPolynomial& b);

/// f / gcd(f, f'): same roots, all simple.
IntPolynomial squarefree_part(const IntPolynomial& f);

}  // namespace sird
