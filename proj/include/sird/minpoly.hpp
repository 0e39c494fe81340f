#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sird/polynomial.hpp"
#include "sird/sird.hpp"

namespace sird {

/// A nonnegative value of the form sqrt(rational), stored by its square
/// so every comparison against rationals stays exact.
struct RootRational {
  mpq_class square;  // >= 0

  static RootRational of_rational(const mpq_class& v) { return RootRational{v * v}; }

  bool is_exact_rational() const;
  mpq_class exact_value() const;  // throws unless the square is a perfect square

  /// value <=> q for nonnegative q, decided on squares.
  int cmp(const mpq_class& q) const;
  int cmp(const RootRational& o) const { return ::cmp(square, o.square); }

  /// Largest p-bit dyadic rational not above the value.
  mpq_class lower_rational(mpfr_prec_t p = 128) const;
  std::string to_decimal(size_t significant_digits) const;
};

/// Accuracy sufficient for certified reconstruction of a degree<=n,
/// height<=H minimal polynomial: 2^(-2n^2+4n) (n+1)^(-5n/2) H^(-2n).
RootRational epsilon_bound(unsigned n, const mpz_class& height_bound);

/// Candidate-height cutoff 2^(n-2) sqrt(n+1) H (n >= 2).
RootRational height_threshold(unsigned n, const mpz_class& height_bound);

/// |f(a) - f(a~)| <= eps * n * height(f) whenever all powers of a~ are
/// within eps of the powers of a.
Scalar error_propagation_bound(const IntPolynomial& f, const Scalar& eps, unsigned n);

/// Lower bound on |g(alpha)| when g(alpha) != 0, for deg g <= m,
/// height(g), height(alpha) <= H and alpha of exact degree n0:
/// (m+1)^-(n0-1) (n0+1)^(-m/2) H^-(m+n0-1).
RootRational nonvanishing_lower_bound(unsigned m, unsigned n0, const mpz_class& height_bound);

/// The uniform instantiation M = (n+1)^(-(3n/2-1)) H^(-(2n-1)).
RootRational uniform_nonvanishing_bound(unsigned n, const mpz_class& height_bound);

/// Default working precision: ceil(-log2 epsilon_bound(n, H)) + 64.
mpfr_prec_t default_precision(unsigned n, const mpz_class& height_bound);

struct MinPolyQuery {
  ComplexRational approx;
  unsigned degree_bound = 1;   // n
  mpz_class height_bound = 1;  // H
  /// Accuracy promise: max over i <= n of |alpha^i - approx^i| < epsilon.
  /// Defaults to (a rational just below) epsilon_bound(n, H).
  std::optional<mpq_class> epsilon;
};

struct MinPolyOptions {
  std::optional<mpfr_prec_t> precision;
  std::optional<uint64_t> max_iterations_per_degree;
};

struct RejectedCandidate {
  unsigned degree_tried;
  IntPolynomial poly;
};

struct CertifiedResult {
  IntPolynomial poly;
  bool certified = false;
  uint64_t iterations_total = 0;
  mpfr_prec_t precision_bits = 0;
  std::vector<RejectedCandidate> rejected;  // height-test failures, in order
};

/// NoPolynomialFound with the per-degree candidates that failed the
/// height test, for diagnostics.
class NoPolynomialError : public Error {
 public:
  NoPolynomialError(const std::string& what, std::vector<RejectedCandidate> rejected)
      : Error(Errc::NoPolynomialFound, what), rejected_(std::move(rejected)) {}
  const std::vector<RejectedCandidate>& rejected() const { return rejected_; }

 private:
  std::vector<RejectedCandidate> rejected_;
};

/// Reconstructs the minimal polynomial of the algebraic number behind
/// the approximation. Certified (epsilon within the proven bound)
/// queries either return the exact minimal polynomial or throw
/// NoPolynomialError; uncertified queries fall back to the best
/// rejected candidate rather than failing.
CertifiedResult find_minimal_polynomial(const MinPolyQuery& query, const MinPolyOptions& options = {});

struct FactorOptions {
  std::optional<mpfr_prec_t> precision;
};

/// Full factorization of a nonzero primitive integer polynomial into
/// irreducible factors by repeated root refinement and minimal
/// polynomial reconstruction. The product of the returned factors
/// equals the input up to sign.
std::vector<IntPolynomial> factor_via_minpoly(const IntPolynomial& f, const FactorOptions& options = {});

}  // namespace sird
