#include "sird/minpoly.hpp"

#include <algorithm>

namespace sird {

// ---------------------------------------------------------------------------
// RootRational

bool RootRational::is_exact_rational() const { return exact_sqrt(square).has_value(); }

mpq_class RootRational::exact_value() const {
  auto r = exact_sqrt(square);
  if (!r) throw Error(Errc::InvalidArgument, "value is irrational; compare through the square");
  return *r;
}

int RootRational::cmp(const mpq_class& q) const {
  if (sgn(q) < 0) return 1;  // value is nonnegative
  return ::cmp(square, mpq_class(q * q));
}

mpq_class RootRational::lower_rational(mpfr_prec_t p) const {
  if (auto r = exact_sqrt(square)) return *r;
  BigFloat sq = BigFloat::from_mpq(square, p + 8);
  BigFloat root(p);
  mpfr_sqrt(root.raw(), sq.raw(), MPFR_RNDD);
  mpq_class lo = root.to_rational_exact();
  // Guard against the downward-rounded square-of-rounded value still
  // exceeding the target (cannot happen with RNDD, but cheap to check).
  while (lo * lo > square) lo -= lo / 1000000;
  return lo;
}

std::string RootRational::to_decimal(size_t significant_digits) const {
  const mpfr_prec_t p = static_cast<mpfr_prec_t>(significant_digits * 4 + 64);
  return BigFloat::from_mpq(square, p).sqrt().to_decimal(significant_digits);
}

// ---------------------------------------------------------------------------
// Bounds

namespace {

mpz_class mpz_pow(const mpz_class& base, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

mpq_class pow2_q(long e) {
  mpz_class p = mpz_pow(2, static_cast<unsigned long>(e < 0 ? -e : e));
  return e >= 0 ? mpq_class(p) : mpq_class(1, p);
}

void check_nh(unsigned n, const mpz_class& h) {
  if (n < 1) throw Error(Errc::InvalidArgument, "degree bound must be at least 1");
  if (h < 1) throw Error(Errc::InvalidArgument, "height bound must be at least 1");
}

}  // namespace

RootRational epsilon_bound(unsigned n, const mpz_class& h) {
  check_nh(n, h);
  // square = 2^(2(-2n^2+4n)) * (n+1)^(-5n) * H^(-4n)
  long e2 = 2 * (-2 * static_cast<long>(n) * n + 4 * static_cast<long>(n));
  mpq_class sq = pow2_q(e2);
  sq /= mpq_class(mpz_pow(mpz_class(n + 1), 5ul * n));
  sq /= mpq_class(mpz_pow(h, 4ul * n));
  sq.canonicalize();
  return RootRational{sq};
}

RootRational height_threshold(unsigned n, const mpz_class& h) {
  check_nh(n, h);
  if (n < 2) throw Error(Errc::InvalidArgument, "height threshold needs n >= 2");
  // square = 4^(n-2) * (n+1) * H^2
  mpq_class sq = pow2_q(2 * (static_cast<long>(n) - 2));
  sq *= mpq_class(n + 1);
  sq *= mpq_class(h * h);
  sq.canonicalize();
  return RootRational{sq};
}

Scalar error_propagation_bound(const IntPolynomial& f, const Scalar& eps, unsigned n) {
  if (f.degree() > static_cast<long>(n))
    throw Error(Errc::InvalidArgument, "polynomial degree exceeds the stated bound");
  return eps * Scalar(static_cast<long>(n)) * Scalar(f.height());
}

RootRational nonvanishing_lower_bound(unsigned m, unsigned n0, const mpz_class& h) {
  check_nh(m, h);
  check_nh(n0, h);
  // square = (m+1)^(-2(n0-1)) * (n0+1)^(-m) * H^(-2(m+n0-1))
  mpq_class sq(1);
  sq /= mpq_class(mpz_pow(mpz_class(m + 1), 2ul * (n0 - 1)));
  sq /= mpq_class(mpz_pow(mpz_class(n0 + 1), m));
  sq /= mpq_class(mpz_pow(h, 2ul * (m + n0 - 1)));
  sq.canonicalize();
  return RootRational{sq};
}

RootRational uniform_nonvanishing_bound(unsigned n, const mpz_class& h) {
  check_nh(n, h);
  // square = (n+1)^(-(3n-2)) * H^(-(4n-2))
  mpq_class sq(1);
  sq /= mpq_class(mpz_pow(mpz_class(n + 1), 3ul * n - 2));
  sq /= mpq_class(mpz_pow(h, 4ul * n - 2));
  sq.canonicalize();
  return RootRational{sq};
}

mpfr_prec_t default_precision(unsigned n, const mpz_class& h) {
  RootRational eps = epsilon_bound(n, h);
  // Smallest k with 2^-k <= eps, i.e. 4^k >= 1/eps^2.
  mpq_class inv_sq = 1 / eps.square;
  long k = 0;
  if (inv_sq > 1) {
    // Bit-length estimate, then exact adjustment.
    long bits = static_cast<long>(mpz_sizeinbase(inv_sq.get_num().get_mpz_t(), 2)) -
                static_cast<long>(mpz_sizeinbase(inv_sq.get_den().get_mpz_t(), 2));
    k = std::max(0l, bits / 2 - 2);
    while (pow2_q(2 * k) < inv_sq) ++k;
    while (k > 0 && pow2_q(2 * (k - 1)) >= inv_sq) --k;
  }
  return static_cast<mpfr_prec_t>(std::max<long>(k + 64, BigFloat::kMinPrec));
}

// ---------------------------------------------------------------------------
// MPF

namespace {

/// v1 = (Re a^0 .. Re a^i), v2 = (Im a^0 .. Im a^i), exact.
void power_columns(const ComplexRational& a, unsigned i, std::vector<Scalar>& v1,
                   std::vector<Scalar>& v2) {
  v1.clear();
  v2.clear();
  ComplexRational p{mpq_class(1), mpq_class(0)};
  for (unsigned k = 0; k <= i; ++k) {
    v1.emplace_back(p.re);
    v2.emplace_back(p.im);
    p = p.mul(a);
  }
}

}  // namespace

CertifiedResult find_minimal_polynomial(const MinPolyQuery& query, const MinPolyOptions& options) {
  unsigned n = query.degree_bound;
  const mpz_class& hb = query.height_bound;
  check_nh(n, hb);

  RootRational eb = epsilon_bound(n, hb);
  mpq_class eps = query.epsilon ? *query.epsilon : eb.lower_rational();
  if (sgn(eps) <= 0) throw Error(Errc::InvalidArgument, "epsilon must be positive");
  bool certified_query = eb.cmp(eps) >= 0;  // eps <= epsilon_bound(n, H)

  mpfr_prec_t prec = options.precision ? *options.precision : default_precision(n, hb);
  prec = std::max<mpfr_prec_t>(prec, default_precision(n, hb));

  // Effective acceptance cutoff for candidate heights: the proven
  // threshold for n >= 2; plain H for n = 1 (the formula would dip
  // below H there and reject honest degree-1 answers).
  mpq_class accept_sq = n >= 2 ? height_threshold(n, hb).square : mpq_class(hb * hb);
  accept_sq = std::max(accept_sq, mpq_class(hb * hb));

  // alpha is treated as real when its imaginary part is within the
  // declared accuracy of zero.
  bool treat_real = abs(query.approx.im) <= eps;
  unsigned t = treat_real ? 1 : 2;

  CertifiedResult result;
  result.precision_bits = prec;

  std::vector<Scalar> v1, v2;
  for (unsigned i = std::max(1u, t); i <= n; ++i) {
    power_columns(query.approx, i, v1, v2);
    std::vector<std::vector<Scalar>> cols;
    cols.push_back(v1);
    if (!treat_real) cols.push_back(v2);
    Mat x = Mat::from_columns(cols);

    DetectionConfig cfg;
    cfg.gamma = Scalar(2);
    cfg.mode = Mode::Float;
    cfg.precision = prec;
    // Compatibility screen: a candidate m counts as a relation when its
    // residual is within eps * ||m||_2, i.e. threshold = eps / ||X||_F.
    {
      BigFloat fro_sq(prec);
      mpfr_set(fro_sq.raw(),
               x.frobenius_norm_squared().to_mode(Mode::Float, prec).big_float().raw(), MPFR_RNDN);
      Scalar thr = Scalar(mpq_class(eps)) / Scalar(fro_sq.sqrt());
      Scalar floor_thr{BigFloat::pow2(-(static_cast<long>(prec) - 20), prec)};
      if (thr < floor_thr) thr = floor_thr;
      cfg.zero_threshold = thr;
    }
    // A relation (possibly a large exact relation of the rational
    // approximation, rejected below on height) always surfaces within
    // the worst-case count for norms resolvable at this precision; the
    // cap is a safety net, not an early exit.
    uint64_t cap = options.max_iterations_per_degree
                       ? *options.max_iterations_per_degree
                       : 64 + 4 * iteration_cap(i + 1, t, cfg.gamma,
                                                Scalar(BigFloat::pow2(
                                                    static_cast<long>(prec), 128)));
    cfg.max_iterations = cap;

    DetectionOutcome outcome = detect(x, cfg);
    result.iterations_total += outcome.iterations;
    if (outcome.kind != OutcomeKind::Relation) continue;

    IntPolynomial poly = IntPolynomial(outcome.relation).primitive_part();
    mpz_class h = poly.height();
    if (mpq_class(h * h) <= accept_sq) {
      result.poly = poly;
      result.certified = certified_query;
      return result;
    }
    result.rejected.push_back(RejectedCandidate{i, poly});
  }

  if (!certified_query && !result.rejected.empty()) {
    // Best effort: smallest height among the rejected candidates.
    const RejectedCandidate* best = &result.rejected.front();
    for (const auto& r : result.rejected)
      if (r.poly.height() < best->poly.height()) best = &r;
    result.poly = best->poly;
    result.certified = false;
    return result;
  }
  throw NoPolynomialError("no relation passed the height test up to the degree bound",
                          std::move(result.rejected));
}

}  // namespace sird
