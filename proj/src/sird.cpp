#include "sird/sird.hpp"

#include <algorithm>
#include <limits>

namespace sird {

ZeroPolicy DetectionConfig::policy() const {
  if (zero_threshold) return ZeroPolicy::with_threshold(*zero_threshold);
  if (mode == Mode::Exact) return ZeroPolicy::exact();
  return ZeroPolicy::for_precision(precision);
}

ZeroPolicy DetectionConfig::floor_policy() const {
  if (mode == Mode::Exact) return ZeroPolicy::exact();
  return ZeroPolicy::for_precision(precision);
}

void DetectionConfig::validate() const {
  // gamma > 2/sqrt(3)  <=>  3 gamma^2 > 4, compared exactly.
  Scalar three_g_sq = gamma * gamma * Scalar(3);
  if (!(three_g_sq > Scalar(4)))
    throw Error(Errc::InvalidArgument, "gamma must be strictly greater than 2/sqrt(3)");
  if (mode == Mode::Float && precision < BigFloat::kMinPrec)
    throw Error(Errc::InvalidArgument, "float precision must be at least 64 bits");
  if (zero_threshold && zero_threshold->sign() < 0)
    throw Error(Errc::InvalidArgument, "zero threshold must be nonnegative");
  if (mode == Mode::Exact && zero_threshold && zero_threshold->sign() != 0)
    throw Error(Errc::InvalidArgument, "exact mode requires a zero threshold of exactly 0");
}

uint64_t iteration_cap(size_t n, size_t t, const Scalar& gamma, const Scalar& lambda) {
  if (n <= t || t == 0) throw Error(Errc::InvalidArgument, "need 0 < t < n");
  Scalar three_g_sq = gamma * gamma * Scalar(3);
  if (!(three_g_sq > Scalar(4)))
    throw Error(Errc::InvalidArgument, "gamma must be strictly greater than 2/sqrt(3)");
  if (lambda < Scalar(1)) throw Error(Errc::InvalidArgument, "lambda must be at least 1");

  const mpfr_prec_t p = 128;
  auto to_f = [&](const Scalar& s) {
    return s.mode() == Mode::Exact ? BigFloat::from_mpq(s.rational(), p) : s.big_float();
  };
  BigFloat g = to_f(gamma), lam = to_f(lambda);

  // combinations = C(n,2) - C(t,2)
  unsigned long comb = (n * (n - 1) - t * (t - 1)) / 2;

  BigFloat num(p);
  mpfr_pow_ui(num.raw(), g.raw(), static_cast<unsigned long>(n - t), MPFR_RNDN);
  mpfr_mul(num.raw(), num.raw(), lam.raw(), MPFR_RNDN);
  mpfr_log(num.raw(), num.raw(), MPFR_RNDN);
  mpfr_mul_ui(num.raw(), num.raw(), comb, MPFR_RNDN);

  BigFloat g_sq = g.mul(g);
  BigFloat den(p);
  mpfr_mul_ui(den.raw(), g_sq.raw(), 4, MPFR_RNDN);
  BigFloat d2(p);
  mpfr_add_ui(d2.raw(), g_sq.raw(), 4, MPFR_RNDN);
  mpfr_div(den.raw(), den.raw(), d2.raw(), MPFR_RNDN);
  mpfr_log(den.raw(), den.raw(), MPFR_RNDN);
  mpfr_div_ui(den.raw(), den.raw(), 2, MPFR_RNDN);

  BigFloat ratio = num.div(den);
  if (ratio.sign() <= 0) return 1;
  mpz_class c;
  mpfr_get_z(c.get_mpz_t(), ratio.raw(), MPFR_RNDU);
  if (!c.fits_ulong_p() || c > mpz_class(std::numeric_limits<uint64_t>::max() >> 1))
    return std::numeric_limits<uint64_t>::max();
  return c.get_ui();
}

std::optional<Scalar> DetectionState::g_squared() const {
  Scalar max_sq(0);
  for (size_t j = 0; j < width(); ++j) {
    Scalar d = h.diag_squared(j);
    if (d > max_sq) max_sq = d;
  }
  if (max_sq.is_zero()) return std::nullopt;
  return Scalar(1) / max_sq;
}

namespace {

void refresh_bound(DetectionState& s) {
  auto g = s.g_squared();
  if (g && *g > s.best_bound_sq) s.best_bound_sq = *g;
}

}  // namespace

DetectionState initialize(const Mat& x, const DetectionConfig& config) {
  config.validate();
  size_t n = x.rows(), t = x.cols();
  if (t == 0 || n <= t) throw Error(Errc::InvalidArgument, "need an n x t input with 0 < t < n");

  DetectionState s;
  s.x_original = x;
  s.policy = config.policy();
  s.floor_policy = config.floor_policy();
  s.gamma = config.gamma.to_mode(config.mode, config.precision);

  Mat run = x.to_mode(config.mode, config.precision);
  s.perm = admissible_permutation(run, t, s.floor_policy);
  s.x_work = s.perm.apply_rows(run);
  s.h = hyperplane_matrix(s.x_work, s.floor_policy);
  s.b = IntMat::identity(n);
  s.y = s.x_work.transpose();
  {
    const mpfr_prec_t p = 96;
    BigFloat fro_sq(p);
    mpfr_set(fro_sq.raw(),
             s.x_work.frobenius_norm_squared().to_mode(Mode::Float, p).big_float().raw(),
             MPFR_RNDN);
    s.x_fro = Scalar(fro_sq.sqrt());
  }
  reduce_and_update(s.h.basis, t, &s.b, &s.y, s.floor_policy);
  refresh_bound(s);
  return s;
}

namespace {

size_t choose_exchange_index(const DetectionState& s) {
  size_t w = s.width();
  Scalar gamma_sq = s.gamma * s.gamma;
  Scalar weight = gamma_sq;
  size_t best = 0;
  Scalar best_val = weight * s.h.diag_squared(0);
  for (size_t j = 1; j < w; ++j) {
    weight *= gamma_sq;
    Scalar val = weight * s.h.diag_squared(j);
    if (val > best_val) {
      best = j;
      best_val = val;
    }
  }
  return best;
}

}  // namespace

size_t exchange_step(DetectionState& s) {
  size_t r = choose_exchange_index(s);
  s.h.basis.swap_rows(r, r + 1);
  s.b.swap_cols(r, r + 1);
  s.y.swap_cols(r, r + 1);
  return r;
}

void corner_step(DetectionState& s, size_t r) {
  size_t w = s.width();
  if (r + 1 >= w) return;  // r = n-t: nothing to rotate

  Mat& v = s.h.basis;
  size_t n = s.n();
  Scalar vrr = v.at(r, r), vrr1 = v.at(r, r + 1);
  Scalar wr = s.h.norm_sq[r], wr1 = s.h.norm_sq[r + 1];

  Scalar delta_sq = vrr * vrr / wr + vrr1 * vrr1 / wr1;
  if (s.floor_policy.is_zero(delta_sq))
    throw Error(Errc::DegenerateCorner, "corner rotation collapsed: beta and lambda both vanish");

  Scalar cr = vrr / wr, cr1 = vrr1 / wr1;
  std::vector<Scalar> col_r(n), col_r1(n);
  for (size_t i = r; i < n; ++i) {
    col_r[i] = cr * v.at(i, r) + cr1 * v.at(i, r + 1);
    col_r1[i] = vrr * v.at(i, r + 1) - vrr1 * v.at(i, r);
  }
  for (size_t i = r; i < n; ++i) {
    v.at(i, r) = col_r[i];
    v.at(i, r + 1) = col_r1[i];
  }
  v.at(r, r + 1) = Scalar(0).to_mode(vrr.mode(), vrr.precision());  // exact by algebra
  s.h.norm_sq[r] = delta_sq;
  s.h.norm_sq[r + 1] = wr * wr1 * delta_sq;

  if (vrr.mode() == Mode::Exact) {
    canonicalize_column(v, s.h.norm_sq[r], r);
    canonicalize_column(v, s.h.norm_sq[r + 1], r + 1);
  } else {
    for (size_t j : {r, r + 1}) {
      Scalar inv = Scalar(1) / s.h.norm_sq[j].sqrt();
      for (size_t i = j; i < n; ++i) v.at(i, j) = v.at(i, j) * inv;
      s.h.norm_sq[j] = Scalar(1).to_mode(Mode::Float, vrr.precision());
    }
  }
}

IterationInfo iterate_once(DetectionState& s) {
  if (s.pending_diag_zero)
    throw Error(Errc::InvalidArgument, "state is terminal; check_termination first");
  size_t w = s.width();

  size_t r = choose_exchange_index(s);
  Scalar pre_diag_sq = s.h.diag_squared(r);
  exchange_step(s);
  corner_step(s, r);

  IterationInfo info{r, std::nullopt};
  if (r + 1 < w) info.contraction_sq = s.h.diag_squared(r) / pre_diag_sq;

  if (s.floor_policy.is_zero(s.h.basis.at(w - 1, w - 1))) {
    // Trailing diagonal vanished: the relation sits in column n-t of B.
    // Reduction would divide by this entry, so it is skipped.
    s.pending_diag_zero = true;
  } else {
    for (size_t j = 0; j + 1 < w; ++j)
      if (s.floor_policy.is_zero(s.h.basis.at(j, j)))
        throw Error(Errc::PrecisionExhausted,
                    "diagonal entry vanished before the trailing one; raise the working precision");
    reduce_and_update(s.h.basis, s.t(), &s.b, &s.y, s.floor_policy);
  }

  refresh_bound(s);
  ++s.iteration;
  return info;
}

void sign_normalize(std::vector<mpz_class>& m) {
  for (const auto& e : m) {
    if (e == 0) continue;
    if (e < 0)
      for (auto& v : m) v = -v;
    return;
  }
}

bool verify_relation(const Mat& x0, const std::vector<mpz_class>& m, const ZeroPolicy& policy) {
  if (m.size() != x0.rows()) throw Error(Errc::InvalidArgument, "relation length mismatch");
  bool nonzero = false;
  for (const auto& e : m) nonzero |= (e != 0);
  if (!nonzero) throw Error(Errc::InvalidArgument, "relation must be nonzero");

  std::vector<Scalar> residual(x0.cols(), Scalar(0));
  for (size_t i = 0; i < x0.cols(); ++i)
    for (size_t k = 0; k < x0.rows(); ++k) {
      if (m[k] == 0) continue;
      residual[i] += x0.at(k, i) * Scalar(m[k]);
    }

  if (policy.threshold.is_zero()) {
    for (const auto& r : residual)
      if (!r.is_zero()) return false;
    return true;
  }

  const mpfr_prec_t p = 192;
  BigFloat fro = BigFloat::from_mpq(
      x0.frobenius_norm_squared().to_mode(Mode::Exact, p).rational(), p);
  mpz_class m_sq = 0;
  for (const auto& e : m) m_sq += e * e;
  BigFloat scale = fro.sqrt().mul(BigFloat::from_mpz(m_sq, p).sqrt());
  Scalar tol = policy.threshold * Scalar(scale);
  for (const auto& r : residual)
    if (r.abs() > tol) return false;
  return true;
}

namespace {

std::optional<TerminationCandidate> candidate_from_column(const DetectionState& s, size_t col,
                                                          RelationSource source) {
  std::vector<mpz_class> m = s.b.column(col);
  bool nonzero = false;
  for (const auto& e : m) nonzero |= (e != 0);
  if (!nonzero) return std::nullopt;  // cannot happen with unimodular B
  std::vector<mpz_class> mapped = s.perm.map_back(m);
  sign_normalize(mapped);
  if (!verify_relation(s.x_original, mapped, s.policy)) return std::nullopt;
  return TerminationCandidate{std::move(mapped), source};
}

/// Per-column zero screen for Y with the same scaling as verify_relation.
bool y_column_effectively_zero(const DetectionState& s, size_t j) {
  if (s.policy.threshold.is_zero()) {
    for (size_t i = 0; i < s.t(); ++i)
      if (!s.y.at(i, j).is_zero()) return false;
    return true;
  }
  const mpfr_prec_t p = 96;
  mpz_class col_sq = 0;
  for (size_t i = 0; i < s.n(); ++i) col_sq += s.b.at(i, j) * s.b.at(i, j);
  Scalar tol = s.policy.threshold * s.x_fro * Scalar(BigFloat::from_mpz(col_sq, p).sqrt());
  for (size_t i = 0; i < s.t(); ++i)
    if (s.y.at(i, j).abs() > tol) return false;
  return true;
}

}  // namespace

std::optional<TerminationCandidate> check_termination(const DetectionState& s) {
  for (size_t j = 0; j < s.n(); ++j) {
    if (!y_column_effectively_zero(s, j)) continue;
    if (auto cand = candidate_from_column(s, j, RelationSource::ZeroColumn)) return cand;
  }
  size_t w = s.width();
  if (s.pending_diag_zero || s.floor_policy.is_zero(s.h.basis.at(w - 1, w - 1))) {
    if (auto cand = candidate_from_column(s, w - 1, RelationSource::DiagonalZero)) return cand;
    if (s.pending_diag_zero)
      throw Error(Errc::PrecisionExhausted,
                  "trailing diagonal vanished but the candidate column fails verification; "
                  "raise the working precision");
  }
  return std::nullopt;
}

std::string DetectionOutcome::bound_decimal(size_t significant_digits) const {
  const mpfr_prec_t p = 192;
  BigFloat b = bound_sq.mode() == Mode::Exact ? BigFloat::from_mpq(bound_sq.rational(), p)
                                              : bound_sq.big_float();
  return b.sqrt().to_decimal(significant_digits);
}

DetectionOutcome detect(const Mat& x, const DetectionConfig& config) {
  DetectionState s = initialize(x, config);

  std::optional<uint64_t> cap = config.max_iterations;
  if (!cap && config.lambda_guess)
    cap = iteration_cap(s.n(), s.t(), config.gamma, *config.lambda_guess);
  std::optional<Scalar> bound_sq;
  if (config.norm_bound) bound_sq = *config.norm_bound * *config.norm_bound;

  while (true) {
    if (auto cand = check_termination(s))
      return DetectionOutcome{OutcomeKind::Relation, std::move(cand->relation), cand->source,
                              s.iteration, s.best_bound_sq};
    if (bound_sq && s.best_bound_sq > *bound_sq)
      return DetectionOutcome{OutcomeKind::BoundExceeded, {}, RelationSource::ZeroColumn,
                              s.iteration, s.best_bound_sq};
    if (cap && s.iteration >= *cap)
      return DetectionOutcome{OutcomeKind::IterationCapReached, {}, RelationSource::ZeroColumn,
                              s.iteration, s.best_bound_sq};
    iterate_once(s);
  }
}

DetectionOutcome detect_complex(const std::vector<ComplexRational>& z,
                                const DetectionConfig& config) {
  if (z.empty()) throw Error(Errc::InvalidArgument, "empty complex vector");
  ZeroPolicy policy = config.policy();
  bool re_zero = true, im_zero = true;
  for (const auto& e : z) {
    re_zero &= policy.is_zero(Scalar(e.re));
    im_zero &= policy.is_zero(Scalar(e.im));
  }
  if (re_zero && im_zero) throw Error(Errc::InvalidArgument, "complex vector is effectively zero");

  std::vector<std::vector<Scalar>> cols;
  if (!re_zero) {
    std::vector<Scalar> c;
    for (const auto& e : z) c.emplace_back(e.re);
    cols.push_back(std::move(c));
  }
  if (!im_zero) {
    std::vector<Scalar> c;
    for (const auto& e : z) c.emplace_back(e.im);
    cols.push_back(std::move(c));
  }
  return detect(Mat::from_columns(cols), config);
}

}  // namespace sird
