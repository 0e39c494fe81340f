#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "sird/minpoly.hpp"

namespace sird {

namespace {

/// Double-precision Durand-Kerner root estimates for a squarefree
/// polynomial; good enough as Newton seeds at the test scales.
std::vector<std::complex<double>> seed_roots(const IntPolynomial& s) {
  size_t d = static_cast<size_t>(s.degree());
  std::vector<double> c(d + 1);
  double lead = s.leading().get_d();
  for (size_t i = 0; i <= d; ++i) c[i] = s.coeff(i).get_d() / lead;

  double radius = 1.0;
  for (size_t i = 0; i < d; ++i) radius = std::max(radius, 2.0 * std::pow(std::abs(c[i]), 1.0 / (d - i)));

  std::vector<std::complex<double>> z(d);
  std::complex<double> seed(0.4, 0.9);
  std::complex<double> acc(1.0, 0.0);
  for (size_t k = 0; k < d; ++k) {
    acc *= seed;
    z[k] = radius * acc / std::abs(acc) * (0.5 + 0.5 * (k + 1.0) / d);
  }

  auto eval = [&](std::complex<double> x) {
    std::complex<double> r(0.0, 0.0);
    for (size_t i = d + 1; i-- > 0;) r = r * x + c[i];
    return r;
  };

  for (int iter = 0; iter < 500; ++iter) {
    double worst = 0.0;
    for (size_t k = 0; k < d; ++k) {
      std::complex<double> denom(1.0, 0.0);
      for (size_t j = 0; j < d; ++j)
        if (j != k) denom *= (z[k] - z[j]);
      if (std::abs(denom) == 0.0) {
        denom = std::complex<double>(1e-12, 1e-12);
      }
      std::complex<double> delta = eval(z[k]) / denom;
      z[k] -= delta;
      worst = std::max(worst, std::abs(delta));
    }
    if (worst < 1e-13 * radius) break;
  }
  return z;
}

/// Newton polish at working precision from a double seed; the seed is
/// assumed to lie in the basin of a simple root of s.
ComplexFloat polish_root(const IntPolynomial& s, std::complex<double> seed, mpfr_prec_t prec,
                         const BigFloat& tol) {
  IntPolynomial ds = s.derivative();
  ComplexFloat z(prec);
  mpfr_set_d(z.re.raw(), seed.real(), MPFR_RNDN);
  mpfr_set_d(z.im.raw(), seed.imag(), MPFR_RNDN);

  BigFloat tol_sq = tol.mul(tol);
  for (int iter = 0; iter < 400; ++iter) {
    ComplexFloat fz = s.eval(z);
    ComplexFloat dz = ds.eval(z);
    if (dz.abs2().is_zero())
      throw Error(Errc::FactorizationFailed, "derivative vanished during root refinement");
    ComplexFloat step = fz.div(dz);
    z = z.sub(step);
    if (step.abs2().cmp(tol_sq) <= 0) {
      // One extra corrective step, then done.
      fz = s.eval(z);
      dz = ds.eval(z);
      if (!dz.abs2().is_zero()) z = z.sub(fz.div(dz));
      return z;
    }
  }
  throw Error(Errc::FactorizationFailed, "root refinement did not converge");
}

mpz_class ceil_sqrt(const mpz_class& n) {
  mpz_class root, rem;
  mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t());
  if (rem != 0) root += 1;
  return root;
}

}  // namespace

std::vector<IntPolynomial> factor_via_minpoly(const IntPolynomial& f, const FactorOptions& options) {
  if (f.is_zero()) throw Error(Errc::InvalidArgument, "cannot factor the zero polynomial");
  if (f.content() != 1)
    throw Error(Errc::InvalidArgument, "input must be primitive (content 1)");

  std::vector<IntPolynomial> factors;
  if (f.degree() == 0) return factors;

  unsigned nb = static_cast<unsigned>(f.degree());
  // Factor-height bound: 2^(deg f) * ||f||_2, rounded up.
  mpz_class pow2d;
  mpz_ui_pow_ui(pow2d.get_mpz_t(), 2, nb);
  mpz_class height_bound = pow2d * ceil_sqrt(f.two_norm_squared());
  mpq_class eps = epsilon_bound(nb, height_bound).lower_rational();

  // Root magnitude bound (Cauchy) and the per-root accuracy that keeps
  // every power within eps of the true power.
  mpz_class rho_z = 1 + f.height() / abs(f.leading()) + 1;
  mpq_class rho(rho_z);
  mpq_class denom = mpq_class(4 * static_cast<long>(nb));
  for (unsigned k = 1; k < nb; ++k) denom *= rho;
  mpq_class delta = eps / denom;

  long delta_bits = 0;
  {
    mpq_class inv = 1 / delta;
    delta_bits = static_cast<long>(mpz_sizeinbase(inv.get_num().get_mpz_t(), 2)) -
                 static_cast<long>(mpz_sizeinbase(inv.get_den().get_mpz_t(), 2)) + 2;
  }
  long rho_bits = static_cast<long>(mpz_sizeinbase(rho_z.get_mpz_t(), 2));
  mpfr_prec_t work_prec = static_cast<mpfr_prec_t>(std::max<long>(delta_bits + 64, 64));
  mpfr_prec_t detect_prec =
      std::max<mpfr_prec_t>(options.precision.value_or(0),
                            default_precision(nb, height_bound) +
                                static_cast<mpfr_prec_t>(nb * rho_bits + 32));

  IntPolynomial g = f;
  if (g.leading() < 0) g = g.negate();

  while (g.degree() >= 1) {
    if (g.degree() == 1) {
      factors.push_back(g.primitive_part());
      break;
    }

    IntPolynomial s = squarefree_part(g);
    auto seeds = seed_roots(s);
    // Deterministic choice: smallest |Im|, then smallest Re.
    std::sort(seeds.begin(), seeds.end(), [](const auto& a, const auto& b) {
      double ia = std::abs(a.imag()), ib = std::abs(b.imag());
      if (ia != ib) return ia < ib;
      if (a.real() != b.real()) return a.real() < b.real();
      return a.imag() < b.imag();
    });

    BigFloat tol(work_prec);
    {
      BigFloat dnum = BigFloat::from_mpq(delta, work_prec);
      mpfr_div_ui(tol.raw(), dnum.raw(), 4, MPFR_RNDN);
    }

    bool advanced = false;
    std::string last_error = "no root candidate produced a dividing factor";
    for (const auto& seed : seeds) {
      IntPolynomial p;
      try {
        ComplexFloat root = polish_root(s, seed, work_prec, tol);
        ComplexRational approx{root.re.to_rational_exact(), root.im.to_rational_exact()};
        MinPolyQuery q{approx, nb, height_bound, eps};
        MinPolyOptions mopt;
        mopt.precision = detect_prec;
        p = find_minimal_polynomial(q, mopt).poly;
      } catch (const Error& e) {
        last_error = e.what();
        continue;
      }
      if (p.degree() < 1) continue;
      bool divided = false;
      while (true) {
        auto quotient = g.divide_exact(p);
        if (!quotient) break;
        factors.push_back(p);
        g = quotient->leading() < 0 ? quotient->negate() : *quotient;
        divided = true;
        if (g.degree() < 1) break;
      }
      if (divided) {
        advanced = true;
        break;
      }
      last_error = "reconstructed factor " + p.to_string() + " does not divide the cofactor";
    }
    if (!advanced)
      throw Error(Errc::FactorizationFailed,
                  "factorization stalled (insufficient precision?): " + last_error);
  }
  return factors;
}

}  // namespace sird
