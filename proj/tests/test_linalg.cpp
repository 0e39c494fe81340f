#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sird/linalg.hpp>
#include <sird/planted.hpp>

using namespace sird;

namespace {

Mat exact_cols(const std::vector<std::vector<long>>& cols) {
  std::vector<std::vector<Scalar>> s;
  for (const auto& c : cols) {
    std::vector<Scalar> col;
    for (long v : c) col.emplace_back(v);
    s.push_back(std::move(col));
  }
  return Mat::from_columns(s);
}

/// Independent oracle: plain-rational Gram-Schmidt over the columns of X
/// and then e_1..e_n, with the zero-skip rule. Returns all n candidate
/// vectors (unnormalized) and the projected x-vectors.
struct GsOracle {
  std::vector<std::vector<mpq_class>> xs;      // t vectors
  std::vector<mpq_class> xs_norm_sq;           // t values
  std::vector<std::vector<mpq_class>> cand;    // n candidate b* vectors
  std::vector<mpq_class> cand_norm_sq;         // n values
};

mpq_class dot(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
  mpq_class s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

GsOracle gs_oracle(const Mat& x) {
  size_t n = x.rows(), t = x.cols();
  GsOracle o;
  for (size_t k = 0; k < t; ++k) {
    std::vector<mpq_class> v(n);
    for (size_t i = 0; i < n; ++i) v[i] = x.at(i, k).rational();
    for (size_t j = 0; j < k; ++j) {
      mpq_class c = dot(v, o.xs[j]) / o.xs_norm_sq[j];
      for (size_t i = 0; i < n; ++i) v[i] -= c * o.xs[j][i];
    }
    o.xs_norm_sq.push_back(dot(v, v));
    o.xs.push_back(std::move(v));
    REQUIRE(o.xs_norm_sq.back() != 0);
  }
  for (size_t c = 0; c < n; ++c) {
    std::vector<mpq_class> v(n, mpq_class(0));
    v[c] = 1;
    for (size_t j = 0; j < t; ++j) {
      mpq_class coef = o.xs[j][c] / o.xs_norm_sq[j];
      for (size_t i = 0; i < n; ++i) v[i] -= coef * o.xs[j][i];
    }
    for (size_t d = 0; d < c; ++d) {
      if (o.cand_norm_sq[d] == 0) continue;  // mu := 0 when ||b_d*|| = 0
      mpq_class mu = o.cand[d][c] / o.cand_norm_sq[d];  // <e_c, b_d*> / <b_d*, b_d*>
      for (size_t i = 0; i < n; ++i) v[i] -= mu * o.cand[d][i];
    }
    o.cand_norm_sq.push_back(dot(v, v));
    o.cand.push_back(std::move(v));
  }
  return o;
}

Mat random_rational_matrix(Rng& rng, size_t n, size_t t) {
  while (true) {
    Mat x(n, t);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < t; ++j) {
        mpq_class q(rng.uniform(-20, 20), rng.uniform(1, 7));
        q.canonicalize();
        x.at(i, j) = Scalar(q);
      }
    try {
      if (trailing_minor_nonsingular(x, t, ZeroPolicy::exact())) {
        // Also require independent columns overall.
        hyperplane_matrix(x, ZeroPolicy::exact());
        return x;
      }
    } catch (const Error&) {
    }
  }
}

/// Laplace-expansion determinant over exact rationals (test oracle).
mpq_class laplace_det(const std::vector<std::vector<mpq_class>>& a) {
  size_t n = a.size();
  if (n == 1) return a[0][0];
  mpq_class det = 0;
  for (size_t j = 0; j < n; ++j) {
    if (sgn(a[0][j]) == 0) continue;
    std::vector<std::vector<mpq_class>> minor;
    for (size_t i = 1; i < n; ++i) {
      std::vector<mpq_class> row;
      for (size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(a[i][k]);
      minor.push_back(std::move(row));
    }
    mpq_class term = a[0][j] * laplace_det(minor);
    det += (j % 2 == 0) ? term : -term;
  }
  return det;
}

}  // namespace

TEST_CASE("trailing minor examples") {
  CHECK(trailing_minor_nonsingular(exact_cols({{0, 1}}), 1, ZeroPolicy::exact()));
  CHECK_FALSE(trailing_minor_nonsingular(exact_cols({{1, 0}}), 1, ZeroPolicy::exact()));
  // columns (1,1,0), (1,0,1): trailing 2x2 det = 1*1 - 0*0 = 1
  CHECK(trailing_minor_nonsingular(exact_cols({{1, 1, 0}, {1, 0, 1}}), 2, ZeroPolicy::exact()));
}

TEST_CASE("trailing minor agrees with a Laplace oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    size_t t = static_cast<size_t>(rng.uniform(1, 3));
    size_t n = t + static_cast<size_t>(rng.uniform(1, 3));
    Mat x(n, t);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < t; ++j) x.at(i, j) = Scalar(rng.uniform(-3, 3));
    std::vector<std::vector<mpq_class>> minor(t, std::vector<mpq_class>(t));
    for (size_t i = 0; i < t; ++i)
      for (size_t j = 0; j < t; ++j) minor[i][j] = x.at(n - t + i, j).rational();
    bool expect = sgn(laplace_det(minor)) != 0;
    CHECK(trailing_minor_nonsingular(x, t, ZeroPolicy::exact()) == expect);
  }
}

TEST_CASE("integer determinant matches Laplace oracle") {
  Rng rng(37);
  for (int trial = 0; trial < 40; ++trial) {
    size_t n = static_cast<size_t>(rng.uniform(1, 4));
    IntMat m(n);
    std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        long v = rng.uniform(-6, 6);
        m.at(i, j) = v;
        a[i][j] = v;
      }
    CHECK(mpq_class(m.determinant()) == laplace_det(a));
  }
}

TEST_CASE("admissible permutation examples") {
  // (1,0): swap to put the nonzero entry last
  auto p = admissible_permutation(exact_cols({{1, 0}}), 1, ZeroPolicy::exact());
  CHECK_FALSE(p.is_identity());
  CHECK(trailing_minor_nonsingular(p.apply_rows(exact_cols({{1, 0}})), 1, ZeroPolicy::exact()));

  // already admissible -> identity
  CHECK(admissible_permutation(exact_cols({{0, 1}}), 1, ZeroPolicy::exact()).is_identity());

  // columns (1,0,0),(0,1,0): rows 1,2 move into positions 2,3
  Mat x = exact_cols({{1, 0, 0}, {0, 1, 0}});
  auto p3 = admissible_permutation(x, 2, ZeroPolicy::exact());
  CHECK(p3.source_of(0) == 2);
  CHECK(p3.source_of(1) == 0);
  CHECK(p3.source_of(2) == 1);
  CHECK(trailing_minor_nonsingular(p3.apply_rows(x), 2, ZeroPolicy::exact()));
}

TEST_CASE("admissible permutation via exhaustive search oracle") {
  Rng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    size_t t = static_cast<size_t>(rng.uniform(1, 2));
    size_t n = t + static_cast<size_t>(rng.uniform(1, 3));
    Mat x(n, t);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < t; ++j) x.at(i, j) = Scalar(rng.uniform(-2, 2));

    // Oracle: does any row permutation make the trailing minor nonsingular?
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    bool any = false;
    std::vector<size_t> perm = idx;
    do {
      Mat px(n, t);
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < t; ++j) px.at(i, j) = x.at(perm[i], j);
      if (trailing_minor_nonsingular(px, t, ZeroPolicy::exact())) {
        any = true;
        break;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));

    if (any) {
      auto p = admissible_permutation(x, t, ZeroPolicy::exact());
      CHECK(trailing_minor_nonsingular(p.apply_rows(x), t, ZeroPolicy::exact()));
    } else {
      CHECK_THROWS_AS(admissible_permutation(x, t, ZeroPolicy::exact()), Error);
    }
  }
}

TEST_CASE("permutation map_back matches C^T m") {
  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    size_t n = static_cast<size_t>(rng.uniform(2, 6));
    std::vector<size_t> src(n);
    for (size_t i = 0; i < n; ++i) src[i] = i;
    for (size_t i = n; i-- > 1;) std::swap(src[i], src[static_cast<size_t>(rng.uniform(0, static_cast<long>(i)))]);
    IndexPermutation p(src);
    std::vector<mpz_class> m(n);
    for (auto& e : m) e = rng.uniform(-9, 9);
    auto mapped = p.map_back(m);
    IntMat c = p.matrix();
    for (size_t j = 0; j < n; ++j) {
      mpz_class want = 0;
      for (size_t i = 0; i < n; ++i) want += c.at(i, j) * m[i];
      CHECK(mapped[j] == want);
    }
  }
}

TEST_CASE("hyperplane matrix: trivial and derived examples") {
  // X = (0,1): H = (1,0)
  auto h1 = hyperplane_matrix(exact_cols({{0, 1}}), ZeroPolicy::exact());
  Mat n1 = h1.normalized();
  CHECK(n1.at(0, 0) == Scalar(1));
  CHECK(n1.at(1, 0) == Scalar(0));

  // X = (3,4): H = (4/5, -3/5), norms are exact squares here
  auto h2 = hyperplane_matrix(exact_cols({{3, 4}}), ZeroPolicy::exact());
  Mat n2 = h2.normalized();
  CHECK(n2.at(0, 0).rational() == mpq_class(4, 5));
  CHECK(n2.at(1, 0).rational() == mpq_class(-3, 5));

  // X = cols (1,1,0),(1,0,1): H proportional to (1,-1,-1)/sqrt(3)
  auto h3 = hyperplane_matrix(exact_cols({{1, 1, 0}, {1, 0, 1}}), ZeroPolicy::exact());
  const Scalar& a = h3.basis.at(0, 0);
  CHECK(h3.basis.at(1, 0) == -a);
  CHECK(h3.basis.at(2, 0) == -a);
  CHECK(h3.diag_squared(0) == Scalar(mpq_class(1, 3)));
}

TEST_CASE("hyperplane construction matches the Gram-Schmidt oracle") {
  Rng rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    size_t t = static_cast<size_t>(rng.uniform(1, 3));
    size_t n = t + static_cast<size_t>(rng.uniform(1, 3));
    Mat x = random_rational_matrix(rng, n, t);
    auto h = hyperplane_matrix(x, ZeroPolicy::exact());
    GsOracle o = gs_oracle(x);

    // Exactly the last t candidates vanish (the trailing minor is
    // nonsingular by construction of the sample).
    for (size_t c = 0; c < n; ++c) {
      if (c < n - t)
        CHECK(o.cand_norm_sq[c] != 0);
      else
        CHECK(o.cand_norm_sq[c] == 0);
    }

    // Library columns are positive rational multiples of oracle vectors.
    for (size_t c = 0; c < n - t; ++c) {
      // find a nonzero oracle coordinate
      size_t k = c;
      REQUIRE(sgn(o.cand[c][k]) != 0);
      mpq_class scale = h.basis.at(k, c).rational() / o.cand[c][k];
      CHECK(sgn(scale) > 0);
      for (size_t i = 0; i < n; ++i)
        CHECK(h.basis.at(i, c).rational() == scale * o.cand[c][i]);
      CHECK(h.norm_sq[c].rational() == scale * scale * o.cand_norm_sq[c]);
    }
  }
}

TEST_CASE("hyperplane invariants, exact mode") {
  Rng rng(53);
  for (int trial = 0; trial < 25; ++trial) {
    size_t t = static_cast<size_t>(rng.uniform(1, 3));
    size_t n = t + static_cast<size_t>(rng.uniform(1, 4));
    Mat x = random_rational_matrix(rng, n, t);
    auto h = hyperplane_matrix(x, ZeroPolicy::exact());

    // Lemma: H^T H = I, homogeneously V^T V = diag(norm_sq)
    for (size_t a = 0; a < h.cols(); ++a)
      for (size_t b = 0; b < h.cols(); ++b) {
        Scalar d(0);
        for (size_t i = 0; i < n; ++i) d += h.basis.at(i, a) * h.basis.at(i, b);
        if (a == b)
          CHECK(d == h.norm_sq[a]);
        else
          CHECK(d.is_zero());
      }
    // ||H||_F^2 = n - t
    Scalar fro(0);
    for (size_t c = 0; c < h.cols(); ++c) {
      Scalar col(0);
      for (size_t i = 0; i < n; ++i) col += h.basis.at(i, c) * h.basis.at(i, c);
      fro += col / h.norm_sq[c];
    }
    CHECK(fro == Scalar(static_cast<long>(n - t)));
    // X^T H = 0
    for (size_t j = 0; j < t; ++j)
      for (size_t c = 0; c < h.cols(); ++c) {
        Scalar d(0);
        for (size_t i = 0; i < n; ++i) d += x.at(i, j) * h.basis.at(i, c);
        CHECK(d.is_zero());
      }
    // lower trapezoidal with nonzero diagonal
    for (size_t i = 0; i < n; ++i)
      for (size_t c = 0; c < h.cols(); ++c) {
        if (i < c) CHECK(h.basis.at(i, c).is_zero());
        if (i == c) CHECK_FALSE(h.basis.at(i, c).is_zero());
      }
  }
}

TEST_CASE("projection matrix: examples and identities") {
  // X = (1,0): P = [[0,0],[0,1]]
  Mat p1 = projection_matrix(exact_cols({{0, 1}}), ZeroPolicy::exact());
  CHECK(p1.at(0, 0) == Scalar(1));
  CHECK(p1.at(0, 1).is_zero());
  CHECK(p1.at(1, 1).is_zero());

  Mat p2 = projection_matrix(exact_cols({{1, 0}}), ZeroPolicy::exact());
  CHECK(p2.at(0, 0).is_zero());
  CHECK(p2.at(1, 1) == Scalar(1));

  // X = (3,4): P = [[16/25, -12/25], [-12/25, 9/25]]
  Mat p3 = projection_matrix(exact_cols({{3, 4}}), ZeroPolicy::exact());
  CHECK(p3.at(0, 0).rational() == mpq_class(16, 25));
  CHECK(p3.at(0, 1).rational() == mpq_class(-12, 25));
  CHECK(p3.at(1, 0).rational() == mpq_class(-12, 25));
  CHECK(p3.at(1, 1).rational() == mpq_class(9, 25));
}

TEST_CASE("projection invariants on random instances") {
  Rng rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    size_t t = static_cast<size_t>(rng.uniform(1, 3));
    size_t n = t + static_cast<size_t>(rng.uniform(1, 3));
    Mat x = random_rational_matrix(rng, n, t);
    Mat p = projection_matrix(x, ZeroPolicy::exact());

    // symmetric, idempotent, trace = ||P||_F^2 = n - t
    Scalar trace(0), fro(0);
    for (size_t i = 0; i < n; ++i) {
      trace += p.at(i, i);
      for (size_t j = 0; j < n; ++j) {
        CHECK(p.at(i, j) == p.at(j, i));
        fro += p.at(i, j) * p.at(i, j);
      }
    }
    CHECK(trace == Scalar(static_cast<long>(n - t)));
    CHECK(fro == Scalar(static_cast<long>(n - t)));
    Mat pp = p.mul(p);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) CHECK(pp.at(i, j) == p.at(i, j));

    // P = I - sum x_i* x_i*^T against the oracle
    GsOracle o = gs_oracle(x);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        mpq_class want = (i == j) ? 1 : 0;
        for (size_t k = 0; k < t; ++k) want -= o.xs[k][i] * o.xs[k][j] / o.xs_norm_sq[k];
        CHECK(p.at(i, j).rational() == want);
      }
  }

  // t = n-1: rank-1 projector with trace 1 (covered by trace check above
  // with n - t = 1); and P m = m for a planted relation.
  Rng rng2(61);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = make_planted(rng2, 4, 2, 8);
    Mat p = projection_matrix(inst.x, ZeroPolicy::exact());
    for (size_t i = 0; i < 4; ++i) {
      Scalar acc(0);
      for (size_t j = 0; j < 4; ++j) acc += p.at(i, j) * Scalar(inst.m[j]);
      CHECK(acc == Scalar(inst.m[i]));
    }
  }
}

TEST_CASE("hyperplane float residuals stay within tolerance") {
  Rng rng(67);
  const mpfr_prec_t p = 128;
  for (int trial = 0; trial < 15; ++trial) {
    size_t t = static_cast<size_t>(rng.uniform(1, 3));
    size_t n = t + static_cast<size_t>(rng.uniform(1, 4));
    Mat x = random_rational_matrix(rng, n, t).to_mode(Mode::Float, p);
    auto h = hyperplane_matrix(x, ZeroPolicy::for_precision(p));
    Mat hm = h.normalized();
    Scalar tol = Scalar(BigFloat::pow2(-(static_cast<long>(p) - 24), p)) * Scalar(static_cast<long>(n));

    // ||H^T H - I||_F <= tol
    Mat gram = hm.transpose().mul(hm);
    Mat diff = gram.sub(Mat::identity(n - t).to_mode(Mode::Float, p));
    CHECK(diff.frobenius_norm_squared().sqrt() <= tol);
    // | ||H||_F - sqrt(n-t) | <= tol
    Scalar fro = hm.frobenius_norm_squared().sqrt();
    Scalar want = Scalar(static_cast<long>(n - t)).to_mode(Mode::Float, p).sqrt();
    CHECK((fro - want).abs() <= tol);
    // ||X^T H||_F <= tol * ||X||_F
    Scalar xh = x.transpose().mul(hm).frobenius_norm_squared().sqrt();
    CHECK(xh <= tol * x.frobenius_norm_squared().sqrt());
  }
}

TEST_CASE("degenerate inputs are rejected") {
  // Dependent columns: second column is twice the first.
  Mat dep = exact_cols({{1, 2, 3}, {2, 4, 6}});
  CHECK_THROWS_AS(admissible_permutation(dep, 2, ZeroPolicy::exact()), Error);

  // Trailing-minor violation fed straight to the construction.
  Mat bad = exact_cols({{1, 0, 0}, {0, 0, 1}});
  CHECK_THROWS_AS(hyperplane_matrix(bad, ZeroPolicy::exact()), Error);
}

TEST_CASE("canonicalize_column keeps the represented column fixed") {
  Mat m(3, 1);
  m.at(0, 0) = Scalar(mpq_class(3, 4));
  m.at(1, 0) = Scalar(mpq_class(-9, 8));
  m.at(2, 0) = Scalar(mpq_class(0));
  Scalar norm_sq = m.at(0, 0) * m.at(0, 0) + m.at(1, 0) * m.at(1, 0);
  Scalar diag_sq_before = m.at(0, 0) * m.at(0, 0) / norm_sq;
  canonicalize_column(m, norm_sq, 0);
  CHECK(m.at(0, 0).rational() == 2);  // (3/4, -9/8) -> (2, -3) after scaling by 8/3
  CHECK(m.at(1, 0).rational() == -3);
  CHECK(m.at(0, 0) * m.at(0, 0) / norm_sq == diag_sq_before);
}
