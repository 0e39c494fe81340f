#include "sird/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace sird {

// ---------------------------------------------------------------------------
// Mat

Mat Mat::identity(size_t n) {
  Mat m(n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = Scalar(1);
  return m;
}

Mat Mat::from_columns(const std::vector<std::vector<Scalar>>& cols) {
  if (cols.empty()) return Mat();
  size_t n = cols[0].size();
  for (const auto& c : cols)
    if (c.size() != n) throw Error(Errc::InvalidArgument, "ragged column list");
  Mat m(n, cols.size());
  for (size_t j = 0; j < cols.size(); ++j)
    for (size_t i = 0; i < n; ++i) m.at(i, j) = cols[j][i];
  return m;
}

Mat Mat::transpose() const {
  Mat r(cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

Mat Mat::mul(const Mat& o) const {
  if (cols_ != o.rows_) throw Error(Errc::InvalidArgument, "matrix product shape mismatch");
  Mat r(rows_, o.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      const Scalar& a = at(i, k);
      if (a.is_zero()) continue;
      for (size_t j = 0; j < o.cols_; ++j) r.at(i, j) += a * o.at(k, j);
    }
  return r;
}

Mat Mat::sub(const Mat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(Errc::InvalidArgument, "matrix shape mismatch");
  Mat r(rows_, cols_);
  for (size_t i = 0; i < rows_ * cols_; ++i) r.e_[i] = e_[i] - o.e_[i];
  return r;
}

Scalar Mat::frobenius_norm_squared() const {
  Scalar s(0);
  for (const auto& e : e_) s += e * e;
  return s;
}

Scalar Mat::max_abs_entry() const {
  Scalar s(0);
  for (const auto& e : e_) {
    Scalar a = e.abs();
    if (a > s) s = a;
  }
  return s;
}

bool Mat::column_is_zero(size_t j, const ZeroPolicy& policy) const {
  for (size_t i = 0; i < rows_; ++i)
    if (!policy.is_zero(at(i, j))) return false;
  return true;
}

void Mat::swap_rows(size_t a, size_t b) {
  if (a == b) return;
  for (size_t j = 0; j < cols_; ++j) std::swap(e_[a * cols_ + j], e_[b * cols_ + j]);
}

void Mat::swap_cols(size_t a, size_t b) {
  if (a == b) return;
  for (size_t i = 0; i < rows_; ++i) std::swap(e_[i * cols_ + a], e_[i * cols_ + b]);
}

Mat Mat::to_mode(Mode mode, mpfr_prec_t prec) const {
  Mat r(rows_, cols_);
  for (size_t i = 0; i < rows_ * cols_; ++i) r.e_[i] = e_[i].to_mode(mode, prec);
  return r;
}

// ---------------------------------------------------------------------------
// IntMat

IntMat IntMat::identity(size_t n) {
  IntMat m(n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

std::vector<mpz_class> IntMat::column(size_t j) const {
  std::vector<mpz_class> c(n_);
  for (size_t i = 0; i < n_; ++i) c[i] = at(i, j);
  return c;
}

void IntMat::add_multiple_of_column(size_t dst, size_t src, const mpz_class& q) {
  for (size_t i = 0; i < n_; ++i) at(i, dst) += q * at(i, src);
}

void IntMat::add_multiple_of_row(size_t dst, size_t src, const mpz_class& q) {
  for (size_t j = 0; j < n_; ++j) at(dst, j) += q * at(src, j);
}

void IntMat::swap_cols(size_t a, size_t b) {
  if (a == b) return;
  for (size_t i = 0; i < n_; ++i) std::swap(at(i, a), at(i, b));
}

void IntMat::swap_rows(size_t a, size_t b) {
  if (a == b) return;
  for (size_t j = 0; j < n_; ++j) std::swap(at(a, j), at(b, j));
}

IntMat IntMat::mul(const IntMat& o) const {
  if (n_ != o.n_) throw Error(Errc::InvalidArgument, "integer matrix shape mismatch");
  IntMat r(n_);
  for (size_t i = 0; i < n_; ++i)
    for (size_t k = 0; k < n_; ++k) {
      if (at(i, k) == 0) continue;
      for (size_t j = 0; j < n_; ++j) r.at(i, j) += at(i, k) * o.at(k, j);
    }
  return r;
}

mpz_class IntMat::determinant() const {
  if (n_ == 0) return 1;
  // Bareiss fraction-free elimination; every division is exact.
  IntMat a(*this);
  mpz_class prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n_; ++k) {
    if (a.at(k, k) == 0) {
      size_t p = k + 1;
      while (p < n_ && a.at(p, k) == 0) ++p;
      if (p == n_) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n_; ++i) {
      for (size_t j = k + 1; j < n_; ++j) {
        mpz_class num = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
        mpz_divexact(a.at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      a.at(i, k) = 0;
    }
    prev = a.at(k, k);
  }
  return sign > 0 ? a.at(n_ - 1, n_ - 1) : mpz_class(-a.at(n_ - 1, n_ - 1));
}

bool IntMat::is_unimodular() const {
  mpz_class d = determinant();
  return d == 1 || d == -1;
}

Mat IntMat::to_mat(Mode mode, mpfr_prec_t prec) const {
  Mat r(n_, n_);
  for (size_t i = 0; i < n_; ++i)
    for (size_t j = 0; j < n_; ++j) r.at(i, j) = Scalar(at(i, j)).to_mode(mode, prec);
  return r;
}

// ---------------------------------------------------------------------------
// IndexPermutation

IndexPermutation::IndexPermutation(std::vector<size_t> source) : src_(std::move(source)) {
  std::vector<bool> seen(src_.size(), false);
  for (size_t s : src_) {
    if (s >= src_.size() || seen[s]) throw Error(Errc::InvalidArgument, "not a permutation");
    seen[s] = true;
  }
}

IndexPermutation IndexPermutation::identity(size_t n) {
  std::vector<size_t> src(n);
  std::iota(src.begin(), src.end(), size_t{0});
  return IndexPermutation(std::move(src));
}

bool IndexPermutation::is_identity() const {
  for (size_t i = 0; i < src_.size(); ++i)
    if (src_[i] != i) return false;
  return true;
}

Mat IndexPermutation::apply_rows(const Mat& x) const {
  if (x.rows() != src_.size()) throw Error(Errc::InvalidArgument, "permutation size mismatch");
  Mat r(x.rows(), x.cols());
  for (size_t i = 0; i < x.rows(); ++i)
    for (size_t j = 0; j < x.cols(); ++j) r.at(i, j) = x.at(src_[i], j);
  return r;
}

std::vector<mpz_class> IndexPermutation::map_back(const std::vector<mpz_class>& m) const {
  if (m.size() != src_.size()) throw Error(Errc::InvalidArgument, "permutation size mismatch");
  // (C^T m)_j = m_i where src_[i] = j.
  std::vector<mpz_class> r(m.size());
  for (size_t i = 0; i < src_.size(); ++i) r[src_[i]] = m[i];
  return r;
}

IntMat IndexPermutation::matrix() const {
  IntMat c(src_.size());
  for (size_t i = 0; i < src_.size(); ++i) c.at(i, src_[i]) = 1;
  return c;
}

// ---------------------------------------------------------------------------
// Admissibility (trailing minor) and the permutation fix-up

namespace {

/// |det| of a square Scalar matrix by Gaussian elimination with partial
/// pivoting; returns an exact value in exact mode.
Scalar abs_determinant(Mat a, const ZeroPolicy& policy) {
  size_t n = a.rows();
  Scalar det(1);
  for (size_t k = 0; k < n; ++k) {
    size_t best = k;
    Scalar best_abs = a.at(k, k).abs();
    for (size_t i = k + 1; i < n; ++i) {
      Scalar v = a.at(i, k).abs();
      if (v > best_abs) {
        best = i;
        best_abs = v;
      }
    }
    if (policy.is_zero(a.at(best, k))) return Scalar(0);
    a.swap_rows(k, best);
    det *= a.at(k, k);
    for (size_t i = k + 1; i < n; ++i) {
      if (a.at(i, k).is_zero()) continue;
      Scalar f = a.at(i, k) / a.at(k, k);
      for (size_t j = k; j < n; ++j) a.at(i, j) -= f * a.at(k, j);
    }
  }
  return det.abs();
}

}  // namespace

bool trailing_minor_nonsingular(const Mat& x, size_t t, const ZeroPolicy& policy) {
  if (x.cols() != t || x.rows() <= t)
    throw Error(Errc::InvalidArgument, "expected an n x t matrix with n > t");
  Mat minor(t, t);
  for (size_t i = 0; i < t; ++i)
    for (size_t j = 0; j < t; ++j) minor.at(i, j) = x.at(x.rows() - t + i, j);
  return !policy.is_zero(abs_determinant(std::move(minor), policy));
}

IndexPermutation admissible_permutation(const Mat& x, size_t t, const ZeroPolicy& policy) {
  size_t n = x.rows();
  if (x.cols() != t || n <= t)
    throw Error(Errc::InvalidArgument, "expected an n x t matrix with n > t");
  if (trailing_minor_nonsingular(x, t, policy)) return IndexPermutation::identity(n);

  // Greedy pivoting on X^T: for each column of X pick the unused row with
  // the largest eliminated entry. Pivot rows go to the trailing block.
  Mat work = x;  // n x t, rows get eliminated in place
  std::vector<bool> used(n, false);
  std::vector<size_t> pivot_rows;
  for (size_t col = 0; col < t; ++col) {
    size_t best = n;
    Scalar best_abs(0);
    for (size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      Scalar v = work.at(i, col).abs();
      if (best == n || v > best_abs) {
        best = i;
        best_abs = v;
      }
    }
    if (best == n || policy.is_zero(work.at(best, col)))
      throw Error(Errc::NoAdmissiblePermutation,
                  "columns are effectively dependent; no row permutation fixes the trailing minor");
    used[best] = true;
    pivot_rows.push_back(best);
    for (size_t i = 0; i < n; ++i) {
      if (used[i] || work.at(i, col).is_zero()) continue;
      Scalar f = work.at(i, col) / work.at(best, col);
      for (size_t j = col; j < t; ++j) work.at(i, j) -= f * work.at(best, j);
    }
  }

  std::vector<size_t> src;
  src.reserve(n);
  for (size_t i = 0; i < n; ++i)
    if (!used[i]) src.push_back(i);
  for (size_t r : pivot_rows) src.push_back(r);
  return IndexPermutation(std::move(src));
}

// ---------------------------------------------------------------------------
// Hyperplane matrix

std::optional<mpq_class> exact_sqrt(const mpq_class& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (sgn(q) == 0) return mpq_class(0);
  if (mpz_perfect_square_p(q.get_num().get_mpz_t()) == 0) return std::nullopt;
  if (mpz_perfect_square_p(q.get_den().get_mpz_t()) == 0) return std::nullopt;
  mpz_class num, den;
  mpz_sqrt(num.get_mpz_t(), q.get_num().get_mpz_t());
  mpz_sqrt(den.get_mpz_t(), q.get_den().get_mpz_t());
  mpq_class r(num, den);
  r.canonicalize();
  return r;
}

void canonicalize_column(Mat& basis, Scalar& norm_sq, size_t col) {
  if (norm_sq.mode() != Mode::Exact) return;
  size_t n = basis.rows();
  mpz_class lcm_den = 1, gcd_num = 0;
  for (size_t i = 0; i < n; ++i) {
    const mpq_class& e = basis.at(i, col).rational();
    if (sgn(e) == 0) continue;
    mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), e.get_den().get_mpz_t());
  }
  for (size_t i = 0; i < n; ++i) {
    const mpq_class& e = basis.at(i, col).rational();
    if (sgn(e) == 0) continue;
    mpz_class scaled = e.get_num() * (lcm_den / e.get_den());
    mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), scaled.get_mpz_t());
  }
  if (gcd_num == 0) return;  // zero column
  mpq_class scale(lcm_den, gcd_num);
  scale.canonicalize();
  if (scale == 1) return;
  Scalar s{scale};
  for (size_t i = 0; i < n; ++i) basis.at(i, col) = basis.at(i, col) * s;
  norm_sq = norm_sq * s * s;
}

Mat Hyperplane::normalized() const {
  Mat r = basis;
  for (size_t j = 0; j < cols(); ++j) {
    Scalar inv_norm;
    if (norm_sq[j].mode() == Mode::Exact) {
      auto root = exact_sqrt(norm_sq[j].rational());
      if (!root)
        throw Error(Errc::InvalidArgument,
                    "column norm is irrational; exact mode cannot materialize H");
      inv_norm = Scalar(1) / Scalar(*root);
    } else {
      inv_norm = Scalar(1) / norm_sq[j].sqrt();
    }
    for (size_t i = 0; i < rows(); ++i) r.at(i, j) = r.at(i, j) * inv_norm;
  }
  return r;
}

Scalar Hyperplane::diag_squared(size_t j) const {
  return basis.at(j, j) * basis.at(j, j) / norm_sq[j];
}

namespace {

Scalar dot_columns(const Mat& a, size_t ca, const Mat& b, size_t cb) {
  Scalar s(0);
  for (size_t i = 0; i < a.rows(); ++i) s += a.at(i, ca) * b.at(i, cb);
  return s;
}

}  // namespace

Hyperplane hyperplane_matrix(const Mat& x, const ZeroPolicy& policy) {
  size_t n = x.rows(), t = x.cols();
  if (n <= t || t == 0) throw Error(Errc::InvalidArgument, "expected an n x t matrix with 0 < t < n");
  bool exact = x.at(0, 0).mode() == Mode::Exact;
  mpfr_prec_t prec = exact ? BigFloat::kMinPrec : x.at(0, 0).precision();
  auto num = [&](long v) { return Scalar(v).to_mode(exact ? Mode::Exact : Mode::Float, prec); };

  // Unnormalized Gram-Schmidt vectors for the columns of X; projections
  // only ever use <v, xs_j>/xs_norm_sq[j], which is scale-free.
  Mat xs(n, t);
  std::vector<Scalar> xs_norm_sq(t);
  for (size_t k = 0; k < t; ++k) {
    for (size_t i = 0; i < n; ++i) xs.at(i, k) = x.at(i, k);
    for (size_t j = 0; j < k; ++j) {
      Scalar c = dot_columns(xs, k, xs, j) / xs_norm_sq[j];
      if (c.is_zero()) continue;
      for (size_t i = 0; i < n; ++i) xs.at(i, k) -= c * xs.at(i, j);
    }
    xs_norm_sq[k] = dot_columns(xs, k, xs, k);
    if (policy.is_zero(xs_norm_sq[k]))
      throw Error(Errc::DegenerateInput, "columns of X are effectively dependent");
  }

  // Continue the orthogonalization over e_1 .. e_{n-t}. Entry accounting:
  // b_i starts as e_i, so <e_i, v> is just component i of v.
  Hyperplane h;
  h.basis = Mat(n, n - t);
  h.norm_sq.assign(n - t, Scalar(0));
  for (size_t c = 0; c < n - t; ++c) {
    // b := e_c - sum_j proj onto xs_j - sum_{d<c} proj onto basis column d
    std::vector<Scalar> b(n, num(0));
    b[c] = num(1);
    for (size_t j = 0; j < t; ++j) {
      Scalar coef = xs.at(c, j) / xs_norm_sq[j];
      if (coef.is_zero()) continue;
      for (size_t i = 0; i < n; ++i) b[i] -= coef * xs.at(i, j);
    }
    for (size_t d = 0; d < c; ++d) {
      // mu = <e_c, b_d*> / <b_d*, b_d*>; previous columns here are all
      // nonvanishing (the construction errors out otherwise).
      Scalar mu = h.basis.at(c, d) / h.norm_sq[d];
      if (mu.is_zero()) continue;
      for (size_t i = 0; i < n; ++i) b[i] -= mu * h.basis.at(i, d);
    }
    Scalar nsq(0);
    for (size_t i = 0; i < n; ++i) nsq += b[i] * b[i];
    if (policy.is_zero(nsq))
      throw Error(Errc::DegenerateInput,
                  "interior Gram-Schmidt vector vanished; trailing minor condition violated");
    for (size_t i = 0; i < n; ++i) h.basis.at(i, c) = b[i];
    h.norm_sq[c] = nsq;
    // Entries above the diagonal are zero by construction; store exact zeros.
    for (size_t i = 0; i < c; ++i) h.basis.at(i, c) = num(0);
    if (exact) {
      canonicalize_column(h.basis, h.norm_sq[c], c);
    } else {
      Scalar inv = Scalar(1) / h.norm_sq[c].sqrt();
      for (size_t i = c; i < n; ++i) h.basis.at(i, c) = h.basis.at(i, c) * inv;
      h.norm_sq[c] = num(1);
    }
  }
  return h;
}

Mat projection_matrix(const Mat& x, const ZeroPolicy& policy) {
  // P_X does not depend on the row order, so inputs that fail the
  // trailing-minor condition are permuted first and mapped back:
  // P_X = C^T P_CX C.
  IndexPermutation c = admissible_permutation(x, x.cols(), policy);
  Hyperplane h = hyperplane_matrix(c.apply_rows(x), policy);
  size_t n = h.rows();
  Mat p(n, n);
  for (size_t col = 0; col < h.cols(); ++col) {
    Scalar inv = Scalar(1) / h.norm_sq[col];
    for (size_t i = 0; i < n; ++i) {
      if (h.basis.at(i, col).is_zero()) continue;
      Scalar vi = h.basis.at(i, col) * inv;
      for (size_t j = 0; j < n; ++j) p.at(i, j) += vi * h.basis.at(j, col);
    }
  }
  if (c.is_identity()) return p;
  Mat out(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) out.at(c.source_of(i), c.source_of(j)) = p.at(i, j);
  return out;
}

}  // namespace sird
