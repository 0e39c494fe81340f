#pragma once

#include <cstddef>
#include <vector>

#include "sird/numeric.hpp"

namespace sird {

/// Dense matrix of Scalars, row-major.
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(size_t rows, size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}

  static Mat identity(size_t n);
  static Mat from_columns(const std::vector<std::vector<Scalar>>& cols);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  Scalar& at(size_t i, size_t j) { return e_[i * cols_ + j]; }
  const Scalar& at(size_t i, size_t j) const { return e_[i * cols_ + j]; }

  Mat transpose() const;
  Mat mul(const Mat& o) const;
  Mat sub(const Mat& o) const;
  Scalar frobenius_norm_squared() const;
  Scalar max_abs_entry() const;
  bool column_is_zero(size_t j, const ZeroPolicy& policy) const;

  void swap_rows(size_t a, size_t b);
  void swap_cols(size_t a, size_t b);

  Mat to_mode(Mode mode, mpfr_prec_t prec) const;

 private:
  size_t rows_, cols_;
  std::vector<Scalar> e_;
};

/// Square integer matrix (arbitrary precision entries).
class IntMat {
 public:
  IntMat() : n_(0) {}
  explicit IntMat(size_t n) : n_(n), e_(n * n) {}

  static IntMat identity(size_t n);

  size_t dim() const { return n_; }
  mpz_class& at(size_t i, size_t j) { return e_[i * n_ + j]; }
  const mpz_class& at(size_t i, size_t j) const { return e_[i * n_ + j]; }

  std::vector<mpz_class> column(size_t j) const;
  void add_multiple_of_column(size_t dst, size_t src, const mpz_class& q);  // col dst += q * col src
  void add_multiple_of_row(size_t dst, size_t src, const mpz_class& q);     // row dst += q * row src
  void swap_cols(size_t a, size_t b);
  void swap_rows(size_t a, size_t b);

  IntMat mul(const IntMat& o) const;
  /// Exact determinant (fraction-free Bareiss elimination).
  mpz_class determinant() const;
  bool is_unimodular() const;

  Mat to_mat(Mode mode, mpfr_prec_t prec) const;

 private:
  size_t n_;
  std::vector<mpz_class> e_;
};

/// Row permutation C: row i of CX is row source_of(i) of X.
class IndexPermutation {
 public:
  IndexPermutation() = default;
  explicit IndexPermutation(std::vector<size_t> source);
  static IndexPermutation identity(size_t n);

  size_t size() const { return src_.size(); }
  size_t source_of(size_t i) const { return src_[i]; }
  bool is_identity() const;

  Mat apply_rows(const Mat& x) const;  // C * X
  /// C^T m: maps a relation for CX back to a relation for X.
  std::vector<mpz_class> map_back(const std::vector<mpz_class>& m) const;
  IntMat matrix() const;

 private:
  std::vector<size_t> src_;
};

/// True iff the determinant of the last t rows of X (a t x t minor) is
/// not effectively zero.
bool trailing_minor_nonsingular(const Mat& x, size_t t, const ZeroPolicy& policy);

/// Finds a row permutation C such that CX has a nonsingular trailing
/// t x t minor; identity if X already does. Greedy pivot selection,
/// deterministic. Throws NoAdmissiblePermutation if the columns of X
/// are (effectively) dependent.
IndexPermutation admissible_permutation(const Mat& x, size_t t, const ZeroPolicy& policy);

/// Hyperplane matrix in homogeneous form: the actual orthonormal basis
/// of the complement is column j of `basis` divided by sqrt(norm_sq[j]).
/// In float mode columns are kept normalized (norm_sq == 1); in exact
/// mode `basis` holds integer-primitive columns and norm_sq carries the
/// squared scale, so every quantity downstream stays rational.
struct Hyperplane {
  Mat basis;                    // n x (n-t)
  std::vector<Scalar> norm_sq;  // per column, positive

  size_t rows() const { return basis.rows(); }
  size_t cols() const { return basis.cols(); }

  /// Materializes the normalized matrix. Always possible in float mode;
  /// in exact mode requires each norm_sq to be a perfect rational square.
  Mat normalized() const;
  /// h_{j,j}^2 as a scalar in the native arithmetic.
  Scalar diag_squared(size_t j) const;
};

/// Builds H_X by Gram-Schmidt over the columns of X and then the
/// standard basis vectors; X must satisfy the trailing-minor condition
/// (apply admissible_permutation first). Throws DegenerateInput when a
/// pivot norm that must stay nonzero is effectively zero.
Hyperplane hyperplane_matrix(const Mat& x, const ZeroPolicy& policy);

/// P_X = H_X H_X^T, an n x n projector onto the orthogonal complement
/// of the column span of X. Rational whenever X is.
Mat projection_matrix(const Mat& x, const ZeroPolicy& policy);

/// Rescales an exact-mode column to integer entries with content 1,
/// adjusting its squared norm to match. No-op on float columns.
void canonicalize_column(Mat& basis, Scalar& norm_sq, size_t col);

/// Exact square root of a rational if it is a perfect square.
std::optional<mpq_class> exact_sqrt(const mpq_class& q);

}  // namespace sird
