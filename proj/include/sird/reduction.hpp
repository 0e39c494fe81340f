#pragma once

#include <cstddef>
#include <vector>

#include "sird/linalg.hpp"

namespace sird {

/// One elementary row operation on an n x n unimodular matrix.
struct ElementaryOp {
  enum class Kind { RowSub, RowSwap } kind;
  size_t i = 0;  // RowSub: row i -= q * row j; RowSwap: exchange rows i, j
  size_t j = 0;
  mpz_class q;

  static ElementaryOp row_sub(size_t i, size_t j, mpz_class q) {
    return ElementaryOp{Kind::RowSub, i, j, std::move(q)};
  }
  static ElementaryOp row_swap(size_t i, size_t j) { return ElementaryOp{Kind::RowSwap, i, j, 0}; }
};

/// A unimodular reducing matrix D kept as its factorization into
/// elementary operations (applied left to right: D = op_m ... op_1).
/// Keeping the factorization makes B := B D^-1 and Y := Y D^-1 a
/// sequence of inverse column operations; D^-1 is never formed.
class ReducingMatrix {
 public:
  ReducingMatrix() : n_(0) {}
  ReducingMatrix(size_t n, std::vector<ElementaryOp> ops) : n_(n), ops_(std::move(ops)) {}

  size_t dim() const { return n_; }
  const std::vector<ElementaryOp>& ops() const { return ops_; }
  bool is_identity() const { return ops_.empty(); }

  IntMat matrix() const;

  /// H := D H (forward row operations).
  void apply_left(Mat& h) const;
  /// M := M D^-1 (inverse column operations, same order as ops).
  void apply_inverse_right(Mat& m) const;
  void apply_inverse_right(IntMat& m) const;

 private:
  size_t n_;
  std::vector<ElementaryOp> ops_;
};

/// Algorithm: generalized Hermite reduction of a lower trapezoidal
/// n x (n-t) matrix H with nonzero diagonal. Returns D with DH satisfying
/// |(DH)_{k,i}| <= |H_{i,i}|/2 for all k > i, i <= n-t, and with the rows
/// below the trapezoid stably reordered so that zero entries in column
/// n-t form a suffix. With t = 1 this is exactly modified Hermite
/// reduction. The input H is not modified.
ReducingMatrix generalized_hermite_reduce(const Mat& h, size_t t, const ZeroPolicy& policy);

/// Fused variant: reduces H in place and mirrors every elementary
/// operation onto B and Y (either may be null) as inverse column
/// operations, so X0^T B H and Y H are conserved. Returns the op log.
ReducingMatrix reduce_and_update(Mat& h, size_t t, IntMat* b, Mat* y, const ZeroPolicy& policy);

/// H := D H, B := B D^-1, Y := Y D^-1.
void apply_update(Mat& h, IntMat& b, Mat& y, const ReducingMatrix& d);

}  // namespace sird
