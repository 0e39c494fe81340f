#include "sird/reduction.hpp"

#include <algorithm>

namespace sird {

IntMat ReducingMatrix::matrix() const {
  IntMat d = IntMat::identity(n_);
  for (const auto& op : ops_) {
    if (op.kind == ElementaryOp::Kind::RowSub)
      d.add_multiple_of_row(op.i, op.j, -op.q);
    else
      d.swap_rows(op.i, op.j);
  }
  return d;
}

void ReducingMatrix::apply_left(Mat& h) const {
  for (const auto& op : ops_) {
    if (op.kind == ElementaryOp::Kind::RowSub) {
      Scalar qs{mpq_class(op.q)};
      for (size_t k = 0; k < h.cols(); ++k) {
        if (h.at(op.j, k).is_zero()) continue;
        h.at(op.i, k) -= qs * h.at(op.j, k);
      }
    } else {
      h.swap_rows(op.i, op.j);
    }
  }
}

void ReducingMatrix::apply_inverse_right(Mat& m) const {
  // (op_m ... op_1)^-1 = op_1^-1 ... op_m^-1, applied as right factors
  // in the original op order. For L = I - q E_{ij}, M L^-1 adds q times
  // column i to column j; a swap is its own inverse.
  for (const auto& op : ops_) {
    if (op.kind == ElementaryOp::Kind::RowSub) {
      Scalar qs{mpq_class(op.q)};
      for (size_t r = 0; r < m.rows(); ++r) {
        if (m.at(r, op.i).is_zero()) continue;
        m.at(r, op.j) += qs * m.at(r, op.i);
      }
    } else {
      m.swap_cols(op.i, op.j);
    }
  }
}

void ReducingMatrix::apply_inverse_right(IntMat& m) const {
  for (const auto& op : ops_) {
    if (op.kind == ElementaryOp::Kind::RowSub)
      m.add_multiple_of_column(op.j, op.i, op.q);
    else
      m.swap_cols(op.i, op.j);
  }
}

namespace {

struct OpSink {
  Mat* h;
  IntMat* b;
  Mat* y;
  std::vector<ElementaryOp> log;

  void row_sub(size_t i, size_t j, const mpz_class& q) {
    Scalar qs{mpq_class(q)};
    for (size_t k = 0; k < h->cols(); ++k) {
      if (h->at(j, k).is_zero()) continue;
      h->at(i, k) -= qs * h->at(j, k);
    }
    if (b) b->add_multiple_of_column(j, i, q);
    if (y) {
      for (size_t r = 0; r < y->rows(); ++r) {
        if (y->at(r, i).is_zero()) continue;
        y->at(r, j) += qs * y->at(r, i);
      }
    }
    log.push_back(ElementaryOp::row_sub(i, j, q));
  }

  void row_swap(size_t i, size_t j) {
    h->swap_rows(i, j);
    if (b) b->swap_cols(i, j);
    if (y) y->swap_cols(i, j);
    log.push_back(ElementaryOp::row_swap(i, j));
  }
};

}  // namespace

ReducingMatrix reduce_and_update(Mat& h, size_t t, IntMat* b, Mat* y, const ZeroPolicy& policy) {
  size_t n = h.rows();
  size_t w = h.cols();
  if (w != n - t) throw Error(Errc::InvalidArgument, "H must be n x (n-t)");
  for (size_t j = 0; j < w; ++j)
    if (policy.is_zero(h.at(j, j)))
      throw Error(Errc::SingularDiagonal, "H has an effectively zero diagonal entry");

  OpSink sink{&h, b, y, {}};

  // Size reduction: quotients are taken against the current (partially
  // reduced) entries, which is what makes the half bound hold.
  for (size_t i = 1; i < n; ++i) {
    size_t jtop = std::min(i, w);  // i <= n-t: columns 0..i-1; below: all
    for (size_t j = jtop; j-- > 0;) {
      mpz_class q = nearest_integer(h.at(i, j) / h.at(j, j));
      if (q != 0) sink.row_sub(i, j, q);
    }
  }

  // Stable zero-suffix pass on column n-t (0-based w-1) below the
  // trapezoid: nonzero entries bubble above zero ones, keeping the
  // relative order within each group.
  if (w >= 1 && n > w) {
    std::vector<size_t> order;  // row indices n-t .. n-1 in target order
    for (size_t s = w; s < n; ++s)
      if (!policy.is_zero(h.at(s, w - 1))) order.push_back(s);
    size_t nonzero_count = order.size();
    for (size_t s = w; s < n; ++s)
      if (policy.is_zero(h.at(s, w - 1))) order.push_back(s);
    if (nonzero_count > 0 && nonzero_count < n - w) {
      // Realize the permutation with swaps (cycle decomposition).
      std::vector<size_t> cur(n - w);
      for (size_t k = 0; k < n - w; ++k) cur[k] = w + k;  // cur[pos] = row now there
      std::vector<size_t> pos(n);                         // row -> position offset
      for (size_t k = 0; k < n - w; ++k) pos[cur[k]] = k;
      for (size_t k = 0; k < n - w; ++k) {
        size_t want = order[k];
        if (cur[k] == want) continue;
        size_t from = pos[want];
        sink.row_swap(w + k, w + from);
        std::swap(pos[cur[k]], pos[want]);
        std::swap(cur[k], cur[from]);
      }
    }
  }

  return ReducingMatrix(n, std::move(sink.log));
}

ReducingMatrix generalized_hermite_reduce(const Mat& h, size_t t, const ZeroPolicy& policy) {
  Mat scratch = h;
  return reduce_and_update(scratch, t, nullptr, nullptr, policy);
}

void apply_update(Mat& h, IntMat& b, Mat& y, const ReducingMatrix& d) {
  d.apply_left(h);
  d.apply_inverse_right(b);
  d.apply_inverse_right(y);
}

}  // namespace sird
