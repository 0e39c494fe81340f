#include "sird/planted.hpp"

namespace sird {

uint64_t Rng::next() {
  // splitmix64
  uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

long Rng::uniform(long lo, long hi) {
  if (lo > hi) throw Error(Errc::InvalidArgument, "bad uniform range");
  uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return lo + static_cast<long>(v % span);
}

namespace {

/// Exact rank of an integer matrix given as columns, by rational
/// Gaussian elimination.
size_t rank_of(const std::vector<std::vector<mpz_class>>& cols, size_t n) {
  std::vector<std::vector<mpq_class>> a(cols.size(), std::vector<mpq_class>(n));
  for (size_t j = 0; j < cols.size(); ++j)
    for (size_t i = 0; i < n; ++i) a[j][i] = cols[j][i];
  size_t rank = 0;
  for (size_t col = 0; col < n && rank < a.size(); ++col) {
    size_t pivot = rank;
    while (pivot < a.size() && sgn(a[pivot][col]) == 0) ++pivot;
    if (pivot == a.size()) continue;
    std::swap(a[rank], a[pivot]);
    for (size_t r = 0; r < a.size(); ++r) {
      if (r == rank || sgn(a[r][col]) == 0) continue;
      mpq_class f = a[r][col] / a[rank][col];
      for (size_t i = col; i < n; ++i) a[r][i] -= f * a[rank][i];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

PlantedInstance make_planted(Rng& rng, size_t n, size_t t, long height) {
  if (t == 0 || n <= t) throw Error(Errc::InvalidArgument, "need 0 < t < n");
  if (height < 1) throw Error(Errc::InvalidArgument, "height must be positive");

  PlantedInstance inst;
  while (true) {
    inst.m.assign(n, 0);
    bool nonzero = false;
    for (size_t i = 0; i < n; ++i) {
      inst.m[i] = rng.uniform(-height, height);
      nonzero |= (inst.m[i] != 0);
    }
    if (nonzero) break;
  }

  // Kernel basis of m^T: for each j != pivot, m[pivot] e_j - m[j] e_pivot.
  size_t pivot = 0;
  while (inst.m[pivot] == 0) ++pivot;
  std::vector<std::vector<mpz_class>> basis;
  for (size_t j = 0; j < n; ++j) {
    if (j == pivot) continue;
    std::vector<mpz_class> v(n, 0);
    v[j] = inst.m[pivot];
    v[pivot] = -inst.m[j];
    basis.push_back(std::move(v));
  }

  // Random small integer combinations until the t columns are independent.
  std::vector<std::vector<mpz_class>> cols;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    cols.clear();
    for (size_t c = 0; c < t; ++c) {
      std::vector<mpz_class> col(n, 0);
      bool nonzero = false;
      for (const auto& v : basis) {
        long coef = rng.uniform(-5, 5);
        if (coef == 0) continue;
        nonzero = true;
        for (size_t i = 0; i < n; ++i) col[i] += coef * v[i];
      }
      if (!nonzero) {
        for (size_t i = 0; i < n; ++i) col[i] = basis[c % basis.size()][i];
      }
      cols.push_back(std::move(col));
    }
    if (rank_of(cols, n) == t) break;
  }
  if (rank_of(cols, n) != t)
    throw Error(Errc::DegenerateInput, "failed to sample independent planted columns");

  inst.x = Mat(n, t);
  for (size_t j = 0; j < t; ++j)
    for (size_t i = 0; i < n; ++i) inst.x.at(i, j) = Scalar(cols[j][i]);

  inst.m_norm_sq = 0;
  for (const auto& e : inst.m) inst.m_norm_sq += e * e;
  return inst;
}

}  // namespace sird
