#pragma once

#include <cstdint>

#include "sird/linalg.hpp"

namespace sird {

/// Deterministic PRNG (splitmix64) so seeded runs are byte-identical
/// across platforms; standard-library distributions are not.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next();
  /// Uniform in [lo, hi], inclusive, by rejection.
  long uniform(long lo, long hi);

 private:
  uint64_t state_;
};

struct PlantedInstance {
  Mat x;                      // n x t exact-rational matrix with X^T m = 0
  std::vector<mpz_class> m;   // the planted relation
  mpz_class m_norm_sq;        // ||m||_2^2
};

/// Samples m with entries uniform in [-height, height] (nonzero vector),
/// then builds t independent integer columns inside the nullspace of m^T
/// from random combinations of a kernel basis.
PlantedInstance make_planted(Rng& rng, size_t n, size_t t, long height = 10);

}  // namespace sird
