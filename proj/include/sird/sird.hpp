#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sird/reduction.hpp"

namespace sird {

/// Configuration for one detection run. gamma must be strictly greater
/// than 2/sqrt(3); the default 2 keeps every comparison rational in
/// exact mode.
struct DetectionConfig {
  Scalar gamma{2};
  Mode mode = Mode::Exact;
  mpfr_prec_t precision = 128;
  /// Zero-detection threshold override. Defaults: 0 in exact mode,
  /// 2^-(p-20) in float(p) mode.
  std::optional<Scalar> zero_threshold;
  /// Stop with BoundExceeded once the certified lower bound G passes this.
  std::optional<Scalar> norm_bound;
  /// Hard iteration cap; if unset and lambda_guess is given, the
  /// worst-case iteration formula for that least-norm guess is used.
  std::optional<uint64_t> max_iterations;
  std::optional<Scalar> lambda_guess;

  /// Detection policy: screens Y columns and verifies candidates.
  ZeroPolicy policy() const;
  /// Structural policy: guards divisions (diagonals, pivots, corner
  /// denominators). Always 0 in exact mode and 2^-(p-20) in float mode,
  /// independent of any zero_threshold override.
  ZeroPolicy floor_policy() const;
  void validate() const;
};

/// Worst-case number of iterations for a relation of Euclidean norm at
/// most lambda: ceil([C(n,2)-C(t,2)] * log(gamma^(n-t) * lambda) /
/// ((1/2) * log(4 gamma^2 / (gamma^2 + 4)))).
uint64_t iteration_cap(size_t n, size_t t, const Scalar& gamma, const Scalar& lambda);

/// The evolving (Y, H, B) triple plus bookkeeping. Row/column indices
/// are 0-based throughout.
struct DetectionState {
  Mat x_original;          // as supplied by the caller (any mode)
  IndexPermutation perm;   // C applied at intake
  Mat x_work;              // C * X in run arithmetic, n x t
  Hyperplane h;            // n x (n-t), homogeneous representation
  IntMat b;                // n x n unimodular
  Mat y;                   // t x n, equals x_work^T * B
  Scalar gamma;
  ZeroPolicy policy;        // detection threshold (Y screen, verification)
  ZeroPolicy floor_policy;  // structural zero floor (divisions, diagonals)
  uint64_t iteration = 0;
  Scalar best_bound_sq{0};  // running max of G^2 (0 = no bound yet)
  bool pending_diag_zero = false;
  Scalar x_fro;  // ||x_work||_F, cached for the scaled zero screen

  size_t n() const { return x_work.rows(); }
  size_t t() const { return x_work.cols(); }
  size_t width() const { return h.cols(); }  // n - t

  /// Current G^2 = 1 / max_j h_jj^2; nullopt if the max diagonal is
  /// effectively zero (terminal configuration).
  std::optional<Scalar> g_squared() const;
};

enum class OutcomeKind { Relation, BoundExceeded, IterationCapReached };
enum class RelationSource { ZeroColumn, DiagonalZero };

struct DetectionOutcome {
  OutcomeKind kind;
  std::vector<mpz_class> relation;  // nonempty iff kind == Relation
  RelationSource source = RelationSource::ZeroColumn;
  uint64_t iterations = 0;
  Scalar bound_sq{0};  // best certified G^2 at exit

  std::string bound_decimal(size_t significant_digits = 20) const;
};

struct IterationInfo {
  size_t r;  // exchange index chosen this iteration (0-based)
  /// (h_rr,new / h_rr,old)^2 when a corner rotation ran (r < n-t-1).
  std::optional<Scalar> contraction_sq;
};

DetectionState initialize(const Mat& x, const DetectionConfig& config);

/// Chooses r maximizing gamma^(r+1) |h_rr| (smallest index on ties) and
/// swaps rows r, r+1 of H and columns r, r+1 of B and Y. Returns r.
size_t exchange_step(DetectionState& s);

/// Restores lower trapezoidal form after an exchange at r < n-t-1 by a
/// two-column rotation; no-op for r = n-t-1.
void corner_step(DetectionState& s, size_t r);

/// One full loop body: exchange, corner, reduction with fused updates,
/// bound bookkeeping. Skips the reduction when the trailing diagonal
/// entry became (effectively) zero, leaving termination to report it.
IterationInfo iterate_once(DetectionState& s);

struct TerminationCandidate {
  std::vector<mpz_class> relation;  // mapped back through C^T, sign-normalized
  RelationSource source;
};

/// Scans Y for an effectively zero column and the trailing diagonal for
/// an effective zero; any candidate is re-verified against the original
/// input before being accepted.
std::optional<TerminationCandidate> check_termination(const DetectionState& s);

DetectionOutcome detect(const Mat& x, const DetectionConfig& config);

/// Integer relation in Z^n for a complex vector: splits z into real and
/// imaginary parts and runs detection on the nonzero parts (t = 2 when
/// both are present).
DetectionOutcome detect_complex(const std::vector<ComplexRational>& z, const DetectionConfig& config);

/// True iff m annihilates every column of X0: exactly when the zero
/// threshold is 0, else within threshold * ||X0||_F * ||m||_2.
bool verify_relation(const Mat& x0, const std::vector<mpz_class>& m, const ZeroPolicy& policy);

/// Flips m so its first nonzero entry is positive.
void sign_normalize(std::vector<mpz_class>& m);

}  // namespace sird
