#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sird/planted.hpp>
#include <sird/sird.hpp>

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

std::vector<mpz_class> zvec(const std::vector<long>& v) {
  std::vector<mpz_class> r;
  for (long e : v) r.emplace_back(e);
  return r;
}

/// Synthetic state with a given diagonal, for exchange-rule checks.
DetectionState diag_state(const std::vector<const char*>& diag, const char* gamma) {
  size_t w = diag.size();
  size_t n = w + 1;  // t = 1
  DetectionState s;
  s.h.basis = Mat(n, w);
  s.h.norm_sq.assign(w, Scalar(1));
  for (size_t j = 0; j < w; ++j) s.h.basis.at(j, j) = Scalar::parse(diag[j], Mode::Exact);
  s.b = IntMat::identity(n);
  s.y = Mat(1, n);
  s.gamma = Scalar::parse(gamma, Mode::Exact);
  s.policy = ZeroPolicy::exact();
  s.floor_policy = ZeroPolicy::exact();
  s.x_original = Mat(n, 1);
  s.x_work = Mat(n, 1);
  s.perm = IndexPermutation::identity(n);
  return s;
}

mpz_class norm_sq(const std::vector<mpz_class>& m) {
  mpz_class s = 0;
  for (const auto& e : m) s += e * e;
  return s;
}

}  // namespace

TEST_CASE("initialize: worked instance and trivial cases") {
  // columns (11,27,31), (1,2,3): conservation X^T B H = 0 exactly
  Mat x = exact_cols({{11, 27, 31}, {1, 2, 3}});
  DetectionConfig cfg;
  DetectionState s = initialize(x, cfg);
  CHECK(s.h.basis.rows() == 3);
  CHECK(s.h.basis.cols() == 1);
  Mat prod = s.x_work.transpose().mul(s.b.to_mat(Mode::Exact, 64)).mul(s.h.basis);
  for (size_t i = 0; i < prod.rows(); ++i)
    for (size_t j = 0; j < prod.cols(); ++j) CHECK(prod.at(i, j).is_zero());

  // X = (0,1): H = (1,0), B = I
  DetectionState s2 = initialize(exact_cols({{0, 1}}), cfg);
  CHECK(s2.perm.is_identity());
  CHECK(s2.h.basis.at(0, 0) == Scalar(1));
  CHECK(s2.h.basis.at(1, 0).is_zero());
  CHECK(s2.b.at(0, 0) == 1);
  CHECK(s2.b.at(0, 1) == 0);

  // X = (1,0): permutation recorded; detected relation maps back via C^T
  DetectionState s3 = initialize(exact_cols({{1, 0}}), cfg);
  CHECK_FALSE(s3.perm.is_identity());
  auto cand = check_termination(s3);
  REQUIRE(cand.has_value());
  CHECK(cand->relation == zvec({0, 1}));  // (0,1) annihilates (1,0)
}

TEST_CASE("config validation") {
  DetectionConfig cfg;
  cfg.gamma = Scalar::parse("1.1547", Mode::Exact);  // below 2/sqrt(3)
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.gamma = Scalar::parse("1.15470053837926", Mode::Exact);  // just above
  cfg.validate();
  cfg.mode = Mode::Exact;
  cfg.zero_threshold = Scalar(mpq_class(1, 100));
  CHECK_THROWS_AS(cfg.validate(), Error);  // exact mode must keep threshold 0
}

TEST_CASE("exchange rule: weighted argmax with smallest-index ties") {
  {
    DetectionState s = diag_state({"0.9", "0.1"}, "2");
    CHECK(exchange_step(s) == 0);  // 2*0.9 > 4*0.1
  }
  {
    DetectionState s = diag_state({"0.1", "0.9"}, "2");
    CHECK(exchange_step(s) == 1);
  }
  {
    // gamma*0.5 == gamma^2*0.25 at gamma = 2: tie -> smallest index
    DetectionState s = diag_state({"0.5", "0.25"}, "2");
    CHECK(exchange_step(s) == 0);
  }
}

TEST_CASE("exchange swaps rows of H and columns of B and Y") {
  DetectionState s = diag_state({"0.1", "0.9"}, "2");
  s.h.basis.at(1, 0) = Scalar::parse("0.05", Mode::Exact);
  s.h.basis.at(2, 0) = Scalar::parse("0.01", Mode::Exact);
  s.y.at(0, 1) = Scalar(7);
  size_t r = exchange_step(s);
  CHECK(r == 1);
  // rows 1,2 of H swapped
  CHECK(s.h.basis.at(2, 1) == Scalar::parse("0.9", Mode::Exact));
  CHECK(s.h.basis.at(1, 1).is_zero());
  CHECK(s.y.at(0, 2) == Scalar(7));
  CHECK(s.b.at(1, 2) == 1);
}

TEST_CASE("corner rotation: displayed 2x2 product") {
  // Pre-swap corner block [[alpha, 0], [beta, lambda]] = [[1, 0], [0.5, 0.5]].
  // After swap + rotation: [[delta, 0], [alpha beta/delta, -alpha lambda/delta]]
  // with delta = sqrt(0.5).
  DetectionState s = diag_state({"1", "0.5"}, "2");
  s.h.basis.at(1, 0) = Scalar::parse("0.5", Mode::Exact);
  s.h.basis.swap_rows(0, 1);  // mimic the exchange at r = 0
  s.b.swap_cols(0, 1);
  s.y.swap_cols(0, 1);
  corner_step(s, 0);
  CHECK(s.h.diag_squared(0) == Scalar(mpq_class(1, 2)));  // delta^2
  CHECK(s.h.basis.at(0, 1).is_zero());                    // trapezoid restored
  Scalar h10_sq = s.h.basis.at(1, 0) * s.h.basis.at(1, 0) / s.h.norm_sq[0];
  CHECK(h10_sq == Scalar(mpq_class(1, 2)));      // (alpha beta / delta)^2
  CHECK(s.h.diag_squared(1) == Scalar(mpq_class(1, 2)));  // (alpha lambda / delta)^2
  CHECK(s.h.basis.at(1, 0).sign() > 0);
  CHECK(s.h.basis.at(1, 1).sign() < 0);  // -alpha lambda / delta
}

TEST_CASE("corner: r = n-t leaves H unchanged") {
  DetectionState s = diag_state({"0.5", "0.25"}, "2");
  Mat before = s.h.basis;
  corner_step(s, 1);  // r = n-t-1 in 0-based indexing
  for (size_t i = 0; i < before.rows(); ++i)
    for (size_t j = 0; j < before.cols(); ++j) CHECK(s.h.basis.at(i, j) == before.at(i, j));
}

TEST_CASE("corner with lambda = 0 keeps trapezoidal form") {
  // Post-swap block [[beta, 0], [alpha, 0]]: delta = |beta|, rotation is
  // identity or a sign flip.
  DetectionState s = diag_state({"0.5", "0"}, "2");
  s.h.basis.at(1, 0) = Scalar(1);  // alpha below
  s.h.basis.at(1, 1) = Scalar(0);
  corner_step(s, 0);
  CHECK(s.h.basis.at(0, 1).is_zero());
  CHECK(s.h.diag_squared(0) == Scalar(mpq_class(1, 4)));  // delta = |beta| = 0.5
}

TEST_CASE("degenerate corner is reported") {
  DetectionState s = diag_state({"0", "1"}, "2");
  s.h.basis.at(0, 0) = Scalar(0);  // beta
  s.h.basis.at(0, 1) = Scalar(0);  // lambda
  s.h.basis.at(1, 0) = Scalar(1);  // alpha
  CHECK_THROWS_AS(corner_step(s, 0), Error);
}

TEST_CASE("worked instance terminates in two iterations") {
  Mat x = exact_cols({{11, 27, 31}, {1, 2, 3}});
  DetectionConfig cfg;
  auto out = detect(x, cfg);
  REQUIRE(out.kind == OutcomeKind::Relation);
  CHECK(out.relation == zvec({19, -2, -5}));
  CHECK(out.iterations == 2);
  CHECK(verify_relation(x, out.relation, ZeroPolicy::exact()));
}

TEST_CASE("check_termination: fresh state on relation-free directions") {
  // (1, sqrt(2)-ish at high precision) has no small relation; a fresh
  // state reports nothing.
  Mat x(2, 1);
  x.at(0, 0) = Scalar(1);
  x.at(1, 0) = Scalar::parse("1.41421356237309504880168872420969807857", Mode::Exact);
  DetectionConfig cfg;
  DetectionState s = initialize(x, cfg);
  CHECK_FALSE(check_termination(s).has_value());
}

TEST_CASE("planted instances: exact detection with theorem bounds") {
  Rng rng(101);
  for (int trial = 0; trial < 25; ++trial) {
    size_t n = static_cast<size_t>(rng.uniform(3, 6));
    size_t t = static_cast<size_t>(rng.uniform(1, 2));
    auto inst = make_planted(rng, n, t, 10);

    DetectionConfig cfg;  // exact, gamma = 2
    DetectionState s = initialize(inst.x, cfg);
    Scalar planted_norm_sq{mpq_class(inst.m_norm_sq)};
    Scalar contraction_bound = Scalar(mpq_class(1, 4)) + Scalar(1) / (cfg.gamma * cfg.gamma);

    std::optional<TerminationCandidate> cand = check_termination(s);
    uint64_t cap = iteration_cap(n, t, cfg.gamma,
                                 Scalar(BigFloat::from_mpz(inst.m_norm_sq, 96).sqrt()) + Scalar(1));
    while (!cand) {
      // Theorem: G is a lower bound for every relation norm.
      auto g = s.g_squared();
      REQUIRE(g.has_value());
      CHECK(*g <= planted_norm_sq);
      REQUIRE(s.iteration < cap);
      IterationInfo info = iterate_once(s);
      if (info.contraction_sq) CHECK(*info.contraction_sq <= contraction_bound);
      // Lemma: a vanished diagonal can only sit at position n-t.
      for (size_t j = 0; j + 1 < s.width(); ++j) CHECK_FALSE(s.h.basis.at(j, j).is_zero());
      cand = check_termination(s);
    }
    CHECK(verify_relation(inst.x, cand->relation, ZeroPolicy::exact()));
    // Theorem: detected norm <= gamma^(n-t-1) * lambda(X).
    mpz_class found_sq = norm_sq(cand->relation);
    mpz_class limit = inst.m_norm_sq;
    for (size_t k = 0; k + t + 1 < n; ++k) limit *= 4;  // gamma^2 = 4 per step
    CHECK(found_sq <= limit);
  }
}

TEST_CASE("float mode finds exact relations on planted instances") {
  Rng rng(103);
  for (int trial = 0; trial < 12; ++trial) {
    size_t n = static_cast<size_t>(rng.uniform(3, 6));
    size_t t = static_cast<size_t>(rng.uniform(1, 2));
    auto inst = make_planted(rng, n, t, 10);
    DetectionConfig cfg;
    cfg.mode = Mode::Float;
    cfg.precision = 128;
    auto out = detect(inst.x, cfg);
    REQUIRE(out.kind == OutcomeKind::Relation);
    CHECK(verify_relation(inst.x, out.relation, ZeroPolicy::exact()));  // exact, not approximate
  }
}

TEST_CASE("gamma sensitivity instance returns verified relations") {
  Mat x = exact_cols({{86, 6, 8, 673}, {83, 5, 87, 91}});
  DetectionConfig lo, hi;
  lo.gamma = Scalar::parse("1.16", Mode::Exact);
  hi.gamma = Scalar::parse("5", Mode::Exact);
  auto out_lo = detect(x, lo);
  auto out_hi = detect(x, hi);
  REQUIRE(out_lo.kind == OutcomeKind::Relation);
  REQUIRE(out_hi.kind == OutcomeKind::Relation);
  CHECK(verify_relation(x, out_lo.relation, ZeroPolicy::exact()));
  CHECK(verify_relation(x, out_hi.relation, ZeroPolicy::exact()));
  CHECK(out_hi.iterations < out_lo.iterations);
}

TEST_CASE("norm bound exit: no relation below 10^6 for (1, sqrt 2)") {
  Mat x(2, 1);
  x.at(0, 0) = Scalar(1);
  x.at(1, 0) = Scalar::parse(
      "1.4142135623730950488016887242096980785696718753769480731766797379907324784621",
      Mode::Exact);
  DetectionConfig cfg;
  cfg.norm_bound = Scalar::parse("1000000", Mode::Exact);
  auto out = detect(x, cfg);
  CHECK(out.kind == OutcomeKind::BoundExceeded);
  CHECK(out.bound_sq > Scalar(mpq_class(mpz_class("1000000000000"))));  // G > 10^6
}

TEST_CASE("iteration cap outcome") {
  Mat x(2, 1);
  x.at(0, 0) = Scalar(1);
  x.at(1, 0) = Scalar::parse("1.4142135623730950488016887242096980785696", Mode::Exact);
  DetectionConfig cfg;
  cfg.max_iterations = 3;
  auto out = detect(x, cfg);
  CHECK(out.kind == OutcomeKind::IterationCapReached);
  CHECK(out.iterations == 3);
}

TEST_CASE("iteration_cap formula") {
  // gamma=2, n=3, t=2, lambda=sqrt(390): 4*log2(2*sqrt(390)) rounded up = 22
  Scalar lam(BigFloat::from_long(390, 128).sqrt());
  CHECK(iteration_cap(3, 2, Scalar(2), lam) == 22);
  // positivity at lambda = 1
  CHECK(iteration_cap(5, 2, Scalar(2), Scalar(1)) >= 1);
  // blows up as gamma approaches 2/sqrt(3) from above
  uint64_t near = iteration_cap(4, 1, Scalar::parse("1.1547005383792516", Mode::Exact), Scalar(100));
  uint64_t far = iteration_cap(4, 1, Scalar(2), Scalar(100));
  CHECK(near > 100 * far);
  CHECK_THROWS_AS(iteration_cap(4, 1, Scalar::parse("1.15470053837925", Mode::Exact), Scalar(100)),
                  Error);  // at/below 2/sqrt(3)
  CHECK_THROWS_AS(iteration_cap(4, 1, Scalar(2), Scalar(mpq_class(1, 2))), Error);  // lambda < 1
}

TEST_CASE("verify_relation") {
  Mat x = exact_cols({{11, 27, 31}, {1, 2, 3}});
  CHECK(verify_relation(x, zvec({-19, 2, 5}), ZeroPolicy::exact()));
  CHECK_FALSE(verify_relation(x, zvec({1, 1, 1}), ZeroPolicy::exact()));
  CHECK_THROWS_AS(verify_relation(x, zvec({0, 0, 0}), ZeroPolicy::exact()), Error);
}

TEST_CASE("permutation transparency") {
  Rng rng(107);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = make_planted(rng, 4, 1, 8);
    DetectionConfig cfg;
    auto out = detect(inst.x, cfg);
    REQUIRE(out.kind == OutcomeKind::Relation);

    // Apply a fixed row rotation C and detect again.
    std::vector<size_t> src{1, 2, 3, 0};
    IndexPermutation c(src);
    Mat cx = c.apply_rows(inst.x);
    auto out2 = detect(cx, cfg);
    REQUIRE(out2.kind == OutcomeKind::Relation);
    // A relation for CX maps back through C^T to a relation for X, with
    // identical (zero) residuals in exact mode.
    CHECK(verify_relation(inst.x, c.map_back(out2.relation), ZeroPolicy::exact()));
    CHECK(verify_relation(cx, out2.relation, ZeroPolicy::exact()));
  }
}

TEST_CASE("detect_complex") {
  DetectionConfig cfg;
  // z = (1, i, -1) -> (1, 0, 1)
  auto out = detect_complex({{mpq_class(1), mpq_class(0)},
                             {mpq_class(0), mpq_class(1)},
                             {mpq_class(-1), mpq_class(0)}},
                            cfg);
  REQUIRE(out.kind == OutcomeKind::Relation);
  CHECK(out.relation == zvec({1, 0, 1}));

  // real z behaves exactly like detect on the real part
  std::vector<ComplexRational> zr{{mpq_class(11), mpq_class(0)},
                                  {mpq_class(27), mpq_class(0)},
                                  {mpq_class(31), mpq_class(0)}};
  auto out_r = detect_complex(zr, cfg);
  auto out_d = detect(exact_cols({{11, 27, 31}}), cfg);
  REQUIRE(out_r.kind == OutcomeKind::Relation);
  CHECK(out_r.relation == out_d.relation);
  CHECK(out_r.iterations == out_d.iterations);

  // z = (1, a, a^2) for a = 2 + sqrt(3) i at five digits -> (7, -4, 1)
  ComplexRational a = parse_complex("2.00000+1.73205i");
  ComplexRational one{mpq_class(1), mpq_class(0)};
  DetectionConfig cf;
  cf.mode = Mode::Float;
  cf.precision = 128;
  cf.zero_threshold = Scalar::parse("1e-7", Mode::Float, 128);
  auto outc = detect_complex({one, a, a.mul(a)}, cf);
  REQUIRE(outc.kind == OutcomeKind::Relation);
  CHECK(outc.relation == zvec({7, -4, 1}));

  CHECK_THROWS_AS(detect_complex({}, cfg), Error);
  CHECK_THROWS_AS(detect_complex({{mpq_class(0), mpq_class(0)}}, cfg), Error);
}

TEST_CASE("outcome bound decimal rendering") {
  Mat x = exact_cols({{11, 27, 31}, {1, 2, 3}});
  DetectionConfig cfg;
  auto out = detect(x, cfg);
  // final bound for this instance is sqrt(390) = 19.7484...
  CHECK(out.bound_decimal(6).substr(0, 7) == "19.7484");
}
