#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sird/json_io.hpp>
#include <sird/planted.hpp>

using namespace sird;

TEST_CASE("matrix serialization round-trips") {
  Mat m(2, 2);
  m.at(0, 0) = Scalar(mpq_class(1, 3));
  m.at(0, 1) = Scalar(5);
  m.at(1, 0) = Scalar(mpq_class(-7, 2));
  m.at(1, 1) = Scalar(0);
  json j = mat_to_json(m);
  CHECK(j["rows"] == 2);
  CHECK(j["cols"] == 2);
  CHECK(j["data"][0][0] == "1/3");
  Mat back = mat_from_json(j, Mode::Exact, 64);
  for (size_t i = 0; i < 2; ++i)
    for (size_t k = 0; k < 2; ++k) CHECK(back.at(i, k) == m.at(i, k));
  // Serialization is idempotent after the first round trip.
  CHECK(mat_to_json(back) == j);
}

TEST_CASE("float matrices round-trip at full precision") {
  Mat m(1, 2);
  m.at(0, 0) = Scalar(BigFloat::from_mpq(mpq_class(1, 3), 128));
  m.at(0, 1) = Scalar(BigFloat::from_mpq(mpq_class(22, 7), 128));
  json j = mat_to_json(m);
  Mat back = mat_from_json(j, Mode::Float, 128);
  CHECK(back.at(0, 0) == m.at(0, 0));
  CHECK(back.at(0, 1) == m.at(0, 1));
}

TEST_CASE("vectors input format") {
  json j = json::parse(R"({"vectors": [["11", "27", "31"], ["1", "2", "3"]]})");
  Mat x = vectors_from_json(j, Mode::Exact, 64);
  CHECK(x.rows() == 3);
  CHECK(x.cols() == 2);
  CHECK(x.at(2, 0) == Scalar(31));
  CHECK(x.at(1, 1) == Scalar(2));

  // plain integers are accepted too
  json j2 = json::parse(R"({"vectors": [[11, 27, 31]]})");
  CHECK(vectors_from_json(j2, Mode::Exact, 64).at(0, 0) == Scalar(11));

  CHECK_THROWS_AS(vectors_from_json(json::parse(R"({"vectors": []})"), Mode::Exact, 64), Error);
  CHECK_THROWS_AS(vectors_from_json(json::parse(R"({"vectors": [["1"], ["1", "2"]]})"), Mode::Exact, 64),
                  Error);
  CHECK_THROWS_AS(vectors_from_json(json::parse(R"({})"), Mode::Exact, 64), Error);
}

TEST_CASE("polynomial serialization") {
  auto p = IntPolynomial::from_longs({7, -4, 1});
  json j = poly_to_json(p);
  CHECK(j["coeffs"][0] == "7");
  CHECK(poly_from_json(j) == p);
  CHECK(poly_from_json(json::parse(R"({"coeffs": [6, 0, -5, 0, 1]})")) ==
        IntPolynomial::from_longs({6, 0, -5, 0, 1}));
  CHECK(poly_from_json(json::parse(R"(["1", "2"])")) == IntPolynomial::from_longs({1, 2}));
  CHECK_THROWS_AS(poly_from_json(json::parse(R"({"coeffs": ["x"]})")), Error);
}

TEST_CASE("relation serialization") {
  std::vector<mpz_class> m{19, -2, -5};
  json j = relation_to_json(m);
  CHECK(j == json::parse(R"(["19", "-2", "-5"])"));
}
