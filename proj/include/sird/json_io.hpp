#pragma once

#include <string>

#include <json.hpp>

#include "sird/linalg.hpp"
#include "sird/polynomial.hpp"

namespace sird {

using nlohmann::json;

/// {"rows": n, "cols": t, "data": [[entry, ...], ...]} row-major; entries
/// are decimal strings, or "p/q" for non-terminating exact rationals.
json mat_to_json(const Mat& m);
Mat mat_from_json(const json& j, Mode mode, mpfr_prec_t prec);

/// {"vectors": [[entry, ...], ...]}: each inner array is one x_i of
/// length n; parsed as the columns of an n x t matrix.
Mat vectors_from_json(const json& j, Mode mode, mpfr_prec_t prec);

/// {"coeffs": [integer-string, ...]} ascending by degree.
json poly_to_json(const IntPolynomial& p);
IntPolynomial poly_from_json(const json& j);

json relation_to_json(const std::vector<mpz_class>& m);

}  // namespace sird
