#include "sird/json_io.hpp"

namespace sird {

json mat_to_json(const Mat& m) {
  json data = json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).serialize());
    data.push_back(std::move(row));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Mat mat_from_json(const json& j, Mode mode, mpfr_prec_t prec) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw Error(Errc::ParseError, "matrix JSON needs rows, cols, data");
  size_t rows = j.at("rows").get<size_t>();
  size_t cols = j.at("cols").get<size_t>();
  const json& data = j.at("data");
  if (!data.is_array() || data.size() != rows)
    throw Error(Errc::ParseError, "matrix data has the wrong number of rows");
  Mat m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    const json& row = data.at(i);
    if (!row.is_array() || row.size() != cols)
      throw Error(Errc::ParseError, "matrix data has a ragged row");
    for (size_t k = 0; k < cols; ++k)
      m.at(i, k) = Scalar::parse(row.at(k).get<std::string>(), mode, prec);
  }
  return m;
}

Mat vectors_from_json(const json& j, Mode mode, mpfr_prec_t prec) {
  if (!j.is_object() || !j.contains("vectors"))
    throw Error(Errc::ParseError, "input JSON needs a \"vectors\" array");
  const json& vecs = j.at("vectors");
  if (!vecs.is_array() || vecs.empty())
    throw Error(Errc::ParseError, "\"vectors\" must be a nonempty array");
  std::vector<std::vector<Scalar>> cols;
  size_t n = 0;
  for (const json& v : vecs) {
    if (!v.is_array() || v.empty()) throw Error(Errc::ParseError, "each vector must be a nonempty array");
    if (n == 0) n = v.size();
    if (v.size() != n) throw Error(Errc::ParseError, "vectors must share one length");
    std::vector<Scalar> col;
    col.reserve(n);
    for (const json& e : v) {
      if (e.is_string())
        col.push_back(Scalar::parse(e.get<std::string>(), mode, prec));
      else if (e.is_number_integer())
        col.push_back(Scalar::parse(std::to_string(e.get<long long>()), mode, prec));
      else
        throw Error(Errc::ParseError, "vector entries must be decimal strings or integers");
    }
    cols.push_back(std::move(col));
  }
  return Mat::from_columns(cols);
}

json poly_to_json(const IntPolynomial& p) {
  json coeffs = json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back(c.get_str());
  return json{{"coeffs", std::move(coeffs)}};
}

IntPolynomial poly_from_json(const json& j) {
  const json* coeffs = nullptr;
  if (j.is_array())
    coeffs = &j;
  else if (j.is_object() && j.contains("coeffs") && j.at("coeffs").is_array())
    coeffs = &j.at("coeffs");
  else
    throw Error(Errc::ParseError, "polynomial JSON needs a \"coeffs\" array");
  std::vector<mpz_class> c;
  for (const json& e : *coeffs) {
    if (e.is_string()) {
      mpz_class v;
      if (mpz_set_str(v.get_mpz_t(), e.get<std::string>().c_str(), 10) != 0)
        throw Error(Errc::ParseError, "bad integer coefficient: '" + e.get<std::string>() + "'");
      c.push_back(std::move(v));
    } else if (e.is_number_integer()) {
      c.emplace_back(static_cast<long>(e.get<long long>()));
    } else {
      throw Error(Errc::ParseError, "coefficients must be integer strings or integers");
    }
  }
  return IntPolynomial(std::move(c));
}

json relation_to_json(const std::vector<mpz_class>& m) {
  json r = json::array();
  for (const auto& e : m) r.push_back(e.get_str());
  return r;
}

}  // namespace sird
