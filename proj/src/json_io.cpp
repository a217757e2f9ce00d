#include "forestcalc/json_io.hpp"

#include "forestcalc/errors.hpp"

#include <fstream>

namespace forestcalc {

json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
  throw ValidationError("expected a rational as a \"p/q\" string or an integer, got " + j.dump());
}

json to_json(const RationalMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

RationalMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("expected a nonempty array of rows");
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  if (cols == 0) throw ValidationError("matrix rows must be nonempty arrays");
  RationalMatrix m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ValidationError("matrix rows must have equal length");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = rational_from_json(j[i][k]);
  }
  return m;
}

json to_json(const FormalSeries& s) {
  json out = json::array();
  for (const auto& c : s.coefficients()) out.push_back(to_json(c));
  return out;
}

json to_json(const std::vector<Link>& links) {
  json out = json::array();
  for (const auto& l : links) out.push_back({l.a + 1, l.b + 1});
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

BoxModel box_model_from_json(const json& j, std::optional<int> order) {
  if (!j.is_object() || !j.contains("covariance")) throw ValidationError("model needs a \"covariance\" field");
  BoxModel m;
  m.covariance = matrix_from_json(j.at("covariance"));
  if (j.contains("boxes") && j.at("boxes").get<int>() != m.boxes())
    throw ValidationError("\"boxes\" does not match the covariance size");
  if (order) m.order = *order;
  else if (j.contains("order")) m.order = j.at("order").get<int>();
  m.validate();
  return m;
}

PropagatorFile propagator_from_json(const json& j) {
  if (!j.is_object() || !j.contains("covariance")) throw ValidationError("propagator needs a \"covariance\" field");
  PropagatorFile p;
  p.covariance = matrix_from_json(j.at("covariance"));
  if (j.contains("factorization")) {
    const auto& f = j.at("factorization");
    auto d = matrix_from_json(f.at("D"));
    auto e = matrix_from_json(f.at("E"));
    GramFactorization g;
    for (std::size_t i = 0; i < d.rows(); ++i) {
      std::vector<Rational> row(d.cols());
      for (std::size_t k = 0; k < d.cols(); ++k) row[k] = d(i, k);
      g.f.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < e.rows(); ++i) {
      std::vector<Rational> row(e.cols());
      for (std::size_t k = 0; k < e.cols(); ++k) row[k] = e(i, k);
      g.g.push_back(std::move(row));
    }
    p.factorization = std::move(g);
  }
  return p;
}

} // namespace forestcalc
