#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "forestcalc/fermion.hpp"
#include "forestcalc/forest.hpp"
#include "forestcalc/gaussian_cluster.hpp"
#include "forestcalc/matrix.hpp"
#include "forestcalc/series.hpp"

namespace forestcalc {

using json = nlohmann::json;

/// Rationals travel as "p/q" strings; integers are accepted on input.
json to_json(const Rational& q);
Rational rational_from_json(const json& j);

json to_json(const RationalMatrix& m);
RationalMatrix matrix_from_json(const json& j);

json to_json(const FormalSeries& s);
/// Links as 1-based vertex pairs.
json to_json(const std::vector<Link>& links);

json read_json_file(const std::string& path);

/// {"boxes": n, "covariance": [[...]], "order": p}; `order` overrides the file.
BoxModel box_model_from_json(const json& j, std::optional<int> order = std::nullopt);

struct PropagatorFile {
  RationalMatrix covariance;
  std::optional<GramFactorization> factorization;
};

/// {"covariance": [[...]], "factorization": {"D": [[...]], "E": [[...]]}} with C = D E^T.
PropagatorFile propagator_from_json(const json& j);

} // namespace forestcalc
