#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "forestcalc/combinatorics.hpp"
#include "forestcalc/forest.hpp"
#include "forestcalc/matrix.hpp"
#include "forestcalc/min_expression.hpp"
#include "forestcalc/series.hpp"

namespace forestcalc {

/// Gaussian vector phi in R^n, one component per box, with covariance C and
/// interaction lambda * sum_i phi_i^4. Series are truncated at `order` in lambda.
struct BoxModel {
  RationalMatrix covariance;
  int order = 2;

  int boxes() const { return static_cast<int>(covariance.rows()); }
  /// Symmetric, PSD (exact certificate) and within the size limits.
  void validate() const;
  /// Model restricted to the given boxes.
  BoxModel restricted(const Block& boxes) const;
};

/// <prod_i phi_i^{counts[i]}> under covariance c.
Rational wick_moment(const RationalMatrix& c, std::span<const int> counts);

/// Z = <exp(-lambda sum phi_i^4)> as a series in lambda.
FormalSeries partition_series(const BoxModel& model);

/// C(x): off-diagonal entry ij scaled by x_ij (x indexed as link_index), diagonal kept.
RationalMatrix interpolated_covariance(const RationalMatrix& c, std::span<const Rational> x);

/// C with every off-diagonal entry ij multiplied by min{w_l : l on the tree path i-j};
/// entries across clusters vanish. Upper triangle filled.
std::vector<std::vector<MinExpression>> weakened_covariance(const RationalMatrix& c, const Forest& forest);

/// Polymer activity A(Y): sum over trees on Y of the tree-line covariances
/// times the interpolated expectation of the differentiated interaction.
FormalSeries polymer_activity(const BoxModel& model, const Block& polymer);

struct PolymerActivitySeries {
  int boxes = 0;
  int order = 0;
  std::map<Block, FormalSeries> activities;

  const FormalSeries& at(const Block& y) const;
};

/// A(Y) for every nonempty subset Y of the boxes.
PolymerActivitySeries cluster_expansion(const BoxModel& model);

struct FactorizationReport {
  int boxes = 0;
  int order = 0;
  FormalSeries partition;
  FormalSeries polymer_sum;
  std::vector<Rational> residuals;
  std::size_t partitions = 0;

  bool ok() const;
};

/// Compares Z with the sum over set partitions of the boxes of prod A(Y_i).
FactorizationReport factorization_residuals(const BoxModel& model, const PolymerActivitySeries& activities);
/// Same, throwing IdentityFailure on the first order with a nonzero residual.
FactorizationReport verify_factorization(const BoxModel& model);

/// Coefficient of lambda^order in log Z for one box with unit covariance.
Rational zero_dim_connected_count(int order);

struct DecayRow {
  int size = 0;
  Rational coefficient;
  double magnitude = 0;
  /// |coefficient|^(1/size)
  double root = 0;
};

/// Leading coefficient (order |Y|) of A(Y) for the intervals Y = {0..s-1},
/// s = 2..max_size, under the chain covariance C_ij = r^|i-j|.
std::vector<DecayRow> activity_decay_table(const Rational& r, int max_size);

RationalMatrix chain_covariance(int n, const Rational& r);

} // namespace forestcalc
