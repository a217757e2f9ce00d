#include "forestcalc/gaussian_cluster.hpp"

#include "forestcalc/errors.hpp"
#include "forestcalc/limits.hpp"
#include "forestcalc/parallel.hpp"
#include "forestcalc/weakening.hpp"
#include "forestcalc/wick.hpp"

#include <cmath>
#include <sstream>

namespace forestcalc {

void BoxModel::validate() const {
  if (!covariance.square() || covariance.rows() == 0) throw ValidationError("covariance must be a nonempty square matrix");
  if (order < 0) throw ValidationError("series order must be nonnegative");
  require_within(boxes(), limits().cluster, "boxes in a Gaussian model");
  require_within(order, limits().order, "series order");
  if (!covariance.is_symmetric()) throw ValidationError("covariance must be symmetric");
  auto cert = is_positive_semidefinite(covariance);
  if (!cert.positive_semidefinite)
    throw ValidationError("covariance is not positive semidefinite (negative principal minor " +
                          to_string(cert.witness_minor) + ")");
}

BoxModel BoxModel::restricted(const Block& boxes) const {
  std::vector<std::size_t> idx(boxes.begin(), boxes.end());
  return BoxModel{covariance.submatrix(idx, idx), order};
}

namespace {

std::vector<std::vector<Rational>> entries_of(const RationalMatrix& c) {
  std::vector<std::vector<Rational>> e(c.rows(), std::vector<Rational>(c.cols()));
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) e[i][j] = c(i, j);
  return e;
}

Rational inverse_multinomial_weight(const std::vector<int>& beta) {
  Rational w = 1;
  for (int b : beta) w /= factorial(b);
  return w;
}

FormalSeries single_box_series(const Rational& c, int order) {
  FormalSeries z(order);
  // <phi^{4k}> = c^{2k} (4k-1)!!
  for (int k = 0; k <= order; ++k) {
    Rational m = 1;
    for (int f = 4 * k - 1; f > 1; f -= 2) m *= f;
    for (int p = 0; p < 2 * k; ++p) m *= c;
    z[k] = (k % 2 ? -m : m) / factorial(k);
  }
  return z;
}

} // namespace

Rational wick_moment(const RationalMatrix& c, std::span<const int> counts) {
  if (!c.square() || counts.size() != c.rows()) throw ValidationError("moment exponents do not match the covariance");
  for (int k : counts)
    if (k < 0) throw ValidationError("moment exponents must be nonnegative");
  WickMoments<Rational> w(entries_of(c));
  return w(std::vector<int>(counts.begin(), counts.end()));
}

FormalSeries partition_series(const BoxModel& model) {
  model.validate();
  const int n = model.boxes();
  WickMoments<Rational> w(entries_of(model.covariance));
  FormalSeries z(model.order);
  for (int k = 0; k <= model.order; ++k) {
    Rational acc = 0;
    for_each_composition(n, k, [&](const std::vector<int>& alpha) {
      std::vector<int> e(n);
      for (int i = 0; i < n; ++i) e[i] = 4 * alpha[i];
      acc += w(e) * inverse_multinomial_weight(alpha);
    });
    z[k] = k % 2 ? Rational(-acc) : acc;
  }
  return z;
}

RationalMatrix interpolated_covariance(const RationalMatrix& c, std::span<const Rational> x) {
  const int n = static_cast<int>(c.rows());
  if (!c.square() || x.size() != static_cast<std::size_t>(n * (n - 1) / 2))
    throw ValidationError("one interpolation parameter per pair of boxes is required");
  RationalMatrix out = c;
  for (const auto& l : all_links(n)) {
    const Rational& s = x[link_index(n, l)];
    out(l.a, l.b) *= s;
    out(l.b, l.a) *= s;
  }
  return out;
}

std::vector<std::vector<MinExpression>> weakened_covariance(const RationalMatrix& c, const Forest& forest) {
  const int n = forest.vertex_count();
  if (!c.square() || static_cast<int>(c.rows()) != n) throw ValidationError("forest and covariance sizes differ");
  std::vector<std::vector<MinExpression>> e(n, std::vector<MinExpression>(n));
  for (int i = 0; i < n; ++i) {
    e[i][i] = MinExpression(c(i, i));
    for (int j = i + 1; j < n; ++j) {
      auto mask = forest.path_mask(i, j);
      if (!mask || is_zero(c(i, j))) continue;
      e[i][j] = MinExpression::symbol(*mask) * c(i, j);
    }
  }
  return e;
}

namespace {

// Polynomial in phi and lambda standing in front of exp(-lambda sum phi^4)
// after differentiation: key (lambda power, phi exponents).
using DerivativeState = std::map<std::pair<int, std::vector<int>>, Rational>;

void differentiate(DerivativeState& state, int box, int order) {
  DerivativeState next;
  for (const auto& [key, c] : state) {
    const auto& [j, e] = key;
    if (e[box] > 0) {
      auto lowered = e;
      --lowered[box];
      next[{j, lowered}] += c * e[box];
    }
    if (j + 1 <= order) {
      auto raised = e;
      raised[box] += 3;
      next[{j + 1, raised}] -= 4 * c;
    }
  }
  std::erase_if(next, [](const auto& kv) { return is_zero(kv.second); });
  state = std::move(next);
}

FormalSeries tree_contribution(const BoxModel& model, const Tree& tree) {
  const int s = tree.vertex_count();
  const int p = model.order;
  const auto& c = model.covariance;
  Rational prefactor = 1;
  for (const auto& l : tree.links()) prefactor *= c(l.a, l.b);
  if (is_zero(prefactor)) return FormalSeries(p);

  DerivativeState state;
  state[{0, std::vector<int>(s, 0)}] = 1;
  for (const auto& l : tree.links()) {
    differentiate(state, l.a, p);
    differentiate(state, l.b, p);
  }

  WickMoments<MinExpression> w(weakened_covariance(c, tree));
  std::vector<MinExpression> by_order(p + 1);
  for (const auto& [key, coeff] : state) {
    const auto& [j, e] = key;
    for (int k = 0; j + k <= p; ++k) {
      Rational sign = k % 2 ? -coeff : coeff;
      for_each_composition(s, k, [&](const std::vector<int>& beta) {
        std::vector<int> moment = e;
        for (int i = 0; i < s; ++i) moment[i] += 4 * beta[i];
        by_order[j + k] += w(moment) * (sign * inverse_multinomial_weight(beta));
      });
    }
  }
  FormalSeries out(p);
  for (int m = 0; m <= p; ++m)
    if (!by_order[m].is_zero()) out[m] = prefactor * integrate_min_expression(by_order[m], s - 1);
  return out;
}

} // namespace

FormalSeries polymer_activity(const BoxModel& model, const Block& polymer) {
  if (polymer.empty()) throw ValidationError("polymers must be nonempty");
  for (std::size_t k = 0; k < polymer.size(); ++k) {
    if (polymer[k] < 0 || polymer[k] >= model.boxes()) throw ValidationError("polymer box out of range");
    if (k > 0 && polymer[k] <= polymer[k - 1]) throw ValidationError("polymer boxes must be sorted and distinct");
  }
  const BoxModel local = model.restricted(polymer);
  const int s = local.boxes();
  if (s == 1) return single_box_series(local.covariance(0, 0), local.order);
  require_within(s - 1, limits().tau, "links in an activity integral");
  const auto trees = enumerate_trees(s);
  return parallel_sum<FormalSeries>(
      trees.size(), [&](std::size_t t) { return tree_contribution(local, trees[t]); }, FormalSeries(local.order));
}

const FormalSeries& PolymerActivitySeries::at(const Block& y) const {
  auto it = activities.find(y);
  if (it == activities.end()) throw ValidationError("no activity recorded for this polymer");
  return it->second;
}

PolymerActivitySeries cluster_expansion(const BoxModel& model) {
  model.validate();
  PolymerActivitySeries out;
  out.boxes = model.boxes();
  out.order = model.order;
  for (std::uint32_t mask = 1; mask < (1u << out.boxes); ++mask) {
    Block y;
    for (int b = 0; b < out.boxes; ++b)
      if (mask & (1u << b)) y.push_back(b);
    out.activities.emplace(y, polymer_activity(model, y));
  }
  return out;
}

bool FactorizationReport::ok() const {
  for (const auto& r : residuals)
    if (!is_zero(r)) return false;
  return true;
}

FactorizationReport factorization_residuals(const BoxModel& model, const PolymerActivitySeries& activities) {
  FactorizationReport rep;
  rep.boxes = model.boxes();
  rep.order = model.order;
  rep.partition = partition_series(model);
  rep.polymer_sum = FormalSeries(model.order);
  for_each_set_partition(model.boxes(), [&](const SetPartition& p) {
    FormalSeries term = FormalSeries::constant(model.order, 1);
    for (const auto& y : p) term *= activities.at(y).truncated(model.order);
    rep.polymer_sum += term;
    ++rep.partitions;
  });
  for (int k = 0; k <= model.order; ++k) rep.residuals.push_back(rep.partition[k] - rep.polymer_sum[k]);
  return rep;
}

FactorizationReport verify_factorization(const BoxModel& model) {
  auto acts = cluster_expansion(model);
  auto rep = factorization_residuals(model, acts);
  for (int k = 0; k <= rep.order; ++k) {
    if (is_zero(rep.residuals[k])) continue;
    std::ostringstream msg;
    msg << "polymer factorization fails at order " << k << ": Z_k = " << to_string(rep.partition[k])
        << ", partition sum = " << to_string(rep.polymer_sum[k]) << ", residual = " << to_string(rep.residuals[k])
        << "; contributions:";
    for_each_set_partition(model.boxes(), [&](const SetPartition& p) {
      FormalSeries term = FormalSeries::constant(rep.order, 1);
      for (const auto& y : p) term *= acts.at(y).truncated(rep.order);
      if (is_zero(term[k])) return;
      msg << " {";
      for (const auto& y : p) {
        msg << "(";
        for (std::size_t i = 0; i < y.size(); ++i) msg << (i ? "," : "") << y[i] + 1;
        msg << ")";
      }
      msg << "}=" << to_string(term[k]);
    });
    throw IdentityFailure(msg.str());
  }
  return rep;
}

Rational zero_dim_connected_count(int order) {
  if (order < 0) throw ValidationError("order must be nonnegative");
  return series_log(single_box_series(1, order))[order];
}

RationalMatrix chain_covariance(int n, const Rational& r) {
  if (n < 1) throw ValidationError("chain needs at least one box");
  RationalMatrix c(n, n);
  for (int i = 0; i < n; ++i) {
    Rational v = 1;
    for (int j = i; j < n; ++j) {
      c(i, j) = c(j, i) = v;
      v *= r;
    }
  }
  return c;
}

std::vector<DecayRow> activity_decay_table(const Rational& r, int max_size) {
  if (sgn(r) < 0 || r >= 1) throw ValidationError("decay ratio must lie in [0, 1)");
  std::vector<DecayRow> rows;
  for (int s = 2; s <= max_size; ++s) {
    BoxModel model{chain_covariance(s, r), s};
    model.validate();
    Block y(s);
    for (int i = 0; i < s; ++i) y[i] = i;
    DecayRow row;
    row.size = s;
    row.coefficient = polymer_activity(model, y)[s];
    row.magnitude = std::abs(row.coefficient.get_d());
    row.root = std::pow(row.magnitude, 1.0 / s);
    rows.push_back(row);
  }
  return rows;
}

} // namespace forestcalc
