#include "forestcalc/weakening.hpp"

#include "forestcalc/errors.hpp"

#include <algorithm>
#include <cstdlib>

namespace forestcalc {

const char* to_string(WeakeningRule rule) {
  return rule == WeakeningRule::symmetric ? "symmetric" : "rooted";
}

WeightAssignment::WeightAssignment(const Forest& forest, std::vector<Rational> weights)
    : weights_(std::move(weights)) {
  if (weights_.size() != forest.size())
    throw ValidationError("weight assignment must have one weight per forest link");
  for (const auto& w : weights_)
    if (sgn(w) < 0 || w > 1) throw ValidationError("weights must lie in [0,1], got " + to_string(w));
}

WeightAssignment WeightAssignment::random(const Forest& forest, std::mt19937_64& rng, long max_den) {
  std::vector<Rational> w;
  w.reserve(forest.size());
  for (std::size_t k = 0; k < forest.size(); ++k) w.push_back(random_unit_rational(rng, max_den));
  return WeightAssignment(forest, std::move(w));
}

namespace {

void check_pair(const Forest& forest, int i, int j) {
  if (i < 0 || j < 0 || i >= forest.vertex_count() || j >= forest.vertex_count())
    throw ValidationError("pair endpoint outside the vertex range");
}

} // namespace

Rational symmetric_weakening(const Forest& forest, const WeightAssignment& w, int i, int j) {
  check_pair(forest, i, j);
  if (i == j) return 1;
  auto path = forest.path_links(i, j);
  if (!path) return 0;
  Rational best = 1;
  for (int k : *path)
    if (w[k] < best) best = w[k];
  return best;
}

Rational rooted_weakening(const Forest& forest, const WeightAssignment& w, int i, int j) {
  check_pair(forest, i, j);
  if (!forest.connected(i, j)) return 0;
  int li = forest.layer(i);
  int lj = forest.layer(j);
  if (li == lj) return 1;
  if (std::abs(li - lj) >= 2) return 0;
  int deeper = li > lj ? i : j;
  return w[forest.parent_link(deeper)];
}

WeakeningMatrix weakening_matrix(const Forest& forest, const WeightAssignment& w, WeakeningRule rule) {
  const int n = forest.vertex_count();
  RationalMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Rational v = rule == WeakeningRule::symmetric ? symmetric_weakening(forest, w, i, j)
                                                    : rooted_weakening(forest, w, i, j);
      m(i, j) = v;
      m(j, i) = v;
    }
  return {std::move(m), rule};
}

PsdCertificate is_positive_semidefinite(const RationalMatrix& input) {
  if (!input.is_symmetric()) throw ValidationError("PSD test needs a symmetric matrix");
  const int n = static_cast<int>(input.rows());
  RationalMatrix a = input;
  std::vector<int> active(n);
  for (int i = 0; i < n; ++i) active[i] = i;

  PsdCertificate cert;
  Rational minor = 1;
  auto fail = [&](std::vector<int> extra, Rational value) {
    cert.positive_semidefinite = false;
    cert.witness = cert.pivots;
    cert.witness.insert(cert.witness.end(), extra.begin(), extra.end());
    std::sort(cert.witness.begin(), cert.witness.end());
    cert.witness_minor = std::move(value);
    return cert;
  };

  while (true) {
    for (int i : active)
      if (sgn(a(i, i)) < 0) return fail({i}, minor * a(i, i));

    std::vector<int> still;
    for (int i : active) {
      if (sgn(a(i, i)) != 0) {
        still.push_back(i);
        continue;
      }
      for (int j : active)
        if (j != i && sgn(a(i, j)) != 0) return fail({i, j}, minor * (a(i, i) * a(j, j) - a(i, j) * a(i, j)));
      cert.null_indices.push_back(i);
    }
    active = std::move(still);
    if (active.empty()) break;

    int p = active.front();
    minor *= a(p, p);
    cert.pivots.push_back(p);
    cert.minors.push_back(minor);
    active.erase(active.begin());
    for (int i : active) {
      if (sgn(a(i, p)) == 0) continue;
      Rational f = a(i, p) / a(p, p);
      for (int j : active) a(i, j) -= f * a(p, j);
    }
  }
  cert.positive_semidefinite = true;
  return cert;
}

RationalMatrix block_matrix(int n, const std::vector<std::vector<int>>& blocks) {
  RationalMatrix m(n, n);
  for (const auto& block : blocks)
    for (int i : block)
      for (int j : block) m(i, j) = 1;
  return m;
}

std::vector<BlockTerm> convex_block_decomposition(const Forest& forest, const WeightAssignment& w) {
  std::vector<Rational> levels(w.values().begin(), w.values().end());
  levels.push_back(1);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::vector<BlockTerm> terms;
  Rational previous = 0;
  for (const auto& level : levels) {
    if (sgn(level) == 0) continue;
    std::vector<Link> kept;
    for (std::size_t k = 0; k < forest.size(); ++k)
      if (w[k] >= level) kept.push_back(forest.links()[k]);
    auto sub = Forest::from_links(forest.vertex_count(), std::move(kept));
    terms.push_back({level - previous, sub.clusters()});
    previous = level;
  }
  return terms;
}

RationalMatrix reconstruct(int n, const std::vector<BlockTerm>& terms) {
  RationalMatrix m(n, n);
  for (const auto& t : terms)
    for (const auto& block : t.blocks)
      for (int i : block)
        for (int j : block) m(i, j) += t.weight;
  return m;
}

RationalMatrix hadamard_product(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ValidationError("Hadamard product dimension mismatch");
  RationalMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) * b(i, j);
  return c;
}

} // namespace forestcalc
