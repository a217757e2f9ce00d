#pragma once

#include <optional>
#include <vector>

#include "forestcalc/forest.hpp"
#include "forestcalc/matrix.hpp"

namespace forestcalc {

enum class WeakeningRule { symmetric, rooted };

const char* to_string(WeakeningRule rule);

/// One interpolation parameter per forest link, indexed like Forest::links().
class WeightAssignment {
public:
  WeightAssignment(const Forest& forest, std::vector<Rational> weights);

  const Rational& operator[](std::size_t link) const { return weights_[link]; }
  std::size_t size() const { return weights_.size(); }
  const std::vector<Rational>& values() const { return weights_; }

  static WeightAssignment random(const Forest& forest, std::mt19937_64& rng, long max_den);

private:
  std::vector<Rational> weights_;
};

/// Min of the weights along the forest path from i to j; 0 across clusters, 1 on the diagonal.
Rational symmetric_weakening(const Forest& forest, const WeightAssignment& w, int i, int j);

/// Layer rule relative to the least-vertex root of each cluster: 1 on equal
/// layers, 0 across clusters or for layers two or more apart, and the weight
/// of the deeper vertex's parent link for neighbouring layers.
Rational rooted_weakening(const Forest& forest, const WeightAssignment& w, int i, int j);

struct WeakeningMatrix {
  RationalMatrix values;
  WeakeningRule rule;
};

WeakeningMatrix weakening_matrix(const Forest& forest, const WeightAssignment& w, WeakeningRule rule);

/// Outcome of the exact semidefiniteness test.
///
/// The test runs a symmetric-pivoted LDL^T elimination in rational
/// arithmetic. `pivots` lists the chosen indices in elimination order and
/// `minors[k]` is the principal minor on pivots[0..k] (all positive when PSD).
/// `null_indices` are indices whose Schur complement vanished identically.
/// When the matrix is not PSD, `witness` is a principal index set whose
/// minor `witness_minor` is negative.
struct PsdCertificate {
  bool positive_semidefinite = false;
  std::vector<int> pivots;
  std::vector<Rational> minors;
  std::vector<int> null_indices;
  std::vector<int> witness;
  Rational witness_minor;
};

PsdCertificate is_positive_semidefinite(const RationalMatrix& m);

/// One term of the convex decomposition: weight times the 0/1 matrix that
/// is 1 exactly on pairs inside a common block.
struct BlockTerm {
  Rational weight;
  std::vector<std::vector<int>> blocks;
};

/// Writes the symmetric weakening matrix as a convex combination of block
/// matrices: one term per distinct weight level, blocks being the clusters of
/// the links whose weight reaches that level.
std::vector<BlockTerm> convex_block_decomposition(const Forest& forest, const WeightAssignment& w);

RationalMatrix block_matrix(int n, const std::vector<std::vector<int>>& blocks);
RationalMatrix reconstruct(int n, const std::vector<BlockTerm>& terms);

/// Entrywise product.
RationalMatrix hadamard_product(const RationalMatrix& a, const RationalMatrix& b);

} // namespace forestcalc
