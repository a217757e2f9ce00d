#pragma once

#include <cstdint>
#include <vector>

#include "forestcalc/combinatorics.hpp"
#include "forestcalc/gaussian_cluster.hpp"
#include "forestcalc/series.hpp"

namespace forestcalc {

using Polymer = Block;

/// Hardcore compatibility: eta(X, Y) = 1 iff X and Y share no box.
bool compatible(const Polymer& x, const Polymer& y);

/// Which pairs of a sequence Y_1..Y_k overlap (epsilon_ij = -1) as a bitmask
/// over link_index(k, {i, j}).
struct OverlapPattern {
  int k = 1;
  std::uint32_t overlaps = 0;

  static OverlapPattern of(const std::vector<Polymer>& sequence);
  bool overlap(int i, int j) const;
  /// Connectivity of the overlap graph.
  bool connected() const;
};

/// Tree formula: sum over trees T on the k indices of
/// int dw prod_{l in T} eps_l prod_{l not in T} (1 + w^T_l eps_l).
Rational connected_coefficient_tree(const OverlapPattern& pattern);
Rational connected_coefficient_tree(const std::vector<Polymer>& sequence);

/// Sum over connected graphs G on the k indices of prod_{l in G} eps_l.
Rational connected_coefficient_graphs(const OverlapPattern& pattern);
Rational connected_coefficient_graphs(const std::vector<Polymer>& sequence);

/// Hardcore polymer gas with rational activities; every activity occurrence
/// carries one power of the bookkeeping variable z.
struct PolymerGas {
  int boxes = 0;
  std::vector<Polymer> polymers;
  std::vector<Rational> activities;

  void validate() const;
};

/// Gas on a line of n boxes whose polymers are all intervals of length 2..max_length.
PolymerGas lattice_1d(int n, int max_length, const Rational& activity);

/// log Z_r as a series in z: coefficient k is
/// (1/k!) sum over ordered k-sequences of prod A_r(Y_i) C^T(Y_1..Y_k).
FormalSeries mayer_log_series(const PolymerGas& gas, int grade);

/// Z_r(z) = sum over pairwise compatible polymer sets of prod (z A_r), truncated.
FormalSeries reduced_partition(const PolymerGas& gas, int grade);

struct MayerReport {
  int grade = 0;
  FormalSeries log_series;
  FormalSeries partition;
  FormalSeries exp_log;
  std::vector<Rational> residuals;
  std::size_t patterns = 0;

  bool ok() const;
};

/// exp(mayer_log_series) against reduced_partition, grade by grade.
MayerReport mayer_residuals(const PolymerGas& gas, int grade);
/// Same, throwing IdentityFailure at the first nonzero residual.
MayerReport verify_mayer(const PolymerGas& gas, int grade);

/// sum_k 1/k! sum over ordered sequences of prod A_r C^T for lambda-series
/// activities, up to k = max_k.
FormalSeries mayer_log_sum(const std::vector<Polymer>& polymers, const std::vector<FormalSeries>& activities, int max_k);

struct PressureReport {
  /// (1/n) sum_b log A({b})
  FormalSeries single_box;
  /// (1/n) log Z_r by the Mayer sum over A_r(Y) = A(Y) / prod_b A({b})
  FormalSeries mayer;
  FormalSeries total;
  /// (1/n) log Z computed directly
  FormalSeries direct;

  bool ok() const { return total == direct; }
};

/// Finite-volume pressure of a Gaussian box model assembled from its cluster
/// activities and the Mayer series, alongside the direct value.
PressureReport finite_volume_pressure(const BoxModel& model);

} // namespace forestcalc
