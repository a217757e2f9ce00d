#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "forestcalc/forest.hpp"
#include "forestcalc/matrix.hpp"
#include "forestcalc/min_expression.hpp"
#include "forestcalc/series.hpp"
#include "forestcalc/weakening.hpp"

namespace forestcalc {

/// Two vector families with C(x, y) = <f_x, g_y>.
struct GramFactorization {
  std::vector<std::vector<Rational>> f;
  std::vector<std::vector<Rational>> g;

  void validate() const;
  /// Matrix of inner products <f_i, g_j>.
  RationalMatrix inner_products() const;
};

/// C = D E^T from an exact LDL^T (D = L diag(d), E = L); ValidationError when C
/// admits no such factorization without pivoting.
GramFactorization ldl_factorization(const RationalMatrix& c);

/// Grassmann model on a periodic chain of sites with N colors and
/// interaction (lambda / N) sum_x (sum_a psibar_a psi_a)^2 entering as e^{+S}
/// (or e^{-S} with negative_exponent). The propagator is diagonal in color.
struct GrassmannModel {
  RationalMatrix propagator;
  int colors = 1;
  int order = 3;
  bool negative_exponent = false;
  std::optional<GramFactorization> factorization;

  int sites() const { return static_cast<int>(propagator.rows()); }
  /// Square, translation invariant on the ring, N >= 1 and within limits.
  void validate() const;
};

/// Coefficients of Z by direct expansion of e^S and one determinant per
/// site and color assignment.
FormalSeries grassmann_partition_series(const GrassmannModel& model);
/// (1/|sites|) log Z.
FormalSeries pressure_series_bruteforce(const GrassmannModel& model);

/// How one tree line contracts a psibar with a psi. Line l joins l.a < l.b;
/// sigma 0 puts the psibar (a row) at l.a and the psi (a column) at l.b,
/// sigma 1 the reverse. Slots pick which of the two field pairs of the
/// vertex is used at each end.
struct Decoration {
  std::vector<int> sigma;
  std::vector<int> row_slot;
  std::vector<int> col_slot;
};

/// Row / column index of slot s at vertex v.
inline int slot_index(int v, int s) { return 2 * v + s; }

/// Every decoration of the tree that uses each row and each column at most once.
std::vector<Decoration> decorations(const Tree& tree);

/// Sign of the Laplace expansion: the permutation sending each contracted
/// row to its column and the remaining rows, in order, to the remaining columns.
int decoration_sign(const Tree& tree, const Decoration& d);

struct LoopMatrix {
  std::vector<int> rows;
  std::vector<int> cols;
  /// entries[i][j] = delta(colors) C(x_row, x_col) m_{path}; same-vertex entries are not weakened.
  std::vector<std::vector<MinExpression>> entries;
};

/// Residual (n+1)x(n+1) matrix after removing the contracted rows and columns.
/// sites[v] is the site of vertex v, colors[slot_index(v, s)] the color of a slot.
LoopMatrix loop_matrix(const GrassmannModel& model, const Tree& tree, const Decoration& d,
                       std::span<const int> sites, std::span<const int> colors);

/// Pressure coefficients from the tree expansion with vertex 1 at the origin.
FormalSeries pressure_series_tree(const GrassmannModel& model);

/// Colorings of a fixed (tree, sigma) by the layer-climbing rule: the root
/// chooses a slot order and two colors, every other vertex a slot order and
/// the color of its free slot, the other being forced by its parent line.
Integer coloring_count(const Tree& tree, std::span<const int> sigma, int colors);
Integer coloring_count(int n, int colors);

struct SignAuditRow {
  std::vector<Link> tree;
  std::size_t decorations = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
};
std::vector<SignAuditRow> sign_audit(int n);

struct GramIllustration {
  /// max |B_ij - <v_i (x) f_i, v_j (x) g_j>| in floating point
  double max_entry_error = 0;
  /// max | |v_i|^2 - 1 |
  double max_norm_error = 0;
};

struct GramReport {
  Rational det;
  Rational det_squared;
  Rational bound_squared;
  bool holds = false;
  GramIllustration tensor;
};

/// B_ij = w^F_ij <f_i, g_j>; checks det(B)^2 <= prod |f_i|^2 prod |g_j|^2 exactly.
GramReport gram_bound_check(const GramFactorization& fact, const Forest& forest, const WeightAssignment& w);

struct RadiusRow {
  int colors = 0;
  int order = 0;
  Rational coefficient;
  /// |a_n / N|^{1/n}
  double ratio = 0;
  /// N-independent a priori bound on |a_n / N|, as an n-th root
  double bound = 0;
};

struct RadiusProbe {
  std::vector<RadiusRow> rows;
  /// max over rows of ratio / (n^{n-2}/n!)^{1/n}
  double fitted_constant = 0;
  /// (n^{n-2}/n!)^{1/n} fitted_constant, indexed by n
  std::vector<double> envelope;
  /// max ratio over the family
  double uniform_bound = 0;
  /// every |a_n/N| within its a priori bound
  bool within_bounds = true;
};

RadiusProbe radius_probe(const std::vector<GrassmannModel>& models);

/// Translation-invariant propagator on a ring: C(x, y) = profile[(y - x) mod L].
RationalMatrix ring_propagator(std::span<const Rational> profile);

} // namespace forestcalc
