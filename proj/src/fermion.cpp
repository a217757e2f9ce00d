#include "forestcalc/fermion.hpp"

#include "forestcalc/errors.hpp"
#include "forestcalc/limits.hpp"
#include "forestcalc/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace forestcalc {

namespace {

int permutation_sign(const std::vector<int>& perm) {
  std::vector<bool> seen(perm.size(), false);
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

struct UnionFind {
  std::vector<int> parent;
  int components;
  explicit UnionFind(int n) : parent(n), components(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
};

// Calls visit(sites) for every assignment with vertex 0 at site 0.
void for_each_rooted_placement(int n, int sites, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> x(n, 0);
  std::function<void(int)> place = [&](int v) {
    if (v == n) {
      visit(x);
      return;
    }
    for (int s = 0; s < sites; ++s) {
      x[v] = s;
      place(v + 1);
    }
  };
  place(1);
}

} // namespace

void GramFactorization::validate() const {
  if (f.size() != g.size()) throw ValidationError("factorization families must have equal length");
  std::size_t dim = f.empty() ? 0 : f.front().size();
  for (const auto* fam : {&f, &g})
    for (const auto& v : *fam)
      if (v.size() != dim) throw ValidationError("factorization vectors must share one dimension");
}

RationalMatrix GramFactorization::inner_products() const {
  validate();
  RationalMatrix m(f.size(), g.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) m(i, j) = dot(f[i], g[j]);
  return m;
}

GramFactorization ldl_factorization(const RationalMatrix& c) {
  if (!c.square() || !c.is_symmetric()) throw ValidationError("LDL factorization needs a symmetric matrix");
  const std::size_t n = c.rows();
  RationalMatrix l = RationalMatrix::identity(n);
  std::vector<Rational> d(n);
  for (std::size_t j = 0; j < n; ++j) {
    Rational s = c(j, j);
    for (std::size_t k = 0; k < j; ++k) s -= l(j, k) * l(j, k) * d[k];
    d[j] = s;
    for (std::size_t i = j + 1; i < n; ++i) {
      Rational t = c(i, j);
      for (std::size_t k = 0; k < j; ++k) t -= l(i, k) * l(j, k) * d[k];
      if (is_zero(d[j])) {
        if (!is_zero(t)) throw ValidationError("propagator has no LDL factorization without pivoting");
        l(i, j) = 0;
      } else {
        l(i, j) = t / d[j];
      }
    }
  }
  GramFactorization out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> fi(n), gi(n);
    for (std::size_t k = 0; k < n; ++k) {
      fi[k] = l(i, k) * d[k];
      gi[k] = l(i, k);
    }
    out.f.push_back(std::move(fi));
    out.g.push_back(std::move(gi));
  }
  return out;
}

void GrassmannModel::validate() const {
  const int l = sites();
  if (l < 1 || !propagator.square()) throw ValidationError("propagator must be a nonempty square matrix");
  if (colors < 1) throw ValidationError("color count must be at least 1");
  if (order < 0) throw ValidationError("order must be nonnegative");
  require_within(order, limits().fermion, "fermionic order");
  for (int x = 0; x < l; ++x)
    for (int y = 0; y < l; ++y)
      if (propagator(x, y) != propagator((x + 1) % l, (y + 1) % l))
        throw ValidationError("propagator is not translation invariant on the ring");
  if (factorization) {
    factorization->validate();
    if (factorization->f.size() != static_cast<std::size_t>(l))
      throw ValidationError("factorization must provide one vector per site");
    if (!(factorization->inner_products() == propagator))
      throw ValidationError("factorization does not reproduce the propagator");
  }
}

RationalMatrix ring_propagator(std::span<const Rational> profile) {
  const int l = static_cast<int>(profile.size());
  if (l < 1) throw ValidationError("propagator profile must be nonempty");
  RationalMatrix c(l, l);
  for (int x = 0; x < l; ++x)
    for (int y = 0; y < l; ++y) c(x, y) = profile[((y - x) % l + l) % l];
  return c;
}

FormalSeries grassmann_partition_series(const GrassmannModel& model) {
  model.validate();
  const int l = model.sites();
  const int nc = model.colors;
  FormalSeries z(model.order);
  z[0] = 1;
  for (int k = 1; k <= model.order; ++k) {
    double work = std::pow(l, k) * std::pow(nc, 2 * k);
    if (work > 5e6) throw SizeLimitError("brute-force Grassmann expansion too large at this order");
    std::size_t site_tuples = 1, color_tuples = 1;
    for (int i = 0; i < k; ++i) site_tuples *= l;
    for (int i = 0; i < 2 * k; ++i) color_tuples *= nc;
    // each vertex carries psibar_a psi_a psibar_b psi_b; pair r = 2 v + s
    Rational sum = parallel_sum<Rational>(
        site_tuples,
        [&](std::size_t st) {
          std::vector<int> x(k);
          for (int i = 0; i < k; ++i, st /= l) x[i] = static_cast<int>(st % l);
          Rational acc = 0;
          std::vector<int> col(2 * k);
          for (std::size_t ct = 0; ct < color_tuples; ++ct) {
            std::size_t t = ct;
            for (int r = 0; r < 2 * k; ++r, t /= nc) col[r] = static_cast<int>(t % nc);
            RationalMatrix m(2 * k, 2 * k);
            for (int r = 0; r < 2 * k; ++r)
              for (int c = 0; c < 2 * k; ++c)
                if (col[r] == col[c]) m(r, c) = model.propagator(x[r / 2], x[c / 2]);
            acc += determinant(std::move(m));
          }
          return acc;
        },
        Rational(0));
    Rational coeff = sum / factorial(k);
    for (int i = 0; i < k; ++i) coeff /= nc;
    z[k] = model.negative_exponent && k % 2 ? Rational(-coeff) : coeff;
  }
  return z;
}

FormalSeries pressure_series_bruteforce(const GrassmannModel& model) {
  return series_log(grassmann_partition_series(model)) * Rational(1, model.sites());
}

std::vector<Decoration> decorations(const Tree& tree) {
  const int n = tree.vertex_count();
  const auto& links = tree.links();
  const std::size_t lines = links.size();
  std::vector<Decoration> out;
  Decoration d{std::vector<int>(lines), std::vector<int>(lines), std::vector<int>(lines)};
  std::vector<bool> row_used(2 * n, false), col_used(2 * n, false);
  std::function<void(std::size_t)> walk = [&](std::size_t l) {
    if (l == lines) {
      out.push_back(d);
      return;
    }
    for (int sigma = 0; sigma < 2; ++sigma) {
      int rv = sigma ? links[l].b : links[l].a;
      int cv = sigma ? links[l].a : links[l].b;
      for (int rs = 0; rs < 2; ++rs) {
        int r = slot_index(rv, rs);
        if (row_used[r]) continue;
        for (int cs = 0; cs < 2; ++cs) {
          int c = slot_index(cv, cs);
          if (col_used[c]) continue;
          row_used[r] = col_used[c] = true;
          d.sigma[l] = sigma;
          d.row_slot[l] = rs;
          d.col_slot[l] = cs;
          walk(l + 1);
          row_used[r] = col_used[c] = false;
        }
      }
    }
  };
  walk(0);
  return out;
}

namespace {

struct Contractions {
  std::vector<int> line_rows, line_cols;
  std::vector<int> residual_rows, residual_cols;
};

Contractions contractions(const Tree& tree, const Decoration& d) {
  const int n = tree.vertex_count();
  const auto& links = tree.links();
  if (d.sigma.size() != links.size() || d.row_slot.size() != links.size() || d.col_slot.size() != links.size())
    throw ValidationError("decoration must describe every tree line");
  Contractions c;
  std::vector<bool> row_used(2 * n, false), col_used(2 * n, false);
  for (std::size_t l = 0; l < links.size(); ++l) {
    int rv = d.sigma[l] ? links[l].b : links[l].a;
    int cv = d.sigma[l] ? links[l].a : links[l].b;
    int r = slot_index(rv, d.row_slot[l]);
    int col = slot_index(cv, d.col_slot[l]);
    if (row_used[r] || col_used[col]) throw ValidationError("decoration reuses a field");
    row_used[r] = col_used[col] = true;
    c.line_rows.push_back(r);
    c.line_cols.push_back(col);
  }
  for (int i = 0; i < 2 * n; ++i) {
    if (!row_used[i]) c.residual_rows.push_back(i);
    if (!col_used[i]) c.residual_cols.push_back(i);
  }
  return c;
}

int contraction_sign(const Contractions& c, int n) {
  std::vector<int> perm(2 * n);
  for (std::size_t l = 0; l < c.line_rows.size(); ++l) perm[c.line_rows[l]] = c.line_cols[l];
  for (std::size_t i = 0; i < c.residual_rows.size(); ++i) perm[c.residual_rows[i]] = c.residual_cols[i];
  return permutation_sign(perm);
}

} // namespace

int decoration_sign(const Tree& tree, const Decoration& d) {
  return contraction_sign(contractions(tree, d), tree.vertex_count());
}

LoopMatrix loop_matrix(const GrassmannModel& model, const Tree& tree, const Decoration& d,
                       std::span<const int> sites, std::span<const int> colors) {
  const int n = tree.vertex_count();
  if (sites.size() != static_cast<std::size_t>(n)) throw ValidationError("one site per vertex is required");
  if (colors.size() != static_cast<std::size_t>(2 * n)) throw ValidationError("one color per slot is required");
  auto c = contractions(tree, d);
  LoopMatrix m;
  m.rows = c.residual_rows;
  m.cols = c.residual_cols;
  const std::size_t size = m.rows.size();
  m.entries.assign(size, std::vector<MinExpression>(size));
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) {
      int r = m.rows[i], col = m.cols[j];
      if (colors[r] != colors[col]) continue;
      int vr = r / 2, vc = col / 2;
      const Rational& value = model.propagator(sites[vr], sites[vc]);
      if (is_zero(value)) continue;
      m.entries[i][j] = vr == vc ? MinExpression(value) : MinExpression::symbol(*tree.path_mask(vr, vc)) * value;
    }
  return m;
}

namespace {

// One permutation of the residual matrix: sign times N^{color classes}, the
// cells it uses, and the product of weakening symbols along them.
struct ResidualTerm {
  Rational weight;
  std::vector<std::pair<int, int>> cells;
  MinMonomial symbols;
};

Rational tree_total(const GrassmannModel& model, const Tree& tree) {
  const int n = tree.vertex_count();
  const int nc = model.colors;
  const auto& c = model.propagator;
  MinExpression acc;
  for (const auto& d : decorations(tree)) {
    auto con = contractions(tree, d);
    const int sign = contraction_sign(con, n);
    const int m = static_cast<int>(con.residual_rows.size());

    std::vector<ResidualTerm> terms;
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      UnionFind classes(2 * n);
      for (std::size_t l = 0; l < con.line_rows.size(); ++l) classes.unite(con.line_rows[l], con.line_cols[l]);
      ResidualTerm t;
      for (int i = 0; i < m; ++i) {
        int r = con.residual_rows[i], col = con.residual_cols[perm[i]];
        classes.unite(r, col);
        t.cells.emplace_back(r / 2, col / 2);
        if (r / 2 != col / 2) t.symbols = multiply(t.symbols, {{*tree.path_mask(r / 2, col / 2), 1}});
      }
      Rational colorings = 1;
      for (int k = 0; k < classes.components; ++k) colorings *= nc;
      t.weight = colorings * (sign * permutation_sign(perm));
      terms.push_back(std::move(t));
    } while (std::next_permutation(perm.begin(), perm.end()));

    for_each_rooted_placement(n, model.sites(), [&](const std::vector<int>& x) {
      Rational lines = 1;
      for (std::size_t l = 0; l < con.line_rows.size() && !is_zero(lines); ++l)
        lines *= c(x[con.line_rows[l] / 2], x[con.line_cols[l] / 2]);
      if (is_zero(lines)) return;
      for (const auto& t : terms) {
        Rational v = lines * t.weight;
        for (const auto& [a, b] : t.cells) {
          v *= c(x[a], x[b]);
          if (is_zero(v)) break;
        }
        if (!is_zero(v)) acc.add_term(t.symbols, v);
      }
    });
  }
  return integrate_min_expression(acc, n - 1);
}

} // namespace

FormalSeries pressure_series_tree(const GrassmannModel& model) {
  model.validate();
  FormalSeries p(model.order);
  for (int n = 1; n <= model.order; ++n) {
    const auto trees = enumerate_trees(n);
    Rational sum = parallel_sum<Rational>(
        trees.size(), [&](std::size_t t) { return tree_total(model, trees[t]); }, Rational(0));
    sum /= factorial(n);
    for (int i = 0; i < n; ++i) sum /= model.colors;
    p[n] = model.negative_exponent && n % 2 ? Rational(-sum) : sum;
  }
  return p;
}

Integer coloring_count(const Tree& tree, std::span<const int> sigma, int colors) {
  const int n = tree.vertex_count();
  if (colors < 1) throw ValidationError("color count must be at least 1");
  if (sigma.size() != tree.size()) throw ValidationError("one arrow per tree line is required");
  require_within(n, limits().fermion, "vertices in a coloring count");
  // visiting order by layers, so every parent is colored before its children
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return tree.layer(a) < tree.layer(b); });

  std::vector<int> slot_order(n, 0);
  std::vector<std::array<int, 2>> kappa(n);
  Integer count = 0;
  std::function<void(int)> climb = [&](int idx) {
    if (idx == n) {
      ++count;
      return;
    }
    int v = order[idx];
    for (int cv = 0; cv < 2; ++cv) {
      slot_order[v] = cv;
      if (tree.parent(v) < 0) {
        for (int a = 0; a < colors; ++a)
          for (int b = 0; b < colors; ++b) {
            kappa[v] = {a, b};
            climb(idx + 1);
          }
        continue;
      }
      int p = tree.parent(v);
      int hook = sigma[tree.parent_link(v)] ^ slot_order[p];
      kappa[v][cv] = kappa[p][hook];
      for (int free = 0; free < colors; ++free) {
        kappa[v][1 - cv] = free;
        climb(idx + 1);
      }
    }
  };
  climb(0);
  return count;
}

Integer coloring_count(int n, int colors) {
  if (n < 1) throw ValidationError("coloring count needs n >= 1");
  Integer common = -1;
  for (const auto& tree : enumerate_trees(n)) {
    const int lines = n - 1;
    for (int bits = 0; bits < (1 << lines); ++bits) {
      std::vector<int> sigma(lines);
      for (int l = 0; l < lines; ++l) sigma[l] = (bits >> l) & 1;
      Integer c = coloring_count(tree, sigma, colors);
      if (common < 0) common = c;
      if (c != common) throw IdentityFailure("coloring count depends on the tree or the arrows");
    }
  }
  return common;
}

std::vector<SignAuditRow> sign_audit(int n) {
  require_within(n, limits().fermion, "fermionic order");
  std::vector<SignAuditRow> rows;
  for (const auto& tree : enumerate_trees(n)) {
    SignAuditRow row;
    row.tree = tree.links();
    for (const auto& d : decorations(tree)) {
      ++row.decorations;
      (decoration_sign(tree, d) > 0 ? row.positive : row.negative)++;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

GramReport gram_bound_check(const GramFactorization& fact, const Forest& forest, const WeightAssignment& w) {
  fact.validate();
  const int n = forest.vertex_count();
  if (fact.f.size() != static_cast<std::size_t>(n)) throw ValidationError("one vector pair per forest vertex is required");
  auto weak = weakening_matrix(forest, w, WeakeningRule::symmetric).values;
  auto inner = fact.inner_products();
  RationalMatrix b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = weak(i, j) * inner(i, j);

  GramReport rep;
  rep.det = determinant(b);
  rep.det_squared = rep.det * rep.det;
  rep.bound_squared = 1;
  for (int i = 0; i < n; ++i) rep.bound_squared *= dot(fact.f[i], fact.f[i]) * dot(fact.g[i], fact.g[i]);
  rep.holds = rep.det_squared <= rep.bound_squared;

  // tensor picture: W = V V^T, B_ij = <v_i (x) f_i, v_j (x) g_j>
  Eigen::MatrixXd wd(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) wd(i, j) = weak(i, j).get_d();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(wd);
  Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd v = eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
  for (int i = 0; i < n; ++i) {
    rep.tensor.max_norm_error = std::max(rep.tensor.max_norm_error, std::abs(v.row(i).squaredNorm() - 1.0));
    for (int j = 0; j < n; ++j) {
      double recon = v.row(i).dot(v.row(j)) * inner(i, j).get_d();
      rep.tensor.max_entry_error = std::max(rep.tensor.max_entry_error, std::abs(recon - b(i, j).get_d()));
    }
  }

  if (!rep.holds) {
    std::ostringstream msg;
    msg << "Gram bound violated: det(B)^2 = " << to_string(rep.det_squared) << " > " << to_string(rep.bound_squared);
    throw InequalityFailure(msg.str());
  }
  return rep;
}

RadiusProbe radius_probe(const std::vector<GrassmannModel>& models) {
  RadiusProbe probe;
  int max_order = 0;
  for (const auto& model : models) {
    auto fact = model.factorization ? *model.factorization : ldl_factorization(model.propagator);
    double s_c = 0, f_max = 0, g_max = 0;
    for (int x = 0; x < model.sites(); ++x) {
      double row = 0, col = 0;
      for (int y = 0; y < model.sites(); ++y) {
        row += std::abs(model.propagator(x, y).get_d());
        col += std::abs(model.propagator(y, x).get_d());
      }
      s_c = std::max({s_c, row, col});
      f_max = std::max(f_max, dot(fact.f[x], fact.f[x]).get_d());
      g_max = std::max(g_max, dot(fact.g[x], fact.g[x]).get_d());
    }
    const double gram = std::sqrt(f_max * g_max);

    auto series = pressure_series_tree(model);
    for (int n = 1; n <= model.order; ++n) {
      RadiusRow row;
      row.colors = model.colors;
      row.order = n;
      row.coefficient = series[n];
      double per_color = std::abs(series[n].get_d()) / model.colors;
      row.ratio = std::pow(per_color, 1.0 / n);
      double trees = std::pow(n, n - 2) / std::tgamma(n + 1.0);
      double a_priori = trees * std::pow(8.0 * s_c, n - 1) * std::pow(gram, n + 1);
      row.bound = std::pow(a_priori, 1.0 / n);
      // small slack for the floating evaluation of an exact comparison
      if (per_color > a_priori * (1 + 1e-12)) probe.within_bounds = false;
      probe.uniform_bound = std::max(probe.uniform_bound, row.ratio);
      probe.fitted_constant = std::max(probe.fitted_constant, row.ratio / std::pow(trees, 1.0 / n));
      probe.rows.push_back(row);
    }
    max_order = std::max(max_order, model.order);
  }
  probe.envelope.assign(max_order + 1, 0.0);
  for (int n = 1; n <= max_order; ++n)
    probe.envelope[n] = std::pow(std::pow(n, n - 2) / std::tgamma(n + 1.0), 1.0 / n) * probe.fitted_constant;
  return probe;
}

} // namespace forestcalc
