#include "doctest.h"

#include "forestcalc/errors.hpp"
#include "forestcalc/weakening.hpp"

#include <random>

using namespace forestcalc;

namespace {

Rational r(long p, long q = 1) { return Rational(p, q); }

// Oracle: a symmetric matrix is PSD iff every principal minor is >= 0.
bool psd_by_all_principal_minors(const RationalMatrix& m) {
  const std::size_t n = m.rows();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    if (sgn(determinant(m.submatrix(idx, idx))) < 0) return false;
  }
  return true;
}

RationalMatrix random_gram(std::mt19937_64& rng, std::size_t n, std::size_t rank) {
  RationalMatrix b(n, rank);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < rank; ++k) b(i, k) = random_rational(rng, 4, 3);
  return b * b.transpose();
}

} // namespace

TEST_CASE("symmetric weakening on the chain example") {
  auto chain = Forest::from_links(3, {{0, 1}, {1, 2}});
  WeightAssignment w(chain, {r(1, 2), r(1, 4)});
  CHECK(symmetric_weakening(chain, w, 0, 2) == r(1, 4));
  CHECK(symmetric_weakening(chain, w, 0, 1) == r(1, 2));
  CHECK(symmetric_weakening(chain, w, 1, 1) == 1);

  auto single = Forest::from_links(3, {{0, 1}});
  WeightAssignment ws(single, {r(1, 3)});
  CHECK(symmetric_weakening(single, ws, 0, 2) == 0);
  CHECK_THROWS_AS(symmetric_weakening(single, ws, 0, 3), ValidationError);
}

TEST_CASE("weight assignment validation") {
  auto f = Forest::from_links(2, {{0, 1}});
  CHECK_THROWS_AS(WeightAssignment(f, {r(3, 2)}), ValidationError);
  CHECK_THROWS_AS(WeightAssignment(f, {r(-1, 2)}), ValidationError);
  CHECK_THROWS_AS(WeightAssignment(f, {}), ValidationError);
}

TEST_CASE("rooted weakening layer rules") {
  // star-free chain 0-1-2-3 rooted at 0: layers 0,1,2,3
  auto chain = Forest::from_links(5, {{0, 1}, {1, 2}, {2, 3}});
  WeightAssignment w(chain, {r(1, 2), r(1, 3), r(1, 5)});
  CHECK(rooted_weakening(chain, w, 0, 2) == 0);       // layers 0 and 2
  CHECK(rooted_weakening(chain, w, 1, 2) == r(1, 3)); // tree link
  CHECK(rooted_weakening(chain, w, 3, 2) == r(1, 5)); // tree link, reversed
  CHECK(rooted_weakening(chain, w, 0, 4) == 0);       // different clusters
  CHECK(rooted_weakening(chain, w, 2, 2) == 1);

  // star at 0 with leaves 1,2 and grandchild 3 under 1
  auto star = Forest::from_links(4, {{0, 1}, {0, 2}, {1, 3}});
  WeightAssignment ws(star, {r(1, 2), r(1, 3), r(1, 7)});
  CHECK(rooted_weakening(star, ws, 1, 2) == 1);       // same layer
  CHECK(rooted_weakening(star, ws, 3, 2) == r(1, 7)); // ancestor link of the deeper vertex 3
  CHECK(rooted_weakening(star, ws, 2, 3) == r(1, 7));
}

TEST_CASE("weakening matrices: diagonal, range and agreement on tree links") {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 5; ++n)
    for (const auto& f : enumerate_forests(n)) {
      auto w = WeightAssignment::random(f, rng, 7);
      auto sym = weakening_matrix(f, w, WeakeningRule::symmetric).values;
      auto root = weakening_matrix(f, w, WeakeningRule::rooted).values;
      for (int i = 0; i < n; ++i) {
        CHECK(sym(i, i) == 1);
        CHECK(root(i, i) == 1);
        for (int j = 0; j < n; ++j) {
          CHECK(sgn(sym(i, j)) >= 0);
          CHECK(sym(i, j) <= 1);
          CHECK(sgn(root(i, j)) >= 0);
          CHECK(root(i, j) <= 1);
        }
      }
      for (std::size_t k = 0; k < f.size(); ++k) {
        auto l = f.links()[k];
        CHECK(sym(l.a, l.b) == w[k]);
        CHECK(root(l.a, l.b) == w[k]);
      }
    }
}

TEST_CASE("PSD certificate") {
  auto id = is_positive_semidefinite(RationalMatrix::identity(3));
  CHECK(id.positive_semidefinite);
  CHECK(id.minors == std::vector<Rational>{1, 1, 1});

  auto ones = is_positive_semidefinite(RationalMatrix::ones(3));
  CHECK(ones.positive_semidefinite);
  CHECK(ones.pivots.size() == 1);
  CHECK(ones.null_indices.size() == 2);

  RationalMatrix chain{{1, r(1, 2), r(1, 4)}, {r(1, 2), 1, r(1, 4)}, {r(1, 4), r(1, 4), 1}};
  auto c = is_positive_semidefinite(chain);
  CHECK(c.positive_semidefinite);
  CHECK(c.minors == std::vector<Rational>{1, r(3, 4), r(11, 16)});

  RationalMatrix bad{{1, 1, 0}, {1, 1, 1}, {0, 1, 1}};
  auto b = is_positive_semidefinite(bad);
  CHECK_FALSE(b.positive_semidefinite);
  CHECK(sgn(b.witness_minor) < 0);
  CHECK(determinant(bad.submatrix({b.witness.begin(), b.witness.end()}, {b.witness.begin(), b.witness.end()})) ==
        b.witness_minor);

  CHECK_THROWS_AS(is_positive_semidefinite(RationalMatrix{{1, 0}, {1, 1}}), ValidationError);
}

TEST_CASE("PSD test agrees with the all-principal-minors oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 1 + trial % 5;
    RationalMatrix m(n, n);
    if (trial % 3 == 0) {
      m = random_gram(rng, n, 1 + trial % n);
    } else {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = random_rational(rng, 3, 2);
    }
    CAPTURE(trial);
    CHECK(is_positive_semidefinite(m).positive_semidefinite == psd_by_all_principal_minors(m));
  }
}

TEST_CASE("convex block decomposition") {
  auto one = Forest::from_links(2, {{0, 1}});
  auto full = convex_block_decomposition(one, WeightAssignment(one, {r(1)}));
  REQUIRE(full.size() == 1);
  CHECK(full[0].weight == 1);
  CHECK(full[0].blocks == std::vector<std::vector<int>>{{0, 1}});

  auto third = convex_block_decomposition(one, WeightAssignment(one, {r(1, 3)}));
  REQUIRE(third.size() == 2);
  CHECK(third[0].weight == r(1, 3));
  CHECK(third[0].blocks == std::vector<std::vector<int>>{{0, 1}});
  CHECK(third[1].weight == r(2, 3));
  CHECK(third[1].blocks == std::vector<std::vector<int>>{{0}, {1}});

  auto chain = Forest::from_links(3, {{0, 1}, {1, 2}});
  WeightAssignment w(chain, {r(1, 2), r(1, 4)});
  auto terms = convex_block_decomposition(chain, w);
  CHECK(terms.size() == 3);
  CHECK(reconstruct(3, terms) == weakening_matrix(chain, w, WeakeningRule::symmetric).values);

  // ties merge into one level; zero weights contribute no term
  auto star = Forest::from_links(4, {{0, 1}, {0, 2}, {0, 3}});
  WeightAssignment tied(star, {r(1, 2), r(1, 2), r(0)});
  auto tt = convex_block_decomposition(star, tied);
  CHECK(tt.size() == 2);
  CHECK(reconstruct(4, tt) == weakening_matrix(star, tied, WeakeningRule::symmetric).values);
}

TEST_CASE("symmetric weakening matrices are PSD and decompose exactly") {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 5; ++n)
    for (const auto& f : enumerate_forests(n))
      for (int t = 0; t < 5; ++t) {
        auto w = WeightAssignment::random(f, rng, 9);
        auto m = weakening_matrix(f, w, WeakeningRule::symmetric).values;
        CHECK(is_positive_semidefinite(m).positive_semidefinite);
        auto terms = convex_block_decomposition(f, w);
        Rational total = 0;
        for (const auto& term : terms) {
          CHECK(sgn(term.weight) > 0);
          total += term.weight;
        }
        CHECK(total == 1);
        CHECK(reconstruct(n, terms) == m);
      }
}

TEST_CASE("rooted weakening matrices can fail to be PSD") {
  // the rooted rule carries no positivity guarantee; find a witness on n = 4
  std::mt19937_64 rng(5);
  bool found = false;
  for (int t = 0; t < 50 && !found; ++t)
    for (const auto& tree : enumerate_trees(4)) {
      auto w = WeightAssignment::random(tree, rng, 5);
      auto m = weakening_matrix(tree, w, WeakeningRule::rooted).values;
      if (!is_positive_semidefinite(m).positive_semidefinite) {
        found = true;
        break;
      }
    }
  CHECK(found);
}

TEST_CASE("Hadamard product") {
  RationalMatrix a{{2, 1}, {1, 3}};
  CHECK(hadamard_product(a, RationalMatrix::identity(2)) == RationalMatrix{{2, 0}, {0, 3}});
  CHECK(hadamard_product(RationalMatrix::ones(2), a) == a);
  CHECK_THROWS_AS(hadamard_product(a, RationalMatrix::identity(3)), ValidationError);

  std::mt19937_64 rng(17);
  for (int t = 0; t < 40; ++t) {
    auto x = random_gram(rng, 4, 1 + t % 4);
    auto y = random_gram(rng, 4, 1 + (t / 4) % 4);
    CHECK(is_positive_semidefinite(hadamard_product(x, y)).positive_semidefinite);
  }
}
