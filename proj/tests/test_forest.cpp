#include "doctest.h"

#include "forestcalc/errors.hpp"
#include "forestcalc/forest.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

using namespace forestcalc;

namespace {

// Oracle: filter every subset of the complete graph for acyclicity with a
// plain depth-first component walk (no union-find, no Forest class).
bool acyclic_by_dfs(int n, const std::vector<Link>& links) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& l : links) {
    adj[l.a].push_back(l.b);
    adj[l.b].push_back(l.a);
  }
  std::vector<int> seen(n, 0);
  int components = 0;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++components;
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
  }
  // a graph is a forest iff |E| = |V| - #components
  return static_cast<int>(links.size()) == n - components;
}

std::vector<std::vector<Link>> brute_forests(int n, bool spanning_only) {
  auto pool = all_links(n);
  std::vector<std::vector<Link>> out;
  for (std::uint32_t mask = 0; mask < (1u << pool.size()); ++mask) {
    std::vector<Link> links;
    for (std::size_t k = 0; k < pool.size(); ++k)
      if (mask & (1u << k)) links.push_back(pool[k]);
    if (!acyclic_by_dfs(n, links)) continue;
    if (spanning_only && static_cast<int>(links.size()) != n - 1) continue;
    out.push_back(links);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> degrees_of(const Forest& f) {
  std::vector<int> d(f.vertex_count(), 0);
  for (const auto& l : f.links()) {
    ++d[l.a];
    ++d[l.b];
  }
  return d;
}

} // namespace

TEST_CASE("forest enumeration small cases") {
  CHECK(enumerate_forests(1).size() == 1);
  CHECK(enumerate_forests(1).front().size() == 0);

  auto two = enumerate_forests(2);
  REQUIRE(two.size() == 2);
  CHECK(two[0].size() == 0);
  CHECK(two[1].links() == std::vector<Link>{{0, 1}});

  auto three = enumerate_forests(3);
  CHECK(three.size() == 7);
  CHECK(std::count_if(three.begin(), three.end(), [](const Forest& f) { return f.size() == 2; }) == 3);
}

TEST_CASE("forest enumeration matches subset filtering and is canonical") {
  for (int n = 1; n <= 5; ++n) {
    CAPTURE(n);
    auto forests = enumerate_forests(n);
    std::vector<std::vector<Link>> got;
    for (const auto& f : forests) got.push_back(f.links());
    CHECK(std::is_sorted(got.begin(), got.end()));
    CHECK(got == brute_forests(n, false));
  }
}

TEST_CASE("tree enumeration: Cayley counts and oracle agreement") {
  CHECK(enumerate_trees(1).size() == 1);
  CHECK(enumerate_trees(1).front().size() == 0);
  CHECK(enumerate_trees(2).size() == 1);
  CHECK(enumerate_trees(4).size() == 16);
  const std::size_t expected[] = {1, 1, 1, 3, 16, 125, 1296, 16807};
  for (int n = 2; n <= 7; ++n) CHECK(enumerate_trees(n).size() == expected[n]);
  for (int n = 2; n <= 5; ++n) {
    CAPTURE(n);
    std::vector<std::vector<Link>> got;
    for (const auto& t : enumerate_trees(n)) got.push_back(t.links());
    CHECK(got == brute_forests(n, true));
  }
}

TEST_CASE("Prufer encoding inverts decoding") {
  for (int n = 3; n <= 6; ++n)
    for (const auto& t : enumerate_trees(n)) CHECK(prufer_decode(n, prufer_encode(t)) == t);
}

TEST_CASE("adding a non-member link to a spanning tree closes a loop") {
  for (const auto& t : enumerate_trees(5))
    for (const auto& l : all_links(5)) {
      if (t.find(l) >= 0) continue;
      auto links = t.links();
      links.push_back(l);
      CHECK_FALSE(Forest::try_from_links(5, links).has_value());
    }
}

TEST_CASE("size limit and validation errors") {
  CHECK_THROWS_AS(enumerate_forests(0), ValidationError);
  CHECK_THROWS_AS(enumerate_trees(99), SizeLimitError);
  CHECK_THROWS_AS(make_link(2, 2), ValidationError);
  CHECK_THROWS_AS(Forest::from_links(3, {{0, 1}, {1, 2}, {0, 2}}), ValidationError);
  CHECK_THROWS_AS(Forest::from_links(3, {{0, 1}, {0, 1}}), ValidationError);
  CHECK_THROWS_AS(Forest::from_links(2, {{0, 5}}), ValidationError);
  CHECK_THROWS_AS(Tree(Forest::from_links(3, {{0, 1}})), ValidationError);
}

TEST_CASE("tree_path") {
  auto chain = Forest::from_links(3, {{0, 1}, {1, 2}});
  auto p = tree_path(chain, 0, 2);
  REQUIRE(p.has_value());
  CHECK(*p == std::vector<Link>{{0, 1}, {1, 2}});
  auto back = tree_path(chain, 2, 0);
  REQUIRE(back.has_value());
  CHECK(*back == std::vector<Link>{{1, 2}, {0, 1}});

  auto single = Forest::from_links(3, {{0, 1}});
  CHECK_FALSE(tree_path(single, 0, 2).has_value());
  CHECK(tree_path(single, 1, 1)->empty());
  CHECK_THROWS_AS(tree_path(single, 0, 7), ValidationError);
}

TEST_CASE("tree_path exists exactly within clusters") {
  for (const auto& f : enumerate_forests(5))
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        auto p = tree_path(f, i, j);
        CHECK(p.has_value() == f.connected(i, j));
        if (!p || p->empty()) continue;
        // consecutive links share an endpoint and the walk starts at i
        int at = i;
        for (const auto& l : *p) {
          REQUIRE((l.a == at || l.b == at));
          at = l.a == at ? l.b : l.a;
        }
        CHECK(at == j);
      }
}

TEST_CASE("rooted layers use the least vertex of each cluster") {
  auto f = Forest::from_links(5, {{1, 3}, {3, 4}, {0, 2}});
  CHECK(f.root_of(4) == 1);
  CHECK(f.layer(1) == 0);
  CHECK(f.layer(3) == 1);
  CHECK(f.layer(4) == 2);
  CHECK(f.parent(4) == 3);
  CHECK(f.layer(2) == 1);
  CHECK(f.parent(0) == -1);
}

TEST_CASE("count_trees_by_degree") {
  CHECK(count_trees_by_degree(3, {2, 1, 1}) == 1);
  CHECK(count_trees_by_degree(4, {1, 1, 1, 3}) == 1);
  CHECK(count_trees_by_degree(4, {2, 2, 1, 1}) == 2);
  CHECK_THROWS_AS(count_trees_by_degree(4, {1, 1, 1, 1}), ValidationError);
  CHECK_THROWS_AS(count_trees_by_degree(3, {0, 2, 2}), ValidationError);

  for (int n = 2; n <= 6; ++n) {
    CAPTURE(n);
    std::map<std::vector<int>, long> tally;
    for (const auto& t : enumerate_trees(n)) ++tally[degrees_of(t)];
    Integer total = 0;
    for (const auto& [degrees, count] : tally) {
      CHECK(count_trees_by_degree(n, degrees) == count);
      total += count_trees_by_degree(n, degrees);
    }
    Integer cayley;
    mpz_ui_pow_ui(cayley.get_mpz_t(), n, n - 2);
    CHECK(total == cayley);
  }
}
