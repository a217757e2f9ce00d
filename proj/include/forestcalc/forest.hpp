#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "forestcalc/rational.hpp"

namespace forestcalc {

/// Unordered vertex pair {a, b}, stored with a < b. Vertices are 0-based.
struct Link {
  int a = 0;
  int b = 0;

  friend auto operator<=>(const Link&, const Link&) = default;
};

/// Builds the link {i, j}; throws ValidationError when i == j or a vertex is negative.
Link make_link(int i, int j);

/// Position of a link in the lexicographic listing of all n(n-1)/2 pairs.
int link_index(int n, Link l);

/// All pairs of {0..n-1} in lexicographic order.
std::vector<Link> all_links(int n);

/// A loop-free set of links on n vertices together with its cluster
/// structure. Each cluster is rooted at its least vertex; layers are the
/// distances to that root. Immutable once built.
class Forest {
public:
  /// Validates endpoints, duplicates and acyclicity; links are stored sorted.
  static Forest from_links(int n, std::vector<Link> links);
  static std::optional<Forest> try_from_links(int n, std::vector<Link> links);
  static Forest empty(int n) { return from_links(n, {}); }

  int vertex_count() const { return n_; }
  std::size_t size() const { return links_.size(); }
  const std::vector<Link>& links() const { return links_; }
  const std::vector<std::vector<int>>& clusters() const { return clusters_; }

  int cluster_of(int v) const { return cluster_[v]; }
  int root_of(int v) const { return clusters_[cluster_[v]].front(); }
  int layer(int v) const { return layer_[v]; }
  /// Ancestor of v (toward the cluster root), or -1 for a root.
  int parent(int v) const { return parent_[v]; }
  /// Index into links() of the link joining v to its parent, or -1.
  int parent_link(int v) const { return parent_link_[v]; }

  bool connected(int i, int j) const { return cluster_[i] == cluster_[j]; }
  bool is_spanning_tree() const { return clusters_.size() == 1; }
  /// Index of l in links(), or -1.
  int find(Link l) const;

  /// Link indices of the unique path from i to j, in walking order;
  /// nullopt if i and j lie in different clusters, empty when i == j.
  std::optional<std::vector<int>> path_links(int i, int j) const;
  /// Same path as a bitmask over link indices.
  std::optional<std::uint32_t> path_mask(int i, int j) const;

  friend bool operator==(const Forest& a, const Forest& b) { return a.n_ == b.n_ && a.links_ == b.links_; }

private:
  Forest() = default;

  int n_ = 0;
  std::vector<Link> links_;
  std::vector<std::vector<int>> clusters_;
  std::vector<int> cluster_;
  std::vector<int> layer_;
  std::vector<int> parent_;
  std::vector<int> parent_link_;
};

/// A forest with a single cluster covering every vertex. On one vertex the
/// empty link set is the tree.
class Tree : public Forest {
public:
  explicit Tree(Forest f);
  static Tree from_links(int n, std::vector<Link> links) { return Tree(Forest::from_links(n, std::move(links))); }
  int root() const { return 0; }
};

/// Unique path between i and j as a list of links; nullopt across clusters.
std::optional<std::vector<Link>> tree_path(const Forest& forest, int i, int j);

/// Visits every loop-free link subset of the complete graph on n vertices,
/// including the empty one, in lexicographic order of sorted link lists.
void for_each_forest(int n, const std::function<void(const Forest&)>& visit);
std::vector<Forest> enumerate_forests(int n);

/// Labeled spanning trees on n vertices via Prufer decoding, returned in
/// lexicographic order of sorted link lists. n = 1 yields the empty tree.
std::vector<Tree> enumerate_trees(int n);

/// Tree encoded by a Prufer sequence of length n - 2 (entries in [0, n)).
Tree prufer_decode(int n, const std::vector<int>& sequence);
std::vector<int> prufer_encode(const Tree& tree);

/// Number of labeled trees with vertex i of degree degrees[i]:
/// (n-2)! / prod (d_i - 1)!.
Integer count_trees_by_degree(int n, const std::vector<int>& degrees);

} // namespace forestcalc
