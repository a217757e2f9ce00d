#include "forestcalc/forest.hpp"

#include "forestcalc/errors.hpp"
#include "forestcalc/limits.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

namespace forestcalc {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

void check_vertex_count(int n) {
  if (n < 1) throw ValidationError("vertex count must be at least 1");
  require_within(n, limits().trees, "forest/tree enumeration size n");
}

} // namespace

Link make_link(int i, int j) {
  if (i < 0 || j < 0) throw ValidationError("negative vertex in link");
  if (i == j) throw ValidationError("link endpoints must differ (" + std::to_string(i) + ")");
  return i < j ? Link{i, j} : Link{j, i};
}

int link_index(int n, Link l) {
  // pairs (0,1) .. (0,n-1), (1,2) .. are listed row by row
  return l.a * n - l.a * (l.a + 1) / 2 + (l.b - l.a - 1);
}

std::vector<Link> all_links(int n) {
  std::vector<Link> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.push_back({i, j});
  return out;
}

std::optional<Forest> Forest::try_from_links(int n, std::vector<Link> links) {
  if (n < 1) throw ValidationError("vertex count must be at least 1");
  for (const auto& l : links) {
    if (l.a < 0 || l.b >= n || l.a >= l.b)
      throw ValidationError("link {" + std::to_string(l.a) + "," + std::to_string(l.b) + "} is not a pair of distinct vertices in range");
  }
  std::sort(links.begin(), links.end());
  if (std::adjacent_find(links.begin(), links.end()) != links.end()) throw ValidationError("duplicate link");
  if (links.size() > 32) throw SizeLimitError("forests are limited to 32 links");

  UnionFind uf(n);
  for (const auto& l : links)
    if (!uf.unite(l.a, l.b)) return std::nullopt;

  Forest f;
  f.n_ = n;
  f.links_ = std::move(links);
  f.cluster_.assign(n, -1);
  f.layer_.assign(n, 0);
  f.parent_.assign(n, -1);
  f.parent_link_.assign(n, -1);

  std::vector<std::vector<std::pair<int, int>>> adjacency(n);
  for (int k = 0; k < static_cast<int>(f.links_.size()); ++k) {
    adjacency[f.links_[k].a].push_back({f.links_[k].b, k});
    adjacency[f.links_[k].b].push_back({f.links_[k].a, k});
  }
  for (int root = 0; root < n; ++root) {
    if (f.cluster_[root] != -1) continue;
    int id = static_cast<int>(f.clusters_.size());
    f.clusters_.emplace_back();
    std::queue<int> todo;
    todo.push(root);
    f.cluster_[root] = id;
    while (!todo.empty()) {
      int v = todo.front();
      todo.pop();
      f.clusters_[id].push_back(v);
      for (auto [w, k] : adjacency[v]) {
        if (f.cluster_[w] != -1) continue;
        f.cluster_[w] = id;
        f.layer_[w] = f.layer_[v] + 1;
        f.parent_[w] = v;
        f.parent_link_[w] = k;
        todo.push(w);
      }
    }
    std::sort(f.clusters_[id].begin(), f.clusters_[id].end());
  }
  return f;
}

Forest Forest::from_links(int n, std::vector<Link> links) {
  auto f = try_from_links(n, std::move(links));
  if (!f) throw ValidationError("link set contains a loop");
  return *std::move(f);
}

int Forest::find(Link l) const {
  auto it = std::lower_bound(links_.begin(), links_.end(), l);
  return (it != links_.end() && *it == l) ? static_cast<int>(it - links_.begin()) : -1;
}

std::optional<std::vector<int>> Forest::path_links(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw ValidationError("path endpoint out of range");
  if (!connected(i, j)) return std::nullopt;
  std::vector<int> up, down;
  while (layer_[i] > layer_[j]) {
    up.push_back(parent_link_[i]);
    i = parent_[i];
  }
  while (layer_[j] > layer_[i]) {
    down.push_back(parent_link_[j]);
    j = parent_[j];
  }
  while (i != j) {
    up.push_back(parent_link_[i]);
    i = parent_[i];
    down.push_back(parent_link_[j]);
    j = parent_[j];
  }
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

std::optional<std::uint32_t> Forest::path_mask(int i, int j) const {
  auto path = path_links(i, j);
  if (!path) return std::nullopt;
  std::uint32_t mask = 0;
  for (int k : *path) mask |= std::uint32_t{1} << k;
  return mask;
}

Tree::Tree(Forest f) : Forest(std::move(f)) {
  if (!is_spanning_tree()) throw ValidationError("link set does not connect all vertices");
}

std::optional<std::vector<Link>> tree_path(const Forest& forest, int i, int j) {
  auto idx = forest.path_links(i, j);
  if (!idx) return std::nullopt;
  std::vector<Link> out;
  out.reserve(idx->size());
  for (int k : *idx) out.push_back(forest.links()[k]);
  return out;
}

void for_each_forest(int n, const std::function<void(const Forest&)>& visit) {
  check_vertex_count(n);
  const auto pool = all_links(n);
  std::vector<Link> chosen;
  // depth-first over increasing link indices: preorder is lexicographic
  std::function<void(std::size_t)> extend = [&](std::size_t next) {
    visit(Forest::from_links(n, chosen));
    for (std::size_t k = next; k < pool.size(); ++k) {
      chosen.push_back(pool[k]);
      if (Forest::try_from_links(n, chosen)) extend(k + 1);
      chosen.pop_back();
    }
  };
  extend(0);
}

std::vector<Forest> enumerate_forests(int n) {
  std::vector<Forest> out;
  for_each_forest(n, [&](const Forest& f) { out.push_back(f); });
  return out;
}

Tree prufer_decode(int n, const std::vector<int>& sequence) {
  if (n < 1) throw ValidationError("vertex count must be at least 1");
  if (n == 1) {
    if (!sequence.empty()) throw ValidationError("Prufer sequence of a single vertex must be empty");
    return Tree::from_links(1, {});
  }
  if (static_cast<int>(sequence.size()) != n - 2) throw ValidationError("Prufer sequence must have length n - 2");
  std::vector<int> degree(n, 1);
  for (int v : sequence) {
    if (v < 0 || v >= n) throw ValidationError("Prufer entry out of range");
    ++degree[v];
  }
  std::vector<Link> links;
  links.reserve(n - 1);
  for (int v : sequence) {
    int leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    links.push_back(make_link(leaf, v));
    --degree[leaf];
    --degree[v];
  }
  int u = -1;
  for (int v = 0; v < n; ++v)
    if (degree[v] == 1) {
      if (u < 0) u = v;
      else {
        links.push_back(make_link(u, v));
        break;
      }
    }
  return Tree::from_links(n, std::move(links));
}

std::vector<int> prufer_encode(const Tree& tree) {
  const int n = tree.vertex_count();
  if (n <= 2) return {};
  std::vector<std::vector<int>> adjacency(n);
  std::vector<int> degree(n, 0);
  for (const auto& l : tree.links()) {
    adjacency[l.a].push_back(l.b);
    adjacency[l.b].push_back(l.a);
    ++degree[l.a];
    ++degree[l.b];
  }
  std::vector<bool> removed(n, false);
  std::vector<int> seq;
  for (int step = 0; step < n - 2; ++step) {
    int leaf = 0;
    while (removed[leaf] || degree[leaf] != 1) ++leaf;
    for (int w : adjacency[leaf])
      if (!removed[w]) {
        seq.push_back(w);
        --degree[w];
      }
    removed[leaf] = true;
  }
  return seq;
}

std::vector<Tree> enumerate_trees(int n) {
  check_vertex_count(n);
  std::vector<Tree> out;
  if (n <= 2) {
    out.push_back(prufer_decode(n, {}));
    return out;
  }
  std::vector<int> seq(n - 2, 0);
  while (true) {
    out.push_back(prufer_decode(n, seq));
    int pos = n - 3;
    while (pos >= 0 && seq[pos] == n - 1) seq[pos--] = 0;
    if (pos < 0) break;
    ++seq[pos];
  }
  std::sort(out.begin(), out.end(), [](const Tree& x, const Tree& y) { return x.links() < y.links(); });
  return out;
}

Integer count_trees_by_degree(int n, const std::vector<int>& degrees) {
  if (n < 2) throw ValidationError("degree counting needs n >= 2");
  if (static_cast<int>(degrees.size()) != n) throw ValidationError("degree sequence length must equal n");
  long sum = 0;
  for (int d : degrees) {
    if (d < 1) throw ValidationError("every vertex of a tree has degree at least 1");
    sum += d;
  }
  if (sum != 2L * (n - 1)) throw ValidationError("degrees must sum to 2(n-1)");
  Integer count = factorial_z(static_cast<unsigned>(n - 2));
  for (int d : degrees) count /= factorial_z(static_cast<unsigned>(d - 1));
  return count;
}

} // namespace forestcalc
