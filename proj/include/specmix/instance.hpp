#pragma once

// List-colouring instances: graphs, per-vertex colour lists, pinnings, proper
// colourings, and the pin / downward-order operations on instances.

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "specmix/error.hpp"

namespace specmix {

using Vertex = int;
using Colour = int;
using ColourList = std::vector<Colour>;  // sorted, no duplicates
using Edge = std::pair<Vertex, Vertex>;

/// Default cap on backtracking nodes visited by exact enumeration.
inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// Simple undirected graph on vertices 0..n-1 with sorted adjacency lists.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : adj_(static_cast<std::size_t>(checked_count(n))) {}

  Graph(int n, std::span<const Edge> edges) : Graph(n) {
    for (const auto& [u, v] : edges) add_edge(u, v);
  }
  Graph(int n, std::initializer_list<Edge> edges)
      : Graph(n, std::span<const Edge>(edges.begin(), edges.size())) {}

  /// Throws ContractError on self-loops, duplicates, or out-of-range endpoints.
  void add_edge(Vertex u, Vertex v) {
    if (!contains(u) || !contains(v)) throw ContractError("edge endpoint out of range");
    if (u == v) throw ContractError("self-loop at vertex " + std::to_string(u));
    auto& au = adj_[static_cast<std::size_t>(u)];
    auto it = std::lower_bound(au.begin(), au.end(), v);
    if (it != au.end() && *it == v) {
      throw ContractError("duplicate edge {" + std::to_string(u) + "," + std::to_string(v) + "}");
    }
    au.insert(it, v);
    auto& av = adj_[static_cast<std::size_t>(v)];
    av.insert(std::lower_bound(av.begin(), av.end(), u), u);
  }

  int vertex_count() const { return static_cast<int>(adj_.size()); }
  bool contains(Vertex v) const { return v >= 0 && v < vertex_count(); }
  std::span<const Vertex> neighbours(Vertex v) const { return adj_.at(static_cast<std::size_t>(v)); }
  int degree(Vertex v) const { return static_cast<int>(neighbours(v).size()); }

  bool adjacent(Vertex u, Vertex v) const {
    const auto nb = neighbours(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  int max_degree() const {
    int d = 0;
    for (Vertex v = 0; v < vertex_count(); ++v) d = std::max(d, degree(v));
    return d;
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (Vertex u = 0; u < vertex_count(); ++u)
      for (Vertex v : neighbours(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  bool triangle_free() const {
    for (const auto& [u, v] : edges()) {
      const auto nu = neighbours(u);
      const auto nv = neighbours(v);
      auto i = nu.begin();
      auto j = nv.begin();
      while (i != nu.end() && j != nv.end()) {
        if (*i == *j) return false;
        if (*i < *j) ++i; else ++j;
      }
    }
    return true;
  }

  /// Subgraph induced by `keep` (strictly increasing); vertex keep[i] becomes i.
  Graph induced(std::span<const Vertex> keep) const {
    std::vector<int> remap(adj_.size(), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) remap[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
    Graph g(static_cast<int>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
      for (Vertex w : neighbours(keep[i])) {
        const int j = remap[static_cast<std::size_t>(w)];
        if (j > static_cast<int>(i)) g.add_edge(static_cast<int>(i), j);
      }
    return g;
  }

  bool connected(Vertex u, Vertex v) const {
    if (u == v) return true;
    std::vector<char> seen(adj_.size(), 0);
    std::queue<Vertex> frontier;
    frontier.push(u);
    seen[static_cast<std::size_t>(u)] = 1;
    while (!frontier.empty()) {
      const Vertex x = frontier.front();
      frontier.pop();
      for (Vertex y : neighbours(x)) {
        if (y == v) return true;
        if (!seen[static_cast<std::size_t>(y)]) {
          seen[static_cast<std::size_t>(y)] = 1;
          frontier.push(y);
        }
      }
    }
    return false;
  }

  bool is_connected() const {
    for (Vertex v = 1; v < vertex_count(); ++v)
      if (!connected(0, v)) return false;
    return true;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  static int checked_count(int n) {
    if (n < 0) throw ContractError("negative vertex count");
    return n;
  }

  std::vector<std::vector<Vertex>> adj_;
};

/// A graph with a finite colour list per vertex. Colour identifiers are
/// arbitrary nonnegative integers and are never renumbered.
class ListColouringInstance {
 public:
  ListColouringInstance() = default;

  ListColouringInstance(Graph graph, std::vector<ColourList> lists)
      : graph_(std::move(graph)), lists_(std::move(lists)) {
    if (static_cast<int>(lists_.size()) != graph_.vertex_count()) {
      throw ContractError("list count does not match vertex count");
    }
    for (auto& list : lists_) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      if (!list.empty() && list.front() < 0) throw ContractError("colour identifiers must be nonnegative");
    }
  }

  /// Every vertex gets the list {0, ..., q-1}.
  static ListColouringInstance uniform(Graph graph, int q) {
    ColourList all(static_cast<std::size_t>(std::max(q, 0)));
    for (int c = 0; c < q; ++c) all[static_cast<std::size_t>(c)] = c;
    std::vector<ColourList> lists(static_cast<std::size_t>(graph.vertex_count()), all);
    return {std::move(graph), std::move(lists)};
  }

  const Graph& graph() const { return graph_; }
  int size() const { return graph_.vertex_count(); }
  const ColourList& list(Vertex v) const { return lists_.at(static_cast<std::size_t>(v)); }
  const std::vector<ColourList>& lists() const { return lists_; }

  bool has_colour(Vertex v, Colour c) const {
    const auto& l = list(v);
    return std::binary_search(l.begin(), l.end(), c);
  }

  /// Local index of colour c in L(v), or -1.
  int colour_index(Vertex v, Colour c) const {
    const auto& l = list(v);
    auto it = std::lower_bound(l.begin(), l.end(), c);
    return (it != l.end() && *it == c) ? static_cast<int>(it - l.begin()) : -1;
  }

  bool has_empty_list() const {
    return std::any_of(lists_.begin(), lists_.end(), [](const ColourList& l) { return l.empty(); });
  }

  /// Canonical text form, used as a memoisation key.
  std::string key() const {
    std::ostringstream os;
    os << size() << '|';
    for (const auto& [u, v] : graph_.edges()) os << u << '-' << v << ',';
    os << '|';
    for (const auto& l : lists_) {
      for (Colour c : l) os << c << ',';
      os << ';';
    }
    return os.str();
  }

  friend bool operator==(const ListColouringInstance&, const ListColouringInstance&) = default;

 private:
  Graph graph_;
  std::vector<ColourList> lists_;
};

/// Partial assignment vertex -> colour.
class Pinning {
 public:
  Pinning() = default;
  Pinning(std::initializer_list<std::pair<const Vertex, Colour>> init) : map_(init) {}

  void assign(Vertex v, Colour c) { map_[v] = c; }
  bool contains(Vertex v) const { return map_.count(v) != 0; }
  Colour at(Vertex v) const { return map_.at(v); }
  std::size_t size() const { return map_.size(); }
  bool empty() const { return map_.empty(); }
  auto begin() const { return map_.begin(); }
  auto end() const { return map_.end(); }

  std::string to_string() const {
    std::string s;
    for (const auto& [v, c] : map_) {
      if (!s.empty()) s += ',';
      s += std::to_string(v) + '=' + std::to_string(c);
    }
    return s;
  }

  friend bool operator==(const Pinning&, const Pinning&) = default;

 private:
  std::map<Vertex, Colour> map_;
};

/// Throws InvalidPinning unless every pinned vertex exists and its colour is in its list.
inline void validate_pinning(const ListColouringInstance& inst, const Pinning& p) {
  for (const auto& [v, c] : p) {
    if (!inst.graph().contains(v)) throw InvalidPinning("pinned vertex " + std::to_string(v) + " does not exist");
    if (!inst.has_colour(v, c)) {
      throw InvalidPinning("colour " + std::to_string(c) + " is not in the list of vertex " + std::to_string(v));
    }
  }
}

/// True iff `colours` is a proper list colouring of `inst`.
inline bool is_proper(const ListColouringInstance& inst, std::span<const Colour> colours) {
  if (static_cast<int>(colours.size()) != inst.size()) return false;
  for (Vertex v = 0; v < inst.size(); ++v) {
    if (!inst.has_colour(v, colours[static_cast<std::size_t>(v)])) return false;
  }
  for (const auto& [u, v] : inst.graph().edges()) {
    if (colours[static_cast<std::size_t>(u)] == colours[static_cast<std::size_t>(v)]) return false;
  }
  return true;
}

/// A full proper list colouring.
struct ColouringState {
  std::vector<Colour> colours;

  static ColouringState checked(const ListColouringInstance& inst, std::vector<Colour> colours) {
    if (!is_proper(inst, colours)) throw ContractError("assignment is not a proper list colouring");
    return ColouringState{std::move(colours)};
  }

  Colour operator[](Vertex v) const { return colours[static_cast<std::size_t>(v)]; }
  friend auto operator<=>(const ColouringState&, const ColouringState&) = default;
};

/// Instance induced by a pinning, plus the vertex correspondence.
struct PinResult {
  ListColouringInstance instance;
  std::vector<Vertex> to_original;  // new index -> original vertex
  std::vector<int> from_original;   // original vertex -> new index, -1 if pinned
};

/// Removes the pinned vertices and deletes each pinned colour from the lists
/// of that vertex's unpinned neighbours. Free vertices keep their relative order.
inline PinResult pin(const ListColouringInstance& inst, const Pinning& p) {
  validate_pinning(inst, p);
  const int n = inst.size();
  PinResult out;
  out.from_original.assign(static_cast<std::size_t>(n), -1);
  for (Vertex v = 0; v < n; ++v) {
    if (!p.contains(v)) {
      out.from_original[static_cast<std::size_t>(v)] = static_cast<int>(out.to_original.size());
      out.to_original.push_back(v);
    }
  }
  std::vector<ColourList> lists;
  lists.reserve(out.to_original.size());
  for (Vertex v : out.to_original) {
    ColourList l = inst.list(v);
    for (Vertex w : inst.graph().neighbours(v)) {
      if (p.contains(w)) std::erase(l, p.at(w));
    }
    lists.push_back(std::move(l));
  }
  out.instance = ListColouringInstance(inst.graph().induced(out.to_original), std::move(lists));
  return out;
}

/// Maps a pinning on the original instance to the pinned instance's indices.
/// Vertices pinned by `applied` must not appear in `p`.
inline Pinning remap_pinning(const PinResult& applied, const Pinning& p) {
  Pinning out;
  for (const auto& [v, c] : p) {
    const int nv = applied.from_original.at(static_cast<std::size_t>(v));
    if (nv < 0) throw InvalidPinning("vertex " + std::to_string(v) + " is already pinned");
    out.assign(nv, c);
  }
  return out;
}

/// Child <= parent in the downward order: the child is the parent with one
/// vertex v removed, each neighbour of v losing at most one colour, every
/// other list unchanged. Vertex u of the child is parent vertex u (u < v) or
/// u + 1 (u >= v).
inline bool preceq(const ListColouringInstance& child, const ListColouringInstance& parent) {
  if (child.size() + 1 != parent.size()) return false;
  for (Vertex v = 0; v < parent.size(); ++v) {
    std::vector<Vertex> keep;
    for (Vertex u = 0; u < parent.size(); ++u)
      if (u != v) keep.push_back(u);
    if (!(parent.graph().induced(keep) == child.graph())) continue;
    bool ok = true;
    for (std::size_t i = 0; i < keep.size() && ok; ++i) {
      const Vertex pu = keep[i];
      const auto& before = parent.list(pu);
      const auto& after = child.list(static_cast<Vertex>(i));
      if (parent.graph().adjacent(v, pu)) {
        ok = std::includes(before.begin(), before.end(), after.begin(), after.end()) &&
             before.size() - after.size() <= 1;
      } else {
        ok = before == after;
      }
    }
    if (ok) return true;
  }
  return false;
}

/// Calls `visit(colours)` for every proper list colouring extending `p`.
/// Free vertices are assigned in index order, each from its list filtered by
/// already-coloured neighbours. `cap` bounds the number of search nodes.
template <class Visitor>
void for_each_colouring(const ListColouringInstance& inst, const Pinning& p, Visitor&& visit,
                        std::uint64_t cap = kDefaultEnumerationCap) {
  validate_pinning(inst, p);
  const int n = inst.size();
  std::vector<Colour> colours(static_cast<std::size_t>(n), -1);
  std::vector<char> fixed(static_cast<std::size_t>(n), 0);
  for (const auto& [v, c] : p) {
    colours[static_cast<std::size_t>(v)] = c;
    fixed[static_cast<std::size_t>(v)] = 1;
  }
  for (const auto& [u, v] : inst.graph().edges()) {
    if (fixed[static_cast<std::size_t>(u)] && fixed[static_cast<std::size_t>(v)] &&
        colours[static_cast<std::size_t>(u)] == colours[static_cast<std::size_t>(v)]) {
      return;  // the pinning itself is improper
    }
  }
  std::vector<Vertex> order;
  for (Vertex v = 0; v < n; ++v)
    if (!fixed[static_cast<std::size_t>(v)]) order.push_back(v);

  std::uint64_t nodes = 0;
  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    if (++nodes > cap) {
      throw CapacityError("enumeration exceeded the cap of " + std::to_string(cap) + " search nodes");
    }
    if (depth == order.size()) {
      visit(std::as_const(colours));
      return;
    }
    const Vertex v = order[depth];
    for (Colour c : inst.list(v)) {
      bool clash = false;
      for (Vertex w : inst.graph().neighbours(v)) {
        if (colours[static_cast<std::size_t>(w)] == c) {
          clash = true;
          break;
        }
      }
      if (clash) continue;
      colours[static_cast<std::size_t>(v)] = c;
      self(self, depth + 1);
    }
    colours[static_cast<std::size_t>(v)] = -1;
  };
  recurse(recurse, 0);
}

/// True iff some proper list colouring extends `p`.
inline bool is_feasible(const ListColouringInstance& inst, const Pinning& p = {},
                        std::uint64_t cap = kDefaultEnumerationCap) {
  struct Found {};
  try {
    for_each_colouring(inst, p, [](const std::vector<Colour>&) { throw Found{}; }, cap);
  } catch (const Found&) {
    return true;
  }
  return false;
}

}  // namespace specmix
