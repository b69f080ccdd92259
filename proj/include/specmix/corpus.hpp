#pragma once

// Instance families (path, cycle, star, random triangle-free), family spec
// strings such as "star:4:center=8:leaf=8", and the fixed test corpora.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "specmix/error.hpp"
#include "specmix/glauber.hpp"
#include "specmix/instance.hpp"

namespace specmix {

inline ColourList range_list(int q) {
  ColourList l(static_cast<std::size_t>(std::max(q, 0)));
  std::iota(l.begin(), l.end(), 0);
  return l;
}

inline ListColouringInstance path_instance(int n, int q) {
  Graph g(n);
  for (Vertex v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return ListColouringInstance::uniform(std::move(g), q);
}

inline ListColouringInstance cycle_instance(int n, int q) {
  if (n < 3) throw ParameterError("a cycle needs at least 3 vertices");
  Graph g(n);
  for (Vertex v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
  return ListColouringInstance::uniform(std::move(g), q);
}

/// Centre 0 with list [center], leaves 1..d with list [leaf].
inline ListColouringInstance star_family(int d, int center, int leaf) {
  Graph g(d + 1);
  for (Vertex v = 1; v <= d; ++v) g.add_edge(0, v);
  std::vector<ColourList> lists{range_list(center)};
  for (int v = 1; v <= d; ++v) lists.push_back(range_list(leaf));
  return {std::move(g), std::move(lists)};
}

struct RandomTriangleFreeSpec {
  int n = 6;
  std::uint64_t seed = 0;
  double p = 0.5;
  int max_degree = 0;  // 0: unconstrained
  int q = 4;           // uniform list [q] unless slack > 0
  int slack = 0;       // list of v is [deg(v) + slack]
  bool connected = true;
};

/// G(n, p) samples from SplitMix64(seed), rejected until triangle-free (and
/// within the degree cap, and connected if asked).
inline ListColouringInstance random_triangle_free(const RandomTriangleFreeSpec& spec) {
  if (spec.n < 1) throw ParameterError("n must be positive");
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw ParameterError("p must lie in [0, 1]");
  SplitMix64 rng(spec.seed);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Graph g(spec.n);
    for (Vertex u = 0; u < spec.n; ++u)
      for (Vertex v = u + 1; v < spec.n; ++v) {
        const double draw = static_cast<double>(rng.next() >> 11U) * 0x1.0p-53;
        if (draw < spec.p) g.add_edge(u, v);
      }
    if (!g.triangle_free()) continue;
    if (spec.max_degree > 0 && g.max_degree() > spec.max_degree) continue;
    if (spec.connected && !g.is_connected()) continue;
    std::vector<ColourList> lists;
    for (Vertex v = 0; v < spec.n; ++v)
      lists.push_back(range_list(spec.slack > 0 ? g.degree(v) + spec.slack : spec.q));
    return {std::move(g), std::move(lists)};
  }
  throw CapacityError("random triangle-free generator rejected 100000 samples");
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

inline long long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw ParseError("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected an integer for " + what + ", got '" + s + "'");
  }
}

inline double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ParseError("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected a number for " + what + ", got '" + s + "'");
  }
}

}  // namespace detail

/// Builds an instance from a family spec:
///   path:N:q=Q   cycle:N:q=Q   star:D:center=A:leaf=B
///   random-triangle-free:n=N:seed=S[:p=P][:maxdeg=D][:q=Q][:slack=K]
inline ListColouringInstance generate_instance(const std::string& spec) {
  const auto parts = detail::split(spec, ':');
  const std::string& family = parts.front();
  std::map<std::string, std::string> kv;
  std::vector<std::string> positional;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) {
      positional.push_back(parts[i]);
    } else {
      kv[parts[i].substr(0, eq)] = parts[i].substr(eq + 1);
    }
  }
  auto take_int = [&](const std::string& key, long long fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    const long long v = detail::parse_int(it->second, key);
    kv.erase(it);
    return v;
  };
  auto size_arg = [&]() {
    if (positional.size() != 1) throw ParseError("family '" + family + "' needs one size argument");
    return static_cast<int>(detail::parse_int(positional[0], "size"));
  };
  auto finish = [&](ListColouringInstance inst) {
    if (!kv.empty()) throw ParseError("unknown key '" + kv.begin()->first + "' for family '" + family + "'");
    return inst;
  };

  if (family == "path") {
    const int n = size_arg();
    return finish(path_instance(n, static_cast<int>(take_int("q", 3))));
  }
  if (family == "cycle") {
    const int n = size_arg();
    return finish(cycle_instance(n, static_cast<int>(take_int("q", 3))));
  }
  if (family == "star") {
    const int d = size_arg();
    const int center = static_cast<int>(take_int("center", d + 1));
    return finish(star_family(d, center, static_cast<int>(take_int("leaf", center))));
  }
  if (family == "random-triangle-free") {
    if (!positional.empty()) throw ParseError("random-triangle-free takes key=value arguments only");
    RandomTriangleFreeSpec s;
    s.n = static_cast<int>(take_int("n", s.n));
    s.seed = static_cast<std::uint64_t>(take_int("seed", 0));
    s.max_degree = static_cast<int>(take_int("maxdeg", 0));
    s.q = static_cast<int>(take_int("q", s.q));
    s.slack = static_cast<int>(take_int("slack", 0));
    if (auto it = kv.find("p"); it != kv.end()) {
      s.p = detail::parse_double(it->second, "p");
      kv.erase(it);
    }
    return finish(random_triangle_free(s));
  }
  throw ParseError("unknown family '" + family + "'");
}

/// Connected graphs on n vertices, one per isomorphism class, found by
/// brute force over edge subsets with a canonical relabelling.
inline std::vector<Graph> connected_graphs(int n) {
  if (n < 1 || n > 6) throw ParameterError("connected graph enumeration supports 1..6 vertices");
  std::vector<Edge> slots;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) slots.emplace_back(u, v);
  std::vector<std::vector<int>> perms;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  auto slot_of = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    return static_cast<std::size_t>(std::find(slots.begin(), slots.end(), Edge{a, b}) - slots.begin());
  };
  std::set<std::uint32_t> seen;
  std::vector<Graph> out;
  for (std::uint32_t mask = 0; mask < (1U << slots.size()); ++mask) {
    std::uint32_t canon = mask;
    for (const auto& pm : perms) {
      std::uint32_t img = 0;
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (mask & (1U << s))
          img |= 1U << slot_of(pm[static_cast<std::size_t>(slots[s].first)], pm[static_cast<std::size_t>(slots[s].second)]);
      canon = std::min(canon, img);
    }
    if (!seen.insert(canon).second) continue;
    Graph g(n);
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (canon & (1U << s)) g.add_edge(slots[s].first, slots[s].second);
    if (g.is_connected()) out.push_back(std::move(g));
  }
  return out;
}

/// Every connected graph on 1..5 vertices with lists drawn from {0,1,2,3}:
/// all lists {0..3}, all lists {0..2}, and six seeded random nonempty
/// subsets per vertex. Infeasible instances and duplicates are dropped.
inline std::vector<ListColouringInstance> small_corpus() {
  std::vector<ListColouringInstance> out;
  std::set<std::string> keys;
  auto add = [&](ListColouringInstance inst) {
    if (!is_feasible(inst)) return;
    if (keys.insert(inst.key()).second) out.push_back(std::move(inst));
  };
  std::uint64_t graph_id = 0;
  for (int n = 1; n <= 5; ++n) {
    for (const Graph& g : connected_graphs(n)) {
      ++graph_id;
      add(ListColouringInstance::uniform(g, 4));
      add(ListColouringInstance::uniform(g, 3));
      SplitMix64 rng(0x5EED0000ULL + graph_id);
      for (int rep = 0; rep < 6; ++rep) {
        std::vector<ColourList> lists;
        for (Vertex v = 0; v < n; ++v) {
          const auto mask = static_cast<unsigned>(1 + rng.below(15));
          ColourList l;
          for (int c = 0; c < 4; ++c)
            if (mask & (1U << static_cast<unsigned>(c))) l.push_back(c);
          lists.push_back(std::move(l));
        }
        add(ListColouringInstance(g, std::move(lists)));
      }
    }
  }
  return out;
}

/// Named instances that exercise each module quickly.
inline std::vector<std::pair<std::string, ListColouringInstance>> quick_corpus() {
  std::vector<std::pair<std::string, ListColouringInstance>> out;
  for (const char* spec : {"path:1:q=2", "path:2:q=3", "path:3:q=3", "path:4:q=3", "cycle:4:q=3", "cycle:5:q=3",
                           "star:3:center=3:leaf=3", "star:4:center=4:leaf=3"}) {
    out.emplace_back(spec, generate_instance(spec));
  }
  out.emplace_back("two-isolated:q=2", ListColouringInstance::uniform(Graph(2), 2));
  out.emplace_back("triangle:q=3", ListColouringInstance::uniform(Graph(3, {{0, 1}, {1, 2}, {0, 2}}), 3));
  return out;
}

/// Instances satisfying the list-size and triangle-free hypothesis, with
/// the degree bound chi and delta each one is checked against.
struct BoundsCase {
  std::string name;
  ListColouringInstance instance;
  int chi;
  double delta;
};

inline std::vector<BoundsCase> bounds_corpus() {
  return {
      {"star:3:center=6:leaf=6", generate_instance("star:3:center=6:leaf=6"), 3, 0.23},
      {"star:4:center=8:leaf=8", generate_instance("star:4:center=8:leaf=8"), 4, 0.23},
      {"path:4 lists deg+3", [] {
         Graph g(4, {{0, 1}, {1, 2}, {2, 3}});
         return ListColouringInstance(g, {range_list(4), range_list(5), range_list(5), range_list(4)});
       }(),
       3, 0.23},
      {"random-triangle-free:n=6:seed=7:maxdeg=3:slack=3",
       generate_instance("random-triangle-free:n=6:seed=7:maxdeg=3:slack=3"), 3, 0.23},
  };
}

}  // namespace specmix
