#pragma once

// Instance and matrix (de)serialisation with nlohmann::json.
// Instance: {"n": 3, "edges": [[0,1],[1,2]], "lists": [[0,1,2],[0,1,2],[0,1,2]]}

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "specmix/error.hpp"
#include "specmix/exact.hpp"
#include "specmix/instance.hpp"
#include "specmix/matrix.hpp"

namespace specmix {

using json = nlohmann::json;

inline json to_json(const ListColouringInstance& inst) {
  json edges = json::array();
  for (const auto& [u, v] : inst.graph().edges()) edges.push_back({u, v});
  return {{"n", inst.size()}, {"edges", edges}, {"lists", inst.lists()}};
}

inline ListColouringInstance instance_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ParseError("instance must be a JSON object");
    for (const char* key : {"n", "edges", "lists"})
      if (!j.contains(key)) throw ParseError(std::string("instance is missing \"") + key + "\"");
    if (!j.at("n").is_number_integer()) throw ParseError("\"n\" must be an integer");
    const int n = j.at("n").get<int>();
    if (n < 0) throw ParseError("\"n\" must be nonnegative");
    Graph g(n);
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
        throw ParseError("each edge must be a pair of integers");
      }
      g.add_edge(e[0].get<int>(), e[1].get<int>());
    }
    const json& lj = j.at("lists");
    if (!lj.is_array() || static_cast<int>(lj.size()) != n) throw ParseError("\"lists\" must hold one list per vertex");
    std::vector<ColourList> lists;
    for (const auto& l : lj) {
      if (!l.is_array()) throw ParseError("each colour list must be an array");
      ColourList cl;
      for (const auto& c : l) {
        if (!c.is_number_integer() || c.get<long long>() < 0) throw ParseError("colours must be nonnegative integers");
        cl.push_back(c.get<int>());
      }
      lists.push_back(std::move(cl));
    }
    return {std::move(g), std::move(lists)};
  } catch (const ParseError&) {
    throw;
  } catch (const ContractError& e) {
    throw ParseError(std::string("invalid instance: ") + e.what());
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid instance JSON: ") + e.what());
  }
}

inline ListColouringInstance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("malformed JSON in '" + path + "': " + e.what());
  }
  return instance_from_json(j);
}

inline json to_json(const Matrix& m) { return m.to_rows(); }

inline json to_json(const InfluenceMatrix& im) {
  json arg = json::array();
  for (const auto& row : im.argmax) {
    json r = json::array();
    for (const auto& [a, b] : row) r.push_back({a, b});
    arg.push_back(r);
  }
  return {{"order", im.order},
          {"entries", to_json(im.entries)},
          {"convention", im.convention == DiagonalConvention::psi_zero ? "psi_zero" : "r_indicator"},
          {"argmax_pairs", arg}};
}

inline json to_json(const Pinning& p) {
  json j = json::object();
  for (const auto& [v, c] : p) j[std::to_string(v)] = c;
  return j;
}

}  // namespace specmix
