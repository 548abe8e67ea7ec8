// Copyright 2026 The xclust Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON and CSV serialization of point sets and threshold trees.

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "xclust/core.hpp"

namespace xclust {

using json = nlohmann::json;

/// %.17g, enough digits for a lossless double round trip.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline json to_json(const PointSet& ps) {
  return json{{"dim", ps.dim()}, {"points", ps.rows()}};
}

/// Accepts either {"dim": d, "points": [[...], ...]} or a bare array of rows.
inline PointSet point_set_from_json(const json& j, const std::string& field = "points") {
  try {
    const json& rows = j.is_array() ? j : j.at("points");
    if (!rows.is_array() || rows.empty())
      throw InvalidInput(field + ": expected a nonempty array of points");
    std::vector<std::vector<double>> out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!rows[r].is_array()) throw InvalidInput(field + ": row " + std::to_string(r) + " is not an array");
      std::vector<double> row;
      for (const auto& v : rows[r]) {
        if (!v.is_number())
          throw InvalidInput(field + ": row " + std::to_string(r) + " has a non-numeric coordinate");
        row.push_back(v.get<double>());
      }
      out.push_back(std::move(row));
    }
    PointSet ps = PointSet::from_rows(out);
    if (j.is_object() && j.contains("dim") && j.at("dim").get<std::size_t>() != ps.dim())
      throw InvalidInput(field + ": \"dim\" does not match the row length");
    return ps;
  } catch (const json::exception& e) {
    throw InvalidInput(field + ": " + e.what());
  } catch (const InvalidInput& e) {
    const std::string msg = e.what();
    if (msg.rfind(field, 0) == 0) throw;
    throw InvalidInput(field + ": " + msg);
  }
}

/// CSV with one point per row, no header.
inline std::string to_csv(const PointSet& ps) {
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = 0; j < ps.dim(); ++j) {
      if (j) out += ',';
      out += format_double(ps.at(i, j));
    }
    out += '\n';
  }
  return out;
}

inline PointSet point_set_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw InvalidInput("csv: line " + std::to_string(lineno) + ": cannot parse '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  return PointSet::from_rows(rows);
}

namespace detail {

inline json node_to_json(const ThresholdTree& t, std::size_t id) {
  const auto& n = t.node(id);
  if (n.is_leaf()) {
    json leaf = json::object();
    leaf["center"] = n.center == ThresholdTree::npos ? json(nullptr) : json(n.center);
    return leaf;
  }
  return json{{"dim", n.cut.dim},
              {"theta", n.cut.theta},
              {"left", node_to_json(t, n.left)},
              {"right", node_to_json(t, n.right)}};
}

inline void node_from_json(ThresholdTree& t, std::size_t id, const json& j) {
  if (j.contains("center")) {
    if (!j.at("center").is_null()) t.set_center(id, j.at("center").get<std::size_t>());
    return;
  }
  const ThresholdCut cut{j.at("dim").get<std::size_t>(), j.at("theta").get<double>()};
  const auto [l, r] = t.split(id, cut);
  node_from_json(t, l, j.at("left"));
  node_from_json(t, r, j.at("right"));
}

}  // namespace detail

/// Internal node {"dim", "theta", "left", "right"}; leaf {"center"}.
inline json to_json(const ThresholdTree& tree) { return detail::node_to_json(tree, 0); }

inline ThresholdTree tree_from_json(const json& j, std::size_t dim) {
  ThresholdTree t(dim);
  try {
    detail::node_from_json(t, 0, j);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("tree: ") + e.what());
  }
  return t;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json read_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

}  // namespace xclust
