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

// Seeded experiments: instance files, run configuration, and reports.

#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "xclust/core.hpp"
#include "xclust/cut_process.hpp"
#include "xclust/instances.hpp"
#include "xclust/io.hpp"
#include "xclust/kmeans.hpp"
#include "xclust/oracle.hpp"
#include "xclust/random_thresholds.hpp"
#include "xclust/stats.hpp"

namespace xclust {

inline constexpr const char* kToolVersion = "0.3.0";
inline constexpr int kReportSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Instance files

inline json to_json(const GeneratedInstance& inst) {
  json meta = json::object();
  meta["generator"] = inst.generator;
  for (const auto& [k, v] : inst.params) meta[k] = v;
  meta["reference_cost"] = inst.reference_cost;
  return json{{"points", to_json(inst.points)},
              {"centers", to_json(inst.clustering.centers())},
              {"assignment", inst.clustering.assignment()},
              {"q", inst.clustering.q()},
              {"metadata", meta}};
}

namespace detail {

inline std::vector<std::size_t> assignment_from_json(const json& j, std::size_t n_centers) {
  if (!j.is_array()) throw InvalidInput("assignment: expected an array");
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_number_integer() || j[r].get<long long>() < 0)
      throw InvalidInput("assignment: row " + std::to_string(r) + " is not a nonnegative integer");
    out.push_back(j[r].get<std::size_t>());
    if (out.back() >= n_centers)
      throw InvalidInput("assignment: row " + std::to_string(r) + " refers to center " +
                         std::to_string(out.back()) + " but only " + std::to_string(n_centers) +
                         " centers exist");
  }
  return out;
}

inline GeneratedInstance instance_from_parts(PointSet points, const json& j) {
  if (!j.contains("centers")) throw InvalidInput("instance: missing field \"centers\"");
  PointSet centers = point_set_from_json(j.at("centers"), "centers");
  if (centers.dim() != points.dim())
    throw InvalidInput("centers: dimension " + std::to_string(centers.dim()) + " does not match points dimension " +
                       std::to_string(points.dim()));
  if (centers.has_duplicates()) throw InvalidInput("centers: duplicate centers");
  const int q = j.value("q", 1);
  std::vector<std::size_t> assignment = j.contains("assignment")
                                            ? assignment_from_json(j.at("assignment"), centers.size())
                                            : nearest_assignment(points, centers, q);
  if (assignment.size() != points.size())
    throw InvalidInput("assignment: " + std::to_string(assignment.size()) + " entries for " +
                       std::to_string(points.size()) + " points");
  Clustering clustering(std::move(centers), std::move(assignment), q);
  GeneratedInstance inst{std::move(points), std::move(clustering), "file", {}, 0.0};
  if (j.contains("metadata") && j.at("metadata").is_object()) {
    for (const auto& [k, v] : j.at("metadata").items()) {
      if (k == "generator" && v.is_string()) inst.generator = v.get<std::string>();
      else if (v.is_number() && k != "reference_cost") inst.params[k] = v.get<double>();
    }
  }
  inst.reference_cost = cost_q(inst.points, inst.clustering);
  return inst;
}

}  // namespace detail

inline GeneratedInstance instance_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("instance: expected a JSON object");
  if (!j.contains("points")) throw InvalidInput("instance: missing field \"points\"");
  return detail::instance_from_parts(point_set_from_json(j.at("points"), "points"), j);
}

/// Loads {"points", "centers", "assignment", "q", "metadata"}; when the
/// assignment is absent every point goes to a nearest center.
inline GeneratedInstance load_instance(const std::string& path) {
  return instance_from_json(read_json_file(path));
}

/// Points from CSV, centers (and optional assignment) from a JSON file.
inline GeneratedInstance load_instance(const std::string& points_csv, const std::string& centers_json) {
  PointSet points = point_set_from_csv(read_file(points_csv));
  const json j = read_json_file(centers_json);
  if (j.is_array()) return detail::instance_from_parts(std::move(points), json{{"centers", j}});
  return detail::instance_from_parts(std::move(points), j);
}

/// Hitting-set files use 1-based elements: {"d": 4, "sets": [[1,2,3], ...]}.
inline json to_json(const HittingSetInstance& hs) {
  json sets = json::array();
  for (const auto& s : hs.sets()) {
    json row = json::array();
    for (std::size_t e : s) row.push_back(e + 1);
    sets.push_back(row);
  }
  return json{{"d", hs.ground_size()}, {"sets", sets}};
}

inline HittingSetInstance hitting_set_from_json(const json& j) {
  try {
    const std::size_t d = j.at("d").get<std::size_t>();
    std::vector<std::vector<std::size_t>> sets;
    for (std::size_t r = 0; r < j.at("sets").size(); ++r) {
      std::vector<std::size_t> s;
      for (const auto& e : j.at("sets")[r]) {
        const long long v = e.get<long long>();
        if (v < 1 || static_cast<std::size_t>(v) > d)
          throw InvalidInput("sets: element " + std::to_string(v) + " of set " + std::to_string(r) +
                             " is outside [1, d]");
        s.push_back(static_cast<std::size_t>(v - 1));
      }
      sets.push_back(std::move(s));
    }
    return HittingSetInstance(d, std::move(sets));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("hitting set file: ") + e.what());
  }
}

inline json to_json(const CutMetricEmbedding& emb) {
  json out = json::array();
  for (const CutWeight& w : emb.weights) out.push_back(json{{"mask", w.mask}, {"z", w.z}});
  return out;
}

inline const char* kind_name(CompressedNode::Kind k) {
  switch (k) {
    case CompressedNode::Kind::kSolo: return "solo";
    case CompressedNode::Kind::kBulk: return "bulk";
    default: return "leaf";
  }
}

namespace detail {

inline json bound_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json compressed_to_json(const CompressedTree& t, std::size_t id) {
  const CompressedNode& n = t.nodes[id];
  json cuts = json::array();
  for (const ThresholdCut& c : n.cuts) cuts.push_back(json{{"dim", c.dim}, {"theta", c.theta}});
  json children = json::array();
  for (std::size_t c : n.children) children.push_back(compressed_to_json(t, c));
  json lower = json::array();
  json upper = json::array();
  for (double v : n.box.lower) lower.push_back(bound_json(v));
  for (double v : n.box.upper) upper.push_back(bound_json(v));
  json out{{"kind", kind_name(n.kind)},
           {"cuts", cuts},
           {"children", children},
           {"box", json{{"lower", lower}, {"upper", upper}}}};
  if (n.kind == CompressedNode::Kind::kLeaf) out["center"] = n.centers.front();
  return out;
}

}  // namespace detail

/// {"kind": "solo"|"bulk"|"leaf", "cuts": [...], "children": [...], "center": int?}
inline json to_json(const CompressedTree& t) {
  return t.nodes.empty() ? json(nullptr) : detail::compressed_to_json(t, 0);
}

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentConfig {
  std::string command = "cluster";
  // Instance: a file, CSV points plus a centers file, or a generator.
  std::optional<std::string> instance_path;
  std::optional<std::string> points_csv;
  std::optional<std::string> centers_path;
  std::string generator = "axis";  // axis | hitting
  std::size_t k = 3;
  double M = 1e6;
  std::size_t colocated = 0;
  std::optional<std::string> sets_path;  // hitting generator input
  std::string algorithm = "kmedians-rt";  // kmedians-rt | kmeans-sb
  std::size_t trials = 1;
  std::optional<Seed> seed;
  std::string out;
  OracleCaps caps;

  void validate() const {
    if (!seed) throw InvalidInput("config: --seed is required");
    if (trials < 1) throw InvalidInput("config: trials must be at least 1");
    if (algorithm != "kmedians-rt" && algorithm != "kmeans-sb")
      throw InvalidInput("config: unknown algorithm '" + algorithm + "'");
    if (!instance_path && !points_csv && generator != "axis" && generator != "hitting")
      throw InvalidInput("config: unknown generator '" + generator + "'");
    if (points_csv && !centers_path) throw InvalidInput("config: CSV points need a centers file");
  }
};

inline json to_json(const ExperimentConfig& c) {
  json j{{"command", c.command},
         {"algorithm", c.algorithm},
         {"trials", c.trials},
         {"seed", c.seed ? json(c.seed->value) : json(nullptr)}};
  if (c.instance_path) {
    j["instance"] = *c.instance_path;
  } else if (c.points_csv) {
    j["points_csv"] = *c.points_csv;
    j["centers"] = c.centers_path.value_or("");
  } else {
    j["generator"] = c.generator;
    if (c.generator == "axis") {
      j["k"] = c.k;
      j["M"] = c.M;
      j["colocated"] = c.colocated;
    } else {
      j["sets"] = c.sets_path.value_or("");
      j["M"] = c.M;
    }
  }
  return j;
}

struct RunReport {
  int schema_version = kReportSchemaVersion;
  std::string tool_version = kToolVersion;
  json config;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t d = 0;
  int q = 1;
  std::vector<double> trial_costs;
  double mean = 0.0;
  double standard_error = 0.0;
  double reference_cost = 0.0;
  double ratio = 0.0;  // mean / reference cost (0 when the reference cost is 0)
  double harmonic_bound = 0.0;  // 1 + H_{k-1}
  std::optional<double> mean_solo_nodes;
  std::optional<double> mean_bulk_nodes;
  double wall_time_seconds = 0.0;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

inline json to_json(const RunReport& r) {
  json j{{"schema_version", r.schema_version},
         {"tool_version", r.tool_version},
         {"config", r.config},
         {"n", r.n},
         {"k", r.k},
         {"d", r.d},
         {"q", r.q},
         {"trial_costs", r.trial_costs},
         {"mean", r.mean},
         {"standard_error", r.standard_error},
         {"reference_cost", r.reference_cost},
         {"ratio", r.ratio},
         {"harmonic_bound", r.harmonic_bound},
         {"wall_time_seconds", r.wall_time_seconds}};
  if (r.mean_solo_nodes || r.mean_bulk_nodes)
    j["compressed_tree"] = json{{"mean_solo_nodes", r.mean_solo_nodes.value_or(0.0)},
                                {"mean_bulk_nodes", r.mean_bulk_nodes.value_or(0.0)}};
  return j;
}

inline RunReport report_from_json(const json& j) {
  try {
    RunReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion)
      throw InvalidInput("report: unsupported schema version " + std::to_string(r.schema_version));
    r.tool_version = j.at("tool_version").get<std::string>();
    r.config = j.at("config");
    r.n = j.at("n").get<std::size_t>();
    r.k = j.at("k").get<std::size_t>();
    r.d = j.at("d").get<std::size_t>();
    r.q = j.at("q").get<int>();
    r.trial_costs = j.at("trial_costs").get<std::vector<double>>();
    r.mean = j.at("mean").get<double>();
    r.standard_error = j.at("standard_error").get<double>();
    r.reference_cost = j.at("reference_cost").get<double>();
    r.ratio = j.at("ratio").get<double>();
    r.harmonic_bound = j.at("harmonic_bound").get<double>();
    r.wall_time_seconds = j.at("wall_time_seconds").get<double>();
    if (j.contains("compressed_tree")) {
      r.mean_solo_nodes = j.at("compressed_tree").at("mean_solo_nodes").get<double>();
      r.mean_bulk_nodes = j.at("compressed_tree").at("mean_bulk_nodes").get<double>();
    }
    return r;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("report: ") + e.what());
  }
}

/// Per-trial costs as CSV: "trial,cost" header, one row per trial.
inline std::string trial_costs_csv(const RunReport& r) {
  std::string out = "trial,cost\n";
  for (std::size_t t = 0; t < r.trial_costs.size(); ++t)
    out += std::to_string(t) + "," + format_double(r.trial_costs[t]) + "\n";
  return out;
}

/// Resolves the instance a config refers to.
inline GeneratedInstance resolve_instance(const ExperimentConfig& c) {
  const int q = c.algorithm == "kmeans-sb" ? 2 : 1;
  if (c.instance_path) return load_instance(*c.instance_path);
  if (c.points_csv) return load_instance(*c.points_csv, c.centers_path.value_or(""));
  if (c.generator == "axis") return gen_axis_instance(c.k, c.M, c.colocated, q);
  if (c.generator == "hitting") {
    if (!c.sets_path) throw InvalidInput("config: the hitting generator needs a sets file");
    const HittingSetInstance hs = hitting_set_from_json(read_json_file(*c.sets_path));
    if (!(c.M >= 1.0)) throw InvalidInput("config: M must be at least 1");
    return gen_hitting_instance(hs, static_cast<std::size_t>(c.M), q);
  }
  throw InvalidInput("config: unknown generator '" + c.generator + "'");
}

/// Runs `trials` independent seeded constructions and costs each tree on
/// the instance's data points.
inline RunReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const GeneratedInstance inst = resolve_instance(config);
  const PointSet& centers = inst.clustering.centers();
  const bool kmeans = config.algorithm == "kmeans-sb";
  const int q = kmeans ? 2 : 1;

  RunReport r;
  r.config = to_json(config);
  r.n = inst.points.size();
  r.k = centers.size();
  r.d = inst.points.dim();
  r.q = q;
  r.reference_cost = cost_q(inst.points, centers, inst.clustering.assignment(), q);
  r.harmonic_bound = 1.0 + harmonic(r.k - 1);

  std::vector<double> solo(config.trials, 0.0);
  std::vector<double> bulk(config.trials, 0.0);
  r.trial_costs = run_trials(config.trials, [&](std::size_t t) {
    const Seed s = derive_seed(*config.seed, t);
    if (!kmeans) return tree_cost(build_tree_rt(centers, s), inst.points, centers, q);
    const KMeansTrees trees = build_tree_kmeans(centers, s);
    solo[t] = static_cast<double>(trees.compressed.count(CompressedNode::Kind::kSolo));
    bulk[t] = static_cast<double>(trees.compressed.count(CompressedNode::Kind::kBulk));
    return tree_cost(trees.tree, inst.points, centers, q);
  });
  const MeanEstimate est = summarize(r.trial_costs);
  r.mean = est.mean;
  r.standard_error = est.standard_error;
  r.ratio = r.reference_cost > 0.0 ? r.mean / r.reference_cost : 0.0;
  if (kmeans) {
    r.mean_solo_nodes = summarize(solo).mean;
    r.mean_bulk_nodes = summarize(bulk).mean;
  }
  r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace xclust
