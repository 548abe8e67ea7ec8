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

// xclust: generators, tree construction, exact evaluators and oracles
// behind one seeded command line.
//
// Exit codes: 0 success, 2 configuration error, 3 caps exceeded,
// 4 invariant violation during `verify`.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "xclust/xclust.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCaps = 3;
constexpr int kExitInvariant = 4;

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw xclust::InvalidInput("cannot write '" + path + "'");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

xclust::OracleCaps parse_caps(const std::string& text) {
  xclust::OracleCaps caps;
  if (text.empty()) return caps;
  std::map<std::string, std::size_t*> fields{{"max_centers", &caps.max_centers},
                                             {"max_grid", &caps.max_grid},
                                             {"max_points", &caps.max_points},
                                             {"max_free_k", &caps.max_free_k},
                                             {"max_dim", &caps.max_dim},
                                             {"max_states", &caps.max_states}};
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw xclust::InvalidInput("--caps: expected key=value, got '" + item + "'");
    const auto it = fields.find(item.substr(0, eq));
    if (it == fields.end()) throw xclust::InvalidInput("--caps: unknown key '" + item.substr(0, eq) + "'");
    try {
      *it->second = std::stoull(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw xclust::InvalidInput("--caps: bad value in '" + item + "'");
    }
  }
  return caps;
}

struct InstanceFlags {
  std::string instance;
  std::string points_csv;
  std::string centers;
  std::string gen = "axis";
  std::size_t k = 3;
  double M = 1e6;
  std::size_t colocated = 0;
  std::string sets;

  void add_to(CLI::App* app) {
    app->add_option("--instance", instance, "Instance JSON file");
    app->add_option("--points", points_csv, "Data points as CSV (with --centers)");
    app->add_option("--centers", centers, "Centers JSON file for --points");
    app->add_option("--gen", gen, "Generator when no file is given")->check(CLI::IsMember({"axis", "hitting"}));
    app->add_option("--k", k, "Number of centers (axis generator)");
    app->add_option("--M", M, "Far-center scale (axis) or colocated multiplicity (hitting)");
    app->add_option("--colocated", colocated, "Points placed on every center (axis)");
    app->add_option("--sets", sets, "Hitting-set file (hitting generator)");
  }

  void fill(xclust::ExperimentConfig& c) const {
    if (!instance.empty()) c.instance_path = instance;
    if (!points_csv.empty()) c.points_csv = points_csv;
    if (!centers.empty()) c.centers_path = centers;
    if (!sets.empty()) c.sets_path = sets;
    c.generator = gen;
    c.k = k;
    c.M = M;
    c.colocated = colocated;
  }
};

int run(int argc, char** argv) {
  CLI::App app{"Explainable clustering with threshold trees"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::uint64_t> seed;
  std::size_t trials = 1;
  std::string out;
  std::string format = "json";
  std::string caps_text;
  app.add_option("--seed", seed, "Master seed (required)")->required();
  app.add_option("--trials", trials, "Independent seeded trials")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "Output file (stdout if omitted)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--caps", caps_text, "Oracle limits, e.g. max_centers=8,max_grid=200");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance");
  std::string gen_kind;
  std::size_t gen_k = 3;
  double gen_M = 100.0;
  std::size_t gen_colocated = 0;
  std::string gen_sets;
  std::optional<double> gen_p;
  int gen_q = 1;
  gen->add_option("kind", gen_kind, "axis | hitting | setsystem")
      ->required()
      ->check(CLI::IsMember({"axis", "hitting", "setsystem"}));
  gen->add_option("--k", gen_k, "Number of centers / sets");
  gen->add_option("--M", gen_M, "Far scale (axis) or colocated multiplicity (hitting)");
  gen->add_option("--colocated", gen_colocated, "Points on every center (axis)");
  gen->add_option("--sets", gen_sets, "Hitting-set file (hitting)");
  gen->add_option("--p", gen_p, "Inclusion probability override (setsystem)");
  gen->add_option("--q", gen_q, "Cost exponent of the reference clustering")->check(CLI::IsMember({1, 2}));

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Build explainable trees and report their cost");
  std::string algo = "kmedians-rt";
  InstanceFlags cluster_inst;
  cluster->add_option("algorithm", algo, "kmedians-rt | kmeans-sb")
      ->check(CLI::IsMember({"kmedians-rt", "kmeans-sb"}));
  cluster_inst.add_to(cluster);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Closest/Last Point Process evaluators");
  std::string process;
  InstanceFlags sim_inst;
  simulate->add_option("process", process, "last-point | f-exact | g-recurrence")
      ->required()
      ->check(CLI::IsMember({"last-point", "f-exact", "g-recurrence"}));
  sim_inst.add_to(simulate);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Exact optima on small instances");
  std::string mode;
  InstanceFlags oracle_inst;
  std::size_t oracle_k = 0;
  int oracle_q = 1;
  std::optional<std::size_t> node_cap;
  oracle->add_option("mode", mode, "fixed | free | hitting-set")
      ->required()
      ->check(CLI::IsMember({"fixed", "free", "hitting-set"}));
  oracle_inst.add_to(oracle);
  oracle->add_option("--leaves", oracle_k, "Number of leaves (free mode; default: centers in the instance)");
  oracle->add_option("--q", oracle_q, "Cost exponent (free mode)")->check(CLI::IsMember({1, 2}));
  oracle->add_option("--node-cap", node_cap, "Branch-and-bound node cap (hitting-set mode)");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the property sweeps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  const xclust::Seed master{*seed};
  const xclust::OracleCaps caps = parse_caps(caps_text);
  using xclust::json;

  if (*gen) {
    if (gen_kind == "axis") {
      write_output(out, xclust::to_json(xclust::gen_axis_instance(gen_k, gen_M, gen_colocated, gen_q)).dump(2));
    } else if (gen_kind == "hitting") {
      if (gen_sets.empty()) throw xclust::InvalidInput("gen hitting: --sets is required");
      const auto hs = xclust::hitting_set_from_json(xclust::read_json_file(gen_sets));
      if (!(gen_M >= 1.0)) throw xclust::InvalidInput("gen hitting: M must be at least 1");
      write_output(out, xclust::to_json(xclust::gen_hitting_instance(hs, static_cast<std::size_t>(gen_M), gen_q)).dump(2));
    } else {
      const auto sys = xclust::gen_random_set_system(gen_k, gen_p, master);
      json j = xclust::to_json(sys.hs);
      j["p"] = sys.params.p;
      j["epsilon"] = sys.params.epsilon;
      j["size_floor"] = sys.params.size_floor;
      j["sizes"] = sys.sizes;
      j["small_set"] = sys.small_set;
      write_output(out, j.dump(2));
    }
    return 0;
  }

  if (*cluster) {
    xclust::ExperimentConfig config;
    config.command = "cluster";
    config.algorithm = algo;
    config.trials = trials;
    config.seed = master;
    config.out = out;
    config.caps = caps;
    cluster_inst.fill(config);
    const xclust::RunReport report = xclust::run_experiment(config);
    if (format == "csv") {
      write_output(out, xclust::trial_costs_csv(report));
    } else {
      write_output(out, xclust::to_json(report).dump(2));
      if (!out.empty() && out != "-") {
        std::filesystem::path csv(out);
        csv.replace_extension(".csv");
        write_output(csv.string(), xclust::trial_costs_csv(report));
      }
    }
    return 0;
  }

  if (*simulate) {
    json result{{"process", process}};
    if (process == "g-recurrence") {
      result["k"] = sim_inst.k;
      result["M"] = sim_inst.M;
      result["g"] = xclust::g_recurrence(sim_inst.k, sim_inst.M);
      result["harmonic_bound"] = 1.0 + xclust::harmonic(sim_inst.k - 1);
    } else {
      xclust::ExperimentConfig config;
      config.seed = master;
      sim_inst.fill(config);
      const auto inst = xclust::resolve_instance(config);
      const xclust::PointSet& U = inst.clustering.centers();
      const auto emb = xclust::embed_cut_metric(U);
      result["k"] = U.size();
      result["embedding"] = xclust::to_json(emb);
      if (process == "f-exact") {
        xclust::LastPointEvaluator eval(emb);
        result["f"] = eval.f(emb.all());
        result["survival"] = eval.survival(emb.all());
      } else {
        std::vector<double> freq(U.size(), 0.0);
        const auto costs = xclust::run_trials(trials, [&](std::size_t t) {
          const auto order = xclust::sample_clock_order(emb, xclust::derive_seed(master, t));
          return static_cast<double>(xclust::last_point_trial(emb, emb.all(), order));
        });
        std::vector<double> norms;
        for (double idx : costs) {
          freq[static_cast<std::size_t>(idx)] += 1.0 / static_cast<double>(trials);
          norms.push_back(emb.norm(static_cast<std::size_t>(idx)));
        }
        const auto est = xclust::summarize(norms);
        result["trials"] = trials;
        result["mean"] = est.mean;
        result["standard_error"] = est.standard_error;
        result["survivor_frequencies"] = freq;
      }
    }
    write_output(out, result.dump(2));
    return 0;
  }

  if (*oracle) {
    json result{{"mode", mode}};
    if (mode == "hitting-set") {
      if (oracle_inst.sets.empty()) throw xclust::InvalidInput("oracle hitting-set: --sets is required");
      const auto hs = xclust::hitting_set_from_json(xclust::read_json_file(oracle_inst.sets));
      const auto r = xclust::min_hitting_set(hs, node_cap);
      json elems = json::array();
      for (std::size_t e : r.elements) elems.push_back(e + 1);
      result["hitting_set"] = elems;
      result["size"] = r.elements.size();
      result["exact"] = r.exact;
      result["lower_bound"] = r.lower_bound;
      result["nodes"] = r.nodes;
      if (!r.exact) {
        write_output(out, result.dump(2));
        return kExitCaps;
      }
    } else {
      xclust::ExperimentConfig config;
      config.seed = master;
      oracle_inst.fill(config);
      const auto inst = xclust::resolve_instance(config);
      if (mode == "fixed") {
        const auto opt = xclust::opt_explainable_fixed(inst.points, inst.clustering, caps);
        result["cost"] = opt.cost;
        result["reference_cost"] = inst.reference_cost;
        if (inst.reference_cost > 0.0) result["price_of_explainability"] = opt.cost / inst.reference_cost;
        result["tree"] = xclust::to_json(opt.tree);
      } else {
        const std::size_t leaves = oracle_k ? oracle_k : inst.clustering.k();
        const auto opt = xclust::opt_explainable_free(inst.points, leaves, oracle_q, caps);
        result["cost"] = opt.cost;
        result["centers"] = xclust::to_json(opt.centers);
        result["tree"] = xclust::to_json(opt.tree);
      }
    }
    write_output(out, result.dump(2));
    return 0;
  }

  if (*verify) {
    bool ok = true;
    json rows = json::array();
    for (const auto& r : xclust::run_verify_suite(master)) {
      ok = ok && r.passed;
      std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.checked << " checks)"
                << (r.detail.empty() ? "" : ": " + r.detail) << '\n';
      rows.push_back(json{{"name", r.name}, {"passed", r.passed}, {"checked", r.checked}, {"detail", r.detail}});
    }
    write_output(out, json{{"properties", rows}, {"passed", ok}}.dump(2));
    return ok ? 0 : kExitInvariant;
  }
  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const xclust::CapsExceeded& e) {
    std::cerr << "caps exceeded: " << e.what() << '\n';
    return kExitCaps;
  } catch (const xclust::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
