// Copyright 2026 The SceneMix Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "scenemix/pipeline/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "scenemix/augment_params.hpp"
#include "scenemix/error.hpp"
#include "scenemix/io.hpp"

namespace scenemix::pipeline {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Range {
  double lo = -kInf;
  double hi = kInf;
  bool lo_open = false;

  bool admits(double v) const { return (lo_open ? v > lo : v >= lo) && v <= hi; }
  std::string describe() const {
    const auto fmt = [](double v) { return std::isinf(v) ? std::string(v < 0 ? "-inf" : "inf") : json(v).dump(); };
    return std::string(lo_open ? "(" : "[") + fmt(lo) + ", " + fmt(hi) + "]";
  }
};

enum class Kind { kNumber, kInterval, kPasses, kPath, kChoice };

struct ParamSpec {
  std::string key;
  Kind kind;
  json fallback;  // null: required
  Range range;
  std::vector<std::string> choices;
};

struct OpSpec {
  std::string name;
  std::vector<ParamSpec> params;
};

const std::vector<OpSpec>& op_table() {
  static const std::vector<OpSpec> table = [] {
    const Range unit{0.0, 1.0};
    const Range non_negative{0.0, kInf};
    const Range positive{0.0, kInf, true};
    const Range unit_open{0.0, 1.0, true};
    return std::vector<OpSpec>{
        {"center", {}},
        {"flip", {{"prob", Kind::kNumber, 0.5, unit, {}}}},
        {"rotate",
         {{"up", Kind::kInterval, json::array({0.0, 2.0 * std::numbers::pi}), {}, {}},
          {"tilt", Kind::kInterval, json::array({-kMaxTilt, kMaxTilt}), Range{-kMaxTilt, kMaxTilt}, {}}}},
        {"scale", {{"range", Kind::kInterval, json::array({0.9, 1.1}), positive, {}}}},
        {"subsample", {{"keep", Kind::kInterval, json::array({0.8, 1.0}), unit_open, {}}}},
        {"elastic", {{"passes", Kind::kPasses, json::array({json::array({0.2, 0.4}), json::array({0.8, 1.6})}), {}, {}}}},
        {"color",
         {{"brightness", Kind::kInterval, json::array({-0.2, 0.2}), {}, {}},
          {"contrast", Kind::kInterval, json::array({0.8, 1.25}), non_negative, {}},
          {"jitter_sigma", Kind::kNumber, 0.05, non_negative, {}}}},
        {"voxelize", {{"cell", Kind::kNumber, 0.05, positive, {}}}},
        {"cutout",
         {{"edge_range", Kind::kInterval, json::array({0.05, 2.0}), non_negative, {}},
          {"cuts_per_10k", Kind::kNumber, 1.0, non_negative, {}}}},
        {"noise_near_surface",
         {{"fraction", Kind::kNumber, 0.2, unit, {}}, {"radius", Kind::kNumber, 0.5, non_negative, {}}}},
        {"noise_uniform", {{"cell", Kind::kNumber, 0.6, positive, {}}, {"offset", Kind::kNumber, 0.1, non_negative, {}}}},
        {"crop_cube", {{"fraction", Kind::kNumber, 0.25, unit_open, {}}}},
        {"crop_sphere", {{"radius", Kind::kNumber, 2.0, positive, {}}}},
        {"mix_instances",
         {{"db", Kind::kPath, nullptr, {}, {}},
          {"ratio", Kind::kNumber, 1.0, non_negative, {}},
          {"placement", Kind::kChoice, "overlapping", {}, {"overlapping", "free"}}}},
    };
  }();
  return table;
}

const OpSpec* find_op(std::string_view name) {
  const auto& table = op_table();
  const auto it = std::find_if(table.begin(), table.end(), [&](const OpSpec& s) { return s.name == name; });
  return it == table.end() ? nullptr : &*it;
}

// ---------------------------------------------------------------------------
// Typed readers over a json object, all reporting the dotted key path.

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> known) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(join(path, key), "unknown key");
    }
  }
}

double read_number(const json& v, const std::string& path, const Range& range) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d) || !range.admits(d)) throw ConfigError(path, "value " + v.dump() + " outside " + range.describe());
  return d;
}

std::uint64_t read_unsigned(const json& v, const std::string& path, std::uint64_t min_value = 0) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(path, "expected a non-negative integer");
  }
  const auto u = v.get<std::uint64_t>();
  if (u < min_value) throw ConfigError(path, "value must be at least " + std::to_string(min_value));
  return u;
}

bool read_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
  return v.get<bool>();
}

std::string read_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

std::string read_choice(const json& v, const std::string& path, const std::vector<std::string>& choices) {
  const std::string s = read_string(v, path);
  if (std::find(choices.begin(), choices.end(), s) == choices.end()) {
    std::string all;
    for (const auto& c : choices) all += (all.empty() ? "" : ", ") + c;
    throw ConfigError(path, "'" + s + "' is not one of: " + all);
  }
  return s;
}

json read_interval(const json& v, const std::string& path, const Range& range) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(path, "expected [lower, upper]");
  const double lo = read_number(v[0], path + "[0]", range);
  const double hi = read_number(v[1], path + "[1]", range);
  if (lo > hi) throw ConfigError(path, "lower bound " + v[0].dump() + " exceeds upper bound " + v[1].dump());
  return json::array({lo, hi});
}

json read_passes(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected a list of [granularity, magnitude] pairs");
  json out = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != 2) throw ConfigError(p, "expected [granularity, magnitude]");
    out.push_back(json::array({read_number(v[i][0], p + "[0]", Range{0.0, kInf, true}),
                               read_number(v[i][1], p + "[1]", Range{0.0, kInf})}));
  }
  return out;
}

ChainStep read_step(const json& v, const std::string& path) {
  if (!v.is_object()) throw ConfigError(path, "expected an object with an 'op' key");
  if (!v.contains("op")) throw ConfigError(join(path, "op"), "missing");
  const std::string op = read_string(v["op"], join(path, "op"));
  const OpSpec* spec = find_op(op);
  if (!spec) throw ConfigError(join(path, "op"), "unknown op '" + op + "'");

  ChainStep step{op, json::object()};
  for (const auto& [key, value] : v.items()) {
    if (key == "op") continue;
    const bool known = std::any_of(spec->params.begin(), spec->params.end(), [&](const ParamSpec& p) { return p.key == key; });
    if (!known) throw ConfigError(join(path, key), "unknown parameter for op '" + op + "'");
  }
  for (const ParamSpec& p : spec->params) {
    const std::string ppath = join(path, p.key);
    if (!v.contains(p.key)) {
      if (p.fallback.is_null()) throw ConfigError(ppath, "required");
      step.params[p.key] = p.fallback;
      continue;
    }
    const json& value = v[p.key];
    switch (p.kind) {
      case Kind::kNumber: step.params[p.key] = read_number(value, ppath, p.range); break;
      case Kind::kInterval: step.params[p.key] = read_interval(value, ppath, p.range); break;
      case Kind::kPasses: step.params[p.key] = read_passes(value, ppath); break;
      case Kind::kPath: step.params[p.key] = read_string(value, ppath); break;
      case Kind::kChoice: step.params[p.key] = read_choice(value, ppath, p.choices); break;
    }
  }
  return step;
}

template <typename Enum>
Enum format_from(const std::string& s, std::initializer_list<std::pair<std::string_view, Enum>> names) {
  for (const auto& [name, value] : names) {
    if (name == s) return value;
  }
  return names.begin()->second;
}

}  // namespace

std::string_view to_string(SceneFormat format) {
  switch (format) {
    case SceneFormat::kPly: return "ply";
    case SceneFormat::kKitti: return "kitti";
    case SceneFormat::kXyzrgb: return "xyzrgb";
  }
  return "ply";
}

std::string_view to_string(OutputFormat format) { return format == OutputFormat::kKitti ? "kitti" : "ply"; }

const std::vector<std::string>& registered_ops() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const OpSpec& s : op_table()) out.push_back(s.name);
    return out;
  }();
  return names;
}

json default_params(std::string_view op) {
  const OpSpec* spec = find_op(op);
  if (!spec) throw ConfigError("op", "unknown op '" + std::string(op) + "'");
  json params = json::object();
  for (const ParamSpec& p : spec->params) params[p.key] = p.fallback;
  return params;
}

std::vector<ChainStep> default_chain() {
  std::vector<ChainStep> chain;
  for (const char* op : {"center", "flip", "rotate", "subsample", "elastic", "scale", "color", "voxelize"}) {
    chain.push_back({op, default_params(op)});
  }
  return chain;
}

PipelineConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(root, "", {"dataset", "chain", "mix", "output", "master_seed", "epochs", "workers", "ignore_label"});

  PipelineConfig config;

  if (!root.contains("dataset")) throw ConfigError("dataset", "required");
  const json& ds = root["dataset"];
  reject_unknown(ds, "dataset", {"format", "root", "subset_fraction", "subset_seed"});
  if (ds.contains("format")) {
    const std::string f = read_choice(ds["format"], "dataset.format", {"ply", "kitti", "xyzrgb"});
    config.dataset.format = format_from<SceneFormat>(
        f, {{"ply", SceneFormat::kPly}, {"kitti", SceneFormat::kKitti}, {"xyzrgb", SceneFormat::kXyzrgb}});
  }
  if (!ds.contains("root")) throw ConfigError("dataset.root", "required");
  config.dataset.root = read_string(ds["root"], "dataset.root");
  if (ds.contains("subset_fraction")) {
    config.dataset.subset_fraction = read_number(ds["subset_fraction"], "dataset.subset_fraction", Range{0.0, 1.0, true});
  }
  if (ds.contains("subset_seed")) config.dataset.subset_seed = read_unsigned(ds["subset_seed"], "dataset.subset_seed");

  if (root.contains("chain")) {
    const json& chain = root["chain"];
    if (!chain.is_array()) throw ConfigError("chain", "expected a list of steps");
    for (std::size_t i = 0; i < chain.size(); ++i) {
      config.chain.push_back(read_step(chain[i], "chain[" + std::to_string(i) + "]"));
    }
  } else {
    config.chain = default_chain();
  }

  if (root.contains("mix")) {
    const json& mix = root["mix"];
    reject_unknown(mix, "mix",
                   {"placement", "gap", "distance", "k", "unlabeled_second", "non_mixed_ratio", "point_budget", "batch_size"});
    std::string placement = "overlap";
    if (mix.contains("placement")) placement = read_choice(mix["placement"], "mix.placement", {"overlap", "nearby", "far"});
    const double gap = mix.contains("gap") ? read_number(mix["gap"], "mix.gap", Range{0.0, kInf}) : 0.0;
    const double distance =
        mix.contains("distance") ? read_number(mix["distance"], "mix.distance", Range{0.0, kInf, true}) : 500.0;
    if (placement == "nearby") {
      config.mix.placement = NearbyNoOverlap{gap};
    } else if (placement == "far") {
      config.mix.placement = FarApart{distance};
    }
    if (mix.contains("k")) config.mix.scene_count = read_unsigned(mix["k"], "mix.k", 1);
    if (mix.contains("unlabeled_second")) config.mix.unlabeled_second = read_bool(mix["unlabeled_second"], "mix.unlabeled_second");
    if (mix.contains("non_mixed_ratio")) {
      config.mix.non_mixed_ratio = read_number(mix["non_mixed_ratio"], "mix.non_mixed_ratio", Range{0.0, 1.0});
    }
    if (mix.contains("point_budget") && !mix["point_budget"].is_null()) {
      config.mix.point_budget = read_unsigned(mix["point_budget"], "mix.point_budget", 1);
    }
    if (mix.contains("batch_size")) config.batch_size = read_unsigned(mix["batch_size"], "mix.batch_size", 1);
    if (!std::holds_alternative<Overlap>(config.mix.placement) && config.mix.scene_count > 2) {
      throw ConfigError("mix.k", "nearby and far placement mix pairs only (k <= 2)");
    }
  }

  if (root.contains("output")) {
    const json& out = root["output"];
    reject_unknown(out, "output", {"format", "directory", "preview_count"});
    if (out.contains("format")) {
      const std::string f = read_choice(out["format"], "output.format", {"ply", "kitti"});
      config.output.format = f == "kitti" ? OutputFormat::kKitti : OutputFormat::kPly;
    }
    if (out.contains("directory")) config.output.directory = read_string(out["directory"], "output.directory");
    if (out.contains("preview_count")) config.output.preview_count = read_unsigned(out["preview_count"], "output.preview_count", 1);
  }

  if (root.contains("master_seed")) config.master_seed = read_unsigned(root["master_seed"], "master_seed");
  if (root.contains("epochs")) config.epochs = read_unsigned(root["epochs"], "epochs", 1);
  if (root.contains("workers")) config.workers = read_unsigned(root["workers"], "workers", 1);
  if (root.contains("ignore_label")) {
    const std::uint64_t ignore = read_unsigned(root["ignore_label"], "ignore_label");
    if (ignore > 0xFFFFFFFFull) throw ConfigError("ignore_label", "must fit in 32 bits");
    config.mix.ignore_label = static_cast<std::uint32_t>(ignore);
  }
  return config;
}

std::string serialize_config(const PipelineConfig& config) {
  json root;
  root["dataset"] = {{"format", to_string(config.dataset.format)},
                     {"root", config.dataset.root.string()},
                     {"subset_fraction", config.dataset.subset_fraction},
                     {"subset_seed", config.dataset.subset_seed}};
  json chain = json::array();
  for (const ChainStep& step : config.chain) {
    json s = step.params;
    s["op"] = step.op;
    chain.push_back(std::move(s));
  }
  root["chain"] = std::move(chain);

  json mix;
  mix["placement"] = placement_name(config.mix.placement);
  mix["gap"] = 0.0;
  mix["distance"] = 500.0;
  if (const auto* nearby = std::get_if<NearbyNoOverlap>(&config.mix.placement)) mix["gap"] = nearby->gap;
  if (const auto* far = std::get_if<FarApart>(&config.mix.placement)) mix["distance"] = far->distance;
  mix["k"] = config.mix.scene_count;
  mix["unlabeled_second"] = config.mix.unlabeled_second;
  mix["non_mixed_ratio"] = config.mix.non_mixed_ratio;
  mix["point_budget"] = config.mix.point_budget ? json(*config.mix.point_budget) : json(nullptr);
  mix["batch_size"] = config.batch_size;
  root["mix"] = std::move(mix);

  root["output"] = {{"format", to_string(config.output.format)},
                    {"directory", config.output.directory.string()},
                    {"preview_count", config.output.preview_count}};
  root["master_seed"] = config.master_seed;
  root["epochs"] = config.epochs;
  root["workers"] = config.workers;
  root["ignore_label"] = config.mix.ignore_label;
  return root.dump(2) + "\n";
}

PipelineConfig load_config(const std::filesystem::path& path) {
  const io::Bytes bytes = io::read_file(path);
  PipelineConfig config = parse_config(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  // Relative paths are relative to the config file.
  const std::filesystem::path base = path.parent_path();
  const auto rebase = [&](const std::filesystem::path& p) { return p.is_relative() ? base / p : p; };
  config.dataset.root = rebase(config.dataset.root);
  config.output.directory = rebase(config.output.directory);
  for (ChainStep& step : config.chain) {
    if (step.params.contains("db")) step.params["db"] = rebase(step.params["db"].get<std::string>()).string();
  }
  return config;
}

}  // namespace scenemix::pipeline
