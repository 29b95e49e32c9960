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

#include "scenemix/pipeline/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>

#include <spdlog/spdlog.h>

#include "scenemix/error.hpp"
#include "scenemix/parallel.hpp"
#include "scenemix/pipeline/chain.hpp"

namespace scenemix::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Scenes are augmented this many batches at a time. Fixed so that batch
// boundaries never depend on the worker count.
constexpr std::size_t kWindowBatches = 4;

struct SourceTrace {
  std::size_t scene_index = 0;
  std::string scene_id;
  std::vector<StepTrace> steps;
};

struct PreparedScene {
  bool ok = false;
  PointCloud cloud;
  SourceTrace trace;
  std::string error;
};

struct EpochSink {
  // Returns false to stop generating.
  std::function<bool(std::size_t batch, MixedSample& sample, std::vector<SourceTrace>& sources)> sample;
  std::function<void(const json&)> record;
};

json step_json(const StepTrace& s) {
  json j{{"op", s.op},
         {"seed", to_json(s.seed)},
         {"params", s.params},
         {"draws", s.draws},
         {"raw_draws", s.raw_draws},
         {"points_before", s.points_before},
         {"points_after", s.points_after}};
  if (s.skipped) {
    j["skipped"] = true;
    j["note"] = s.note;
  }
  return j;
}

std::size_t supervised(const PointCloud& cloud) {
  if (!cloud.has_labels()) return 0;
  return static_cast<std::size_t>(std::count(cloud.loss_mask.begin(), cloud.loss_mask.end(), true));
}

std::string sample_stem(std::size_t epoch, std::size_t n) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "e%03zu_%06zu", epoch, n);
  return buf;
}

PreparedScene prepare(const PipelineConfig& config, const std::vector<SceneRef>& scenes, std::size_t index,
                      std::size_t epoch, const StepContext& ctx) {
  PreparedScene out;
  out.trace.scene_index = index;
  out.trace.scene_id = scenes[index].id;
  try {
    const PointCloud raw = load_scene(scenes[index], config.dataset.format);
    if (raw.empty()) throw Error(ErrorCode::kEmptyCloud, "scene has no points");
    ChainResult chained = run_chain(config.chain, raw, config.master_seed, index, epoch, ctx);
    if (chained.cloud.empty()) throw Error(ErrorCode::kEmptyCloud, "chain left no points");
    out.cloud = std::move(chained.cloud);
    out.trace.steps = std::move(chained.steps);
    out.ok = true;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

// Generates one epoch. Returns false when the sink asked to stop.
bool generate_epoch(const PipelineConfig& config, const std::vector<SceneRef>& scenes,
                    const std::vector<std::size_t>& subset, std::size_t epoch, const StepContext& ctx,
                    RunSummary& summary, const EpochSink& sink) {
  const std::vector<std::size_t> order = epoch_order(subset, config.master_seed, epoch);
  json epoch_record{{"type", "epoch"},
                    {"epoch", epoch},
                    {"shuffle_seed", to_json(derive_stream(config.master_seed, 0, epoch, "shuffle").path())},
                    {"subset_seed", config.dataset.subset_seed}};
  json ids = json::array();
  for (std::size_t i : order) ids.push_back(scenes[i].id);
  epoch_record["scenes"] = std::move(ids);
  sink.record(epoch_record);

  std::vector<PreparedScene> pending;
  std::size_t batch = 0;
  std::size_t valid = 0;

  const auto emit = [&](std::size_t count) -> bool {
    std::vector<PointCloud> clouds;
    for (std::size_t i = 0; i < count; ++i) clouds.push_back(std::move(pending[i].cloud));
    const RngStream compose_rng = derive_stream(config.master_seed, batch, epoch, "compose");
    ComposedBatch composed = compose_batch(clouds, config.mix, compose_rng, config.workers);
    for (MixedSample& sample : composed.samples) {
      std::vector<SourceTrace> sources;
      for (std::size_t s : sample.sources) sources.push_back(pending[s].trace);
      if (!sink.sample(batch, sample, sources)) return false;
    }
    for (const auto& group : composed.dropped) {
      json dropped{{"type", "budget_drop"}, {"epoch", epoch}, {"batch", batch}};
      json group_ids = json::array();
      for (std::size_t s : group) group_ids.push_back(pending[s].trace.scene_id);
      dropped["scene_ids"] = std::move(group_ids);
      summary.budget_dropped += group.size();
      sink.record(dropped);
    }
    pending.erase(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(count));
    ++batch;
    return true;
  };

  const std::size_t window = config.batch_size * kWindowBatches;
  for (std::size_t start = 0; start < order.size(); start += window) {
    const std::size_t size = std::min(window, order.size() - start);
    std::vector<PreparedScene> prepared(size);
    parallel_for(size, config.workers,
                 [&](std::size_t i) { prepared[i] = prepare(config, scenes, order[start + i], epoch, ctx); });
    for (PreparedScene& scene : prepared) {
      if (!scene.ok) {
        spdlog::warn("skipping scene {}: {}", scene.trace.scene_id, scene.error);
        ++summary.skipped;
        sink.record({{"type", "skip"},
                     {"epoch", epoch},
                     {"scene_id", scene.trace.scene_id},
                     {"scene_index", scene.trace.scene_index},
                     {"reason", scene.error}});
        continue;
      }
      for (const StepTrace& step : scene.trace.steps) summary.op_seconds[step.op] += step.seconds;
      ++valid;
      pending.push_back(std::move(scene));
      if (pending.size() == config.batch_size && !emit(config.batch_size)) return false;
    }
  }
  if (valid == 0) throw Error(ErrorCode::kEmptyBatch, "no readable scenes in epoch " + std::to_string(epoch));
  if (!pending.empty() && !emit(pending.size())) return false;
  return true;
}

struct Prepared {
  std::vector<SceneRef> scenes;
  std::vector<std::size_t> subset;
};

Prepared prepare_run(const PipelineConfig& config) {
  config.mix.validate();
  if (config.batch_size == 0) throw ConfigError("mix.batch_size", "must be positive");
  if (config.workers == 0) throw ConfigError("workers", "must be positive");
  Prepared p;
  p.scenes = list_scenes(config.dataset);
  p.subset = select_subset(p.scenes.size(), config.dataset.subset_fraction, config.dataset.subset_seed);
  return p;
}

}  // namespace

std::vector<SceneRef> list_scenes(const DatasetConfig& dataset) {
  const fs::path& root = dataset.root;
  if (!fs::is_directory(root)) throw Error(ErrorCode::kIo, "dataset root " + root.string() + " is not a directory");

  const auto files_with = [](const fs::path& dir, const std::string& ext) {
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ext) out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    return out;
  };

  std::vector<SceneRef> scenes;
  switch (dataset.format) {
    case SceneFormat::kPly:
      for (const fs::path& p : files_with(root, ".ply")) scenes.push_back({p.stem().string(), p, {}});
      break;
    case SceneFormat::kXyzrgb:
      for (const fs::path& p : files_with(root, ".txt")) scenes.push_back({p.stem().string(), p, {}});
      break;
    case SceneFormat::kKitti: {
      const bool split = fs::is_directory(root / "velodyne");
      const fs::path scan_dir = split ? root / "velodyne" : root;
      for (const fs::path& p : files_with(scan_dir, ".bin")) {
        fs::path label = split ? root / "labels" / (p.stem().string() + ".label") : fs::path(p).replace_extension(".label");
        if (!fs::is_regular_file(label)) label.clear();
        scenes.push_back({p.stem().string(), p, label});
      }
      break;
    }
  }
  if (scenes.empty()) {
    throw Error(ErrorCode::kIo, "no " + std::string(to_string(dataset.format)) + " scenes under " + root.string());
  }
  return scenes;
}

PointCloud load_scene(const SceneRef& scene, SceneFormat format) {
  const io::Bytes bytes = io::read_file(scene.path);
  switch (format) {
    case SceneFormat::kPly: return io::read_ply(bytes);
    case SceneFormat::kXyzrgb:
      return io::read_xyzrgb_text(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    case SceneFormat::kKitti: {
      PointCloud cloud = io::read_kitti_bin(bytes);
      if (!scene.label_path.empty()) {
        io::KittiLabels labels = io::read_kitti_labels(io::read_file(scene.label_path), cloud.size());
        cloud.labels = std::move(labels.labels);
        cloud.instances = std::move(labels.instances);
        cloud.reset_loss_mask();
      }
      return cloud;
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown scene format");
}

std::vector<std::size_t> select_subset(std::size_t n, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("dataset.subset_fraction", "must lie in (0, 1]");
  std::size_t wanted = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  wanted = std::clamp<std::size_t>(wanted, std::min<std::size_t>(n, 1), n);
  std::vector<std::size_t> out;
  out.reserve(wanted);
  if (wanted == n) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  RngStream rng = derive_stream(seed, 0, 0, "subset");
  for (std::size_t i = 0; i < n && out.size() < wanted; ++i) {
    if (rng.index(n - i) < wanted - out.size()) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> epoch_order(std::vector<std::size_t> indices, std::uint64_t master_seed, std::uint64_t epoch) {
  RngStream rng = derive_stream(master_seed, 0, epoch, "shuffle");
  for (std::size_t i = indices.size(); i > 1; --i) {
    std::swap(indices[i - 1], indices[static_cast<std::size_t>(rng.index(i))]);
  }
  return indices;
}

std::map<std::string, io::Bytes> encode_sample(const PointCloud& cloud, OutputFormat format) {
  std::map<std::string, io::Bytes> files;
  if (format == OutputFormat::kPly) {
    files[".ply"] = io::write_ply(cloud);
    return files;
  }
  files[".bin"] = io::write_kitti_bin(cloud);
  if (cloud.labels) {
    files[".label"] = io::write_kitti_labels(*cloud.labels, cloud.instances ? std::span<const std::uint32_t>(*cloud.instances)
                                                                             : std::span<const std::uint32_t>());
  }
  return files;
}

RunSummary run(const PipelineConfig& config) {
  const Prepared prepared = prepare_run(config);
  RunSummary summary;
  summary.scenes_per_epoch = prepared.subset.size();
  fs::create_directories(config.output.directory);
  summary.manifest = config.output.directory / "manifest.jsonl";
  std::ofstream manifest(summary.manifest, std::ios::binary | std::ios::trunc);
  if (!manifest) throw Error(ErrorCode::kIo, "cannot write " + summary.manifest.string());

  const auto write_record = [&](const json& record) {
    manifest << record.dump() << '\n';
    if (!manifest) throw Error(ErrorCode::kIo, "failed writing " + summary.manifest.string());
  };

  InstanceDbCache dbs;
  const StepContext ctx{config.mix.ignore_label, &dbs};
  spdlog::info("{} scenes listed, {} used per epoch", prepared.scenes.size(), prepared.subset.size());

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::size_t emitted = 0;
    EpochSink sink;
    sink.record = write_record;
    sink.sample = [&](std::size_t batch, MixedSample& sample, std::vector<SourceTrace>& sources) {
      const std::string stem = sample_stem(epoch, emitted++);
      json files = json::array();
      for (const auto& [ext, bytes] : encode_sample(sample.cloud, config.output.format)) {
        io::write_file(config.output.directory / (stem + ext), bytes);
        files.push_back(stem + ext);
      }
      json mix{{"placement", sample.placement},
               {"offsets", json::array()},
               {"seed", to_json(sample.seed)},
               {"unlabeled_second", sample.unlabeled_second},
               {"direction", sample.direction ? json(*sample.direction) : json(nullptr)},
               {"gap", sample.gap ? json(*sample.gap) : json(nullptr)}};
      for (const Vec3& o : sample.offsets) mix["offsets"].push_back(to_json(o));
      json source_list = json::array();
      for (const SourceTrace& s : sources) {
        json steps = json::array();
        for (const StepTrace& step : s.steps) steps.push_back(step_json(step));
        source_list.push_back({{"scene_id", s.scene_id}, {"scene_index", s.scene_index}, {"steps", std::move(steps)}});
      }
      const std::size_t sup = supervised(sample.cloud);
      write_record({{"type", "sample"},
                    {"sample_id", stem},
                    {"epoch", epoch},
                    {"batch", batch},
                    {"master_seed", config.master_seed},
                    {"files", std::move(files)},
                    {"points", sample.cloud.size()},
                    {"supervised_points", sup},
                    {"unmixed", sample.unmixed},
                    {"warning", sample.warning},
                    {"mix", std::move(mix)},
                    {"sources", std::move(source_list)}});
      if (!sample.warning.empty()) spdlog::warn("{}: {}", stem, sample.warning);
      ++summary.samples;
      summary.total_points += sample.cloud.size();
      summary.supervised_points += sup;
      return true;
    };
    generate_epoch(config, prepared.scenes, prepared.subset, epoch, ctx, summary, sink);
    spdlog::info("epoch {}: {} samples", epoch, emitted);
  }
  return summary;
}

Vec3 provenance_color(std::size_t i) {
  static const std::array<Vec3, 8> palette{Vec3(0.90, 0.10, 0.10), Vec3(0.10, 0.45, 0.90), Vec3(0.15, 0.75, 0.20),
                                           Vec3(0.95, 0.65, 0.05), Vec3(0.60, 0.20, 0.80), Vec3(0.05, 0.80, 0.80),
                                           Vec3(0.95, 0.40, 0.70), Vec3(0.50, 0.50, 0.50)};
  return palette[i % palette.size()];
}

std::vector<fs::path> preview(const PipelineConfig& config, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "preview count must be at least 1");
  const Prepared prepared = prepare_run(config);
  const fs::path dir = config.output.directory / "preview";
  fs::create_directories(dir);

  InstanceDbCache dbs;
  const StepContext ctx{config.mix.ignore_label, &dbs};
  RunSummary summary;
  std::vector<fs::path> written;
  EpochSink sink;
  sink.record = [](const json&) {};
  sink.sample = [&](std::size_t, MixedSample& sample, std::vector<SourceTrace>&) {
    if (sample.sources.size() < 2) return true;
    PointCloud cloud = std::move(sample.cloud);
    auto& colors = cloud.colors.emplace();
    colors.reserve(cloud.size());
    for (std::uint32_t p : sample.provenance) colors.push_back(provenance_color(p));
    char name[32];
    std::snprintf(name, sizeof(name), "preview_%03zu.ply", written.size());
    io::write_file(dir / name, io::write_ply(cloud));
    written.push_back(dir / name);
    return written.size() < n;
  };
  generate_epoch(config, prepared.scenes, prepared.subset, 0, ctx, summary, sink);
  if (written.size() < n) spdlog::warn("only {} mixed samples available for preview", written.size());
  return written;
}

std::map<std::string, io::Bytes> replay_sample(const PipelineConfig& config, const json& record) {
  if (record.value("type", "") != "sample") throw Error(ErrorCode::kInvalidArgument, "not a sample record");
  const std::vector<SceneRef> scenes = list_scenes(config.dataset);
  const auto master_seed = record.at("master_seed").get<std::uint64_t>();
  const auto epoch = record.at("epoch").get<std::uint64_t>();

  InstanceDbCache dbs;
  const StepContext ctx{config.mix.ignore_label, &dbs};
  std::vector<PointCloud> members;
  for (const json& source : record.at("sources")) {
    const auto index = source.at("scene_index").get<std::size_t>();
    if (index >= scenes.size()) throw Error(ErrorCode::kInvalidArgument, "scene index out of range");
    const PointCloud raw = load_scene(scenes[index], config.dataset.format);
    members.push_back(run_chain(config.chain, raw, master_seed, index, epoch, ctx).cloud);
  }
  RngStream rng(seed_from_json(record.at("mix").at("seed")));
  const MixedSample sample = mix_group(members, config.mix, rng);
  return encode_sample(sample.cloud, config.output.format);
}

}  // namespace scenemix::pipeline
