// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "bench.hpp"
#include "hrwarp/attention_core.hpp"
#include "hrwarp/dataset_synth.hpp"
#include "hrwarp/feature_provider.hpp"
#include "hrwarp/key_sampler.hpp"
#include "hrwarp/local_edit.hpp"
#include "hrwarp/png_io.hpp"
#include "hrwarp/sparse_warp.hpp"
#include "hrwarp/tensor_io.hpp"
#include "json.hpp"

namespace hrwarp::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct SamplerFlags {
  std::uint64_t seed = 0;
  int iters = 15;
  int particles = 2;
  int init_samples = 4;
  double w0 = 0.0;
  double lambda = 0.8;
  int cutoff = 0;
  std::string prop_mode = "adjusted";
  int extra_prop = 0;
  CLI::Option* w0_opt = nullptr;
  CLI::Option* cutoff_opt = nullptr;
  CLI::Option* extra_opt = nullptr;

  SamplerConfig config(SamplerConfig base) const {
    base.seed = seed;
    base.iterations = iters;
    base.particle_slots = particles;
    base.init_samples = init_samples;
    base.decay_lambda = lambda;
    if (w0_opt->count()) base.window_w0 = w0;
    if (cutoff_opt->count()) base.decay_cutoff = cutoff;
    if (extra_opt->count()) base.extra_propagations = extra_prop;
    base.propagation_mode =
        prop_mode == "raw" ? PropagationMode::raw : PropagationMode::adjusted;
    return base;
  }
};

struct AttentionFlags {
  double gamma = 100.0;
  bool force_dense = false;
  std::size_t dense_cap = 16384;
  unsigned threads = 1;

  AttentionConfig config() const {
    AttentionConfig cfg;
    cfg.gamma = gamma;
    cfg.force_dense = force_dense;
    cfg.dense_size_cap = dense_cap;
    cfg.threads = threads;
    return cfg;
  }
};

struct InputFlags {
  std::string src_image;
  std::string src_labels;
  std::string tgt_labels;
  std::string mask;
  std::string features_src;
  std::string features_tgt;
  int classes = 0;
  int descriptor_dims = 16;
  int patch_radius = 2;
};

struct ConstraintFlags {
  std::string label_penalty = "on";
  double penalty_value = 1e4;
  bool reconstruction = false;
};

void add_sampler_flags(CLI::App* app, SamplerFlags& f) {
  app->add_option("--seed", f.seed, "Random seed")->capture_default_str();
  app->add_option("--iters", f.iters, "Sampling iterations N")->capture_default_str();
  app->add_option("--particles", f.particles, "Particle slots M")->capture_default_str();
  app->add_option("--init-samples", f.init_samples, "Random candidates per pool")
      ->capture_default_str();
  f.w0_opt = app->add_option("--w0", f.w0, "Initial search window (default: max(H, W))");
  app->add_option("--lambda", f.lambda, "Window decay rate")->capture_default_str();
  f.cutoff_opt = app->add_option("--cutoff", f.cutoff,
                                 "Iteration from which the window is zero (default: N-2)");
  app->add_option("--prop-mode", f.prop_mode, "Neighbour propagation")
      ->check(CLI::IsMember({"adjusted", "raw"}))
      ->capture_default_str();
  f.extra_opt = app->add_option("--extra-prop", f.extra_prop,
                                "Extra propagate/evaluate passes per iteration");
}

void add_attention_flags(CLI::App* app, AttentionFlags& f) {
  app->add_option("--gamma", f.gamma, "Softmax temperature")->capture_default_str();
  app->add_flag("--force-dense", f.force_dense, "Allow dense attention above the size cap");
  app->add_option("--dense-cap", f.dense_cap, "Pixel cap for dense attention")
      ->capture_default_str();
  app->add_option("--threads", f.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_input_flags(CLI::App* app, InputFlags& f, bool need_target) {
  app->add_option("--src-image", f.src_image, "Source image x0 (PNG)")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("--src-labels", f.src_labels, "Source label map c0 (8-bit PNG)")
      ->required()
      ->check(CLI::ExistingFile);
  auto* tgt = app->add_option("--tgt-labels", f.tgt_labels, "Target label map c1 (8-bit PNG)")
                  ->check(CLI::ExistingFile);
  if (need_target) tgt->required();
  auto* fs_opt = app->add_option("--features-src", f.features_src,
                                 "Source features (HRT1); upsampled when smaller")
                     ->check(CLI::ExistingFile);
  auto* ft_opt = app->add_option("--features-tgt", f.features_tgt,
                                 "Target features (HRT1); upsampled when smaller")
                     ->check(CLI::ExistingFile);
  fs_opt->needs(ft_opt);
  ft_opt->needs(fs_opt);
  app->add_option("--classes", f.classes, "Label classes (default: max id + 1)");
  app->add_option("--descriptor-dims", f.descriptor_dims, "Image descriptor channels")
      ->capture_default_str();
  app->add_option("--patch-radius", f.patch_radius, "Image descriptor patch radius")
      ->capture_default_str();
}

void add_constraint_flags(CLI::App* app, ConstraintFlags& f, InputFlags& in) {
  app->add_option("--label-penalty", f.label_penalty, "Penalise label mismatches")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  app->add_option("--penalty-value", f.penalty_value, "Score penalty")->capture_default_str();
  app->add_flag("--reconstruction", f.reconstruction,
                "Exclude keys whose footprint touches the mask");
  app->add_option("--mask", in.mask, "Edit mask m (8-bit PNG; default: pixels where c0 != c1)")
      ->check(CLI::ExistingFile);
}

struct Inputs {
  Image x0;
  LabelMap c0;
  LabelMap c1;
  Mask mask;
  ProviderConfig provider;
  std::optional<FeatureMap> u_x;
  std::optional<FeatureMap> u_c;
};

FeatureMap fit_features(const FeatureMap& raw, int h, int w, const ProviderConfig& provider) {
  if (raw.same_extent(h, w)) return normalize_location_wise(raw);
  return upsample_features(raw, std::monostate{}, h, w, provider);
}

Inputs load_inputs(const InputFlags& f) {
  Inputs in;
  in.x0 = load_image(f.src_image);
  in.c0 = load_label_map(f.src_labels);
  in.c1 = f.tgt_labels.empty() ? in.c0 : load_label_map(f.tgt_labels);
  if (!in.c0.same_extent(in.x0) || !in.c1.same_extent(in.x0)) {
    throw ArgumentError("image and label maps must share one extent");
  }
  if (!f.mask.empty()) {
    in.mask = load_mask(f.mask);
    if (!in.mask.same_extent(in.x0)) throw ArgumentError("mask extent differs from the image");
  } else {
    in.mask = Mask(in.x0.height(), in.x0.width());
    for (std::size_t p = 0; p < in.mask.pixel_count(); ++p) {
      in.mask.values()[p] = in.c0.values()[p] != in.c1.values()[p];
    }
  }
  int max_id = 1;
  for (auto v : in.c0.values()) max_id = std::max<int>(max_id, v);
  for (auto v : in.c1.values()) max_id = std::max<int>(max_id, v);
  in.provider.class_count = f.classes > 0 ? f.classes : max_id + 1;
  in.provider.descriptor_dims = f.descriptor_dims;
  in.provider.patch_radius = f.patch_radius;
  in.provider.validate();
  if (!f.features_src.empty()) {
    in.u_x = fit_features(load_tensor(f.features_src), in.x0.height(), in.x0.width(), in.provider);
    in.u_c = fit_features(load_tensor(f.features_tgt), in.x0.height(), in.x0.width(), in.provider);
  }
  return in;
}

std::pair<FeatureMap, FeatureMap> feature_pair(const Inputs& in) {
  if (in.u_x) return {*in.u_x, *in.u_c};
  return {layout_image_features(in.c0, in.x0, in.provider),
          layout_image_features(in.c1, in.x0, in.provider)};
}

void emit(std::ostream& out, const Json& j) { out << j.dump() << '\n'; }

// ---- warp -----------------------------------------------------------------

struct WarpCommand {
  InputFlags in;
  SamplerFlags sampler;
  AttentionFlags attention;
  ConstraintFlags constraints;
  std::string out;
  std::string out_raw;
  std::string dump_keys;
  bool no_dedupe = false;

  void attach(CLI::App* app) {
    add_input_flags(app, in, true);
    add_sampler_flags(app, sampler);
    add_attention_flags(app, attention);
    add_constraint_flags(app, constraints, in);
    app->add_option("--out", out, "Composited result x_warp (PNG)")->required();
    app->add_option("--out-raw", out_raw, "Uncomposited warp r (PNG)");
    app->add_option("--dump-keys", dump_keys, "Keys and weights per query (HRT1, H x W x 3K)");
    app->add_flag("--no-dedupe", no_dedupe, "Keep repeated keys");
  }

  int execute(std::ostream& os) const {
    const Inputs inputs = load_inputs(in);
    PipelineConfig cfg;
    cfg.sampler = sampler.config(SamplerConfig::local_edit_preset());
    cfg.attention = attention.config();
    cfg.provider = inputs.provider;
    cfg.label_penalty_enabled = constraints.label_penalty == "on";
    cfg.penalty_value = constraints.penalty_value;
    cfg.reconstruction_mode = constraints.reconstruction;
    cfg.dedupe_keys = !no_dedupe;
    cfg.source_features = inputs.u_x;
    cfg.target_features = inputs.u_c;
    const LocalEditResult res = warp_full(inputs.x0, inputs.c0, inputs.c1, inputs.mask, cfg);
    save_image(res.composited, out);
    if (!out_raw.empty()) save_image(res.warp.warped, out_raw);
    if (!dump_keys.empty()) save_tensor(keys_to_tensor(res.warp), dump_keys);
    Json j;
    j["command"] = "warp";
    j["height"] = inputs.x0.height();
    j["width"] = inputs.x0.width();
    j["masked_pixels"] = inputs.mask.count();
    j["keys"] = res.warp.key_coords.size();
    j["sampling_evaluations"] = res.sampling.evaluations;
    j["evaluations"] = res.evaluations;
    emit(os, j);
    return kExitOk;
  }
};

// ---- dense-warp -----------------------------------------------------------

struct DenseWarpCommand {
  InputFlags in;
  AttentionFlags attention;
  std::string out;

  void attach(CLI::App* app) {
    add_input_flags(app, in, true);
    add_attention_flags(app, attention);
    app->add_option("--out", out, "Dense warp r (PNG)")->required();
  }

  int execute(std::ostream& os) const {
    const Inputs inputs = load_inputs(in);
    const auto [u_x, u_c] = feature_pair(inputs);
    const WarpResult res = dense_warp(inputs.x0, u_x, u_c, attention.config());
    save_image(res.warped, out);
    Json j;
    j["command"] = "dense-warp";
    j["height"] = inputs.x0.height();
    j["width"] = inputs.x0.width();
    j["evaluations"] = res.evaluations;
    emit(os, j);
    return kExitOk;
  }
};

// ---- sample-keys ----------------------------------------------------------

struct SampleKeysCommand {
  InputFlags in;
  SamplerFlags sampler;
  ConstraintFlags constraints;
  unsigned threads = 1;
  std::string out;

  void attach(CLI::App* app) {
    add_input_flags(app, in, true);
    add_sampler_flags(app, sampler);
    add_constraint_flags(app, constraints, in);
    app->add_option("--threads", threads, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--out,--dump-keys", out,
                    "Accumulated keys (HRT1, H x W x 3MN of y, x, score)")
        ->required();
  }

  int execute(std::ostream& os) const {
    const Inputs inputs = load_inputs(in);
    const auto [u_x, u_c] = feature_pair(inputs);
    SamplerConfig cfg = sampler.config(SamplerConfig{});
    cfg.threads = threads;
    ScoreConstraints sc;
    sc.label_penalty_enabled = constraints.label_penalty == "on";
    sc.penalty_value = constraints.penalty_value;
    sc.source_labels = &inputs.c0;
    sc.target_labels = &inputs.c1;
    sc.excluded_mask = constraints.reconstruction ? &inputs.mask : nullptr;
    const SamplingResult res = sample_key_indices(u_x, u_c, cfg, sc);
    const int per = res.keys.per_query;
    FeatureMap dump(res.keys.height, res.keys.width, 3 * per);
    for (std::size_t q = 0; q < dump.pixel_count(); ++q) {
      const auto keys = res.keys.keys_of(q);
      const auto scores = res.keys.scores_of(q);
      auto dst = dump.pixel(q);
      for (int i = 0; i < per; ++i) {
        dst[3 * i] = static_cast<float>(keys[i].y);
        dst[3 * i + 1] = static_cast<float>(keys[i].x);
        dst[3 * i + 2] = static_cast<float>(scores[i]);
      }
    }
    save_tensor(dump, out);
    Json j;
    j["command"] = "sample-keys";
    j["height"] = res.keys.height;
    j["width"] = res.keys.width;
    j["keys_per_query"] = per;
    j["evaluations"] = res.evaluations;
    emit(os, j);
    return kExitOk;
  }
};

// ---- cycle-loss -----------------------------------------------------------

struct CycleLossCommand {
  InputFlags in;
  AttentionFlags attention;

  void attach(CLI::App* app) {
    add_input_flags(app, in, true);
    add_attention_flags(app, attention);
  }

  int execute(std::ostream& os) const {
    const Inputs inputs = load_inputs(in);
    const auto [u_x, u_c] = feature_pair(inputs);
    const double loss = cycle_loss(inputs.x0, u_x, u_c, attention.config());
    Json j;
    j["command"] = "cycle-loss";
    j["height"] = inputs.x0.height();
    j["width"] = inputs.x0.width();
    j["cycle_loss"] = loss;
    emit(os, j);
    return kExitOk;
  }
};

// ---- synth-dataset --------------------------------------------------------

struct SynthCommand {
  std::string image;
  std::string labels;
  std::string out_dir;
  std::uint64_t seed = 0;
  int trials = 1;
  SynthOptions options;

  void attach(CLI::App* app) {
    app->add_option("--image", image, "Image x (PNG)")->required()->check(CLI::ExistingFile);
    app->add_option("--labels", labels, "Label map c (8-bit PNG)")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--out-dir", out_dir, "Directory for emitted pairs")->required();
    app->add_option("--seed", seed, "Seed of the first trial; trial i uses seed + i")
        ->capture_default_str();
    app->add_option("--trials", trials, "Number of seeded trials")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--max-iters", options.max_iters, "Attempts per trial")
        ->capture_default_str();
    app->add_option("--positions", options.positions, "Seed positions per attempt")
        ->capture_default_str();
    app->add_option("--min-solidity", options.min_solidity, "Solidity gate")
        ->capture_default_str();
    app->add_flag("--literal-hull-gate", options.literal_hull_gate,
                  "Skip when hull/area > 0.2 (rejects every component)");
  }

  int execute(std::ostream& os) const {
    const Image x = load_image(image);
    const LabelMap c = load_label_map(labels);
    if (!x.same_extent(c)) throw ArgumentError("image and label map extents differ");
    fs::create_directories(out_dir);
    std::ofstream records(fs::path(out_dir) / "records.jsonl", std::ios::binary);
    for (int i = 0; i < trials; ++i) {
      const std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(i);
      const auto pair = synth_manipulation_pair(x, c, trial_seed, options);
      Json j;
      j["trial"] = i;
      j["seed"] = trial_seed;
      j["success"] = pair.has_value();
      if (pair) {
        char stem[32];
        std::snprintf(stem, sizeof stem, "pair_%04d", i);
        const fs::path base = fs::path(out_dir) / stem;
        save_image(pair->image, base.string() + "_image.png");
        save_label_map(pair->labels, base.string() + "_labels.png");
        save_mask(pair->transformed, base.string() + "_mask.png");
        const SynthRecord& r = pair->record;
        j["attempt"] = r.attempt;
        j["label"] = r.label;
        j["area"] = r.area;
        j["transformed_area"] = r.transformed_area;
        j["solidity"] = r.solidity;
        j["scale"] = r.affine.scale;
        j["rotation_deg"] = r.affine.rotation_deg;
        j["pivot"] = {r.affine.pivot.y, r.affine.pivot.x};
        j["image"] = std::string(stem) + "_image.png";
        j["labels"] = std::string(stem) + "_labels.png";
        j["mask"] = std::string(stem) + "_mask.png";
      }
      emit(os, j);
      emit(records, j);
    }
    return kExitOk;
  }
};

// ---- bench ----------------------------------------------------------------

struct BenchCommand {
  SamplerFlags sampler;
  AttentionFlags attention;
  std::vector<int> sizes{64, 128, 256};
  std::string mode = "sparse";
  int channels = 16;

  void attach(CLI::App* app) {
    add_sampler_flags(app, sampler);
    add_attention_flags(app, attention);
    app->add_option("--sizes", sizes, "Square instance sizes")
        ->delimiter(',')
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--mode", mode, "Which path to run")
        ->check(CLI::IsMember({"sparse", "dense", "both"}))
        ->capture_default_str();
    app->add_option("--channels", channels, "Feature channels")->capture_default_str();
  }

  int execute(std::ostream& os) const {
    BenchOptions opts;
    opts.sizes = sizes;
    opts.channels = channels;
    opts.sampler = sampler.config(SamplerConfig{});
    opts.sampler.threads = attention.threads;
    opts.attention = attention.config();
    if (mode == "dense") opts.modes = {BenchMode::dense};
    if (mode == "both") opts.modes = {BenchMode::sparse, BenchMode::dense};
    // Emit entries as they complete so long runs report progress.
    for (int size : sizes) {
      opts.sizes = {size};
      for (const BenchEntry& e : run_bench(opts)) os << to_json_line(e) << '\n' << std::flush;
    }
    return kExitOk;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse attentive warping for layout-guided image editing", "hrwarp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hrwarp 0.1.0");

  WarpCommand warp;
  DenseWarpCommand dense;
  SampleKeysCommand sample;
  CycleLossCommand cycle;
  SynthCommand synth;
  BenchCommand bench;
  auto* warp_app = app.add_subcommand("warp", "Sparse warp of x0 to layout c1, composited in m");
  auto* dense_app = app.add_subcommand("dense-warp", "All-pairs attention warp (size capped)");
  auto* sample_app = app.add_subcommand("sample-keys", "Run the key sampler and dump its keys");
  auto* cycle_app = app.add_subcommand("cycle-loss", "Forward/backward warp consistency loss");
  auto* synth_app = app.add_subcommand("synth-dataset", "Emit shape-manipulation training pairs");
  auto* bench_app = app.add_subcommand("bench", "Similarity-evaluation counts, sparse vs dense");
  warp.attach(warp_app);
  dense.attach(dense_app);
  sample.attach(sample_app);
  cycle.attach(cycle_app);
  synth.attach(synth_app);
  bench.attach(bench_app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitArgument;
  }

  try {
    if (warp_app->parsed()) return warp.execute(out);
    if (dense_app->parsed()) return dense.execute(out);
    if (sample_app->parsed()) return sample.execute(out);
    if (cycle_app->parsed()) return cycle.execute(out);
    if (synth_app->parsed()) return synth.execute(out);
    if (bench_app->parsed()) return bench.execute(out);
  } catch (const ArgumentError& e) {
    err << "argument error: " << e.what() << '\n';
    return kExitArgument;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const SizeCapError& e) {
    err << "size cap: " << e.what() << '\n';
    return kExitSizeCap;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitArgument;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace hrwarp::cli
