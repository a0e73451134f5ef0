// SPDX-License-Identifier: Apache-2.0
#include "olion/harness.hpp"

#include <cmath>
#include <limits>

#include "olion/checkpoint.hpp"
#include "olion/diagnostics.hpp"
#include "olion/errors.hpp"
#include "olion/io.hpp"
#include "olion/linalg.hpp"
#include "olion/rng.hpp"

namespace olion {

namespace {

constexpr uint64_t kBatchTag = 0x42415443;

void check_known_keys(const nlohmann::json& doc,
                      const std::vector<std::string>& known, const char* where) {
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(ErrorCode::ConfigInvalid,
                  std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

ScheduleKind schedule_kind_from_name(const std::string& name) {
  if (name == "constant") return ScheduleKind::Constant;
  if (name == "warmup_cosine") return ScheduleKind::WarmupCosine;
  if (name == "warmup_linear") return ScheduleKind::WarmupLinear;
  throw Error(ErrorCode::ConfigInvalid, "unknown schedule kind: " + name);
}

const char* schedule_kind_name(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::Constant: return "constant";
    case ScheduleKind::WarmupCosine: return "warmup_cosine";
    case ScheduleKind::WarmupLinear: return "warmup_linear";
  }
  return "?";
}

double stacked_grad_norm(const std::vector<Matrix>& grads) {
  double acc = 0.0;
  for (const Matrix& g : grads) {
    double n = frobenius_norm(g);
    acc += n * n;
  }
  return std::sqrt(acc);
}

/// Shared step-loop for fresh and resumed runs. `config.steps` already
/// equals start_step + steps_to_run.
RunSummary run_loop(const RunConfig& config, Problem& problem,
                    std::vector<ParamBlock> blocks, std::vector<OptimizerState> states,
                    int64_t start_step, int64_t steps_to_run) {
  ensure_directory(config.output_dir);
  write_file_bytes(config.output_dir / "config.json", config.to_json().dump(2) + "\n");

  RunSummary summary;
  summary.status = "ok";
  summary.start_step = start_step;
  summary.run_dir = config.output_dir;
  summary.loss_csv_path = config.output_dir / "loss.csv";
  summary.diagnostics_csv_path = config.output_dir / "diagnostics.csv";
  summary.summary_path = config.output_dir / "summary.json";

  CsvWriter loss_csv(summary.loss_csv_path, {"step", "loss", "lr"});
  TrajectoryRecorder recorder(summary.diagnostics_csv_path, config.diag_interval);

  auto persist_summary = [&](double final_loss, double final_grad_norm) {
    nlohmann::json doc;
    doc["status"] = summary.status;
    doc["start_step"] = summary.start_step;
    doc["steps_run"] = summary.steps_run;
    doc["final_loss"] = final_loss;
    doc["final_grad_norm"] = final_grad_norm;
    if (summary.divergent_step >= 0) doc["divergent_step"] = summary.divergent_step;
    if (summary.holdout_loss) doc["holdout_loss"] = *summary.holdout_loss;
    if (summary.local_smoothness_estimate) {
      doc["local_smoothness_estimate"] = *summary.local_smoothness_estimate;
      doc["local_smoothness_is_estimate"] = true;
    }
    doc["loss_csv"] = summary.loss_csv_path.filename().string();
    doc["diagnostics_csv"] = summary.diagnostics_csv_path.filename().string();
    auto ckpts = nlohmann::json::array();
    for (const auto& p : summary.checkpoint_paths) ckpts.push_back(p.filename().string());
    doc["checkpoints"] = ckpts;
    write_file_bytes(summary.summary_path, doc.dump(2) + "\n");
  };

  auto save_snapshot = [&](const std::string& filename, int64_t step_count) {
    Checkpoint ckpt;
    // Checkpoints identify the experiment, not its location: the embedded
    // echo drops output_dir so split and unbroken runs produce identical
    // bytes wherever their outputs live.
    ckpt.config = config.to_json();
    ckpt.config.erase("output_dir");
    ckpt.step_count = step_count;
    ckpt.blocks = blocks;
    ckpt.states = states;
    std::filesystem::path path = config.output_dir / filename;
    save_checkpoint(ckpt, path);
    summary.checkpoint_paths.push_back(path);
  };

  auto abort_nonfinite = [&](int64_t step) {
    summary.status = "diverged";
    summary.divergent_step = step;
    loss_csv.flush();
    recorder.flush();
    persist_summary(std::numeric_limits<double>::quiet_NaN(),
                    std::numeric_limits<double>::quiet_NaN());
  };

  std::optional<double> smoothness = problem.smoothness_constant();
  bool all_matrix_blocks = true;
  for (const ParamBlock& b : blocks) {
    if (b.kind != BlockKind::MatrixShaped) all_matrix_blocks = false;
  }
  bool audit_descent = config.optimizer == OptimizerKind::OLion &&
                       smoothness.has_value() && all_matrix_blocks;

  for (int64_t t = start_step; t < start_step + steps_to_run; ++t) {
    double eta = schedule_lr(config.schedule, t);
    double loss = problem.loss(blocks);
    if (!std::isfinite(loss)) {
      abort_nonfinite(t);
      summary.loss_curve.push_back(loss);
      return summary;
    }
    summary.loss_curve.push_back(loss);
    loss_csv.write_row({std::to_string(t), format_g17(loss), format_g17(eta)});

    std::vector<Matrix> grads =
        config.batch.full
            ? problem.grad(blocks)
            : problem.minibatch_grad(blocks, derive_seed(config.seed ^ kBatchTag,
                                                         static_cast<uint64_t>(t)),
                                     config.batch.size);
    if (config.grad_clip > 0.0) {
      double norm = stacked_grad_norm(grads);
      if (norm > config.grad_clip) {
        double scale = config.grad_clip / norm;
        for (Matrix& g : grads) g *= scale;
      }
    }

    bool diag_due = recorder.due(t);
    std::vector<StepArtifacts> artifacts(blocks.size());
    for (size_t b = 0; b < blocks.size(); ++b) {
      artifacts[b] = apply_step(config.optimizer, blocks[b], grads[b], states[b],
                                config.hyperparams, eta, config.polar_mode);
      if (!blocks[b].matrix.is_finite()) {
        abort_nonfinite(t);
        return summary;
      }
    }

    if (diag_due) {
      // The audit certifies the exact-polar theory quantities even when
      // training runs in Newton-Schulz mode.
      double residual = std::numeric_limits<double>::quiet_NaN();
      if (audit_descent) {
        double f_after = problem.loss(blocks);
        double bound = loss;
        for (size_t b = 0; b < blocks.size(); ++b) {
          if (artifacts[b].zero_signal) continue;
          StationarityPhi phi = stationarity_phi(artifacts[b].g_tilde);
          double eta_eff = eta * artifacts[b].gamma;
          bound -= eta_eff * phi.phi;
          bound += 0.5 * *smoothness * eta_eff * eta_eff *
                   static_cast<double>(blocks[b].matrix.size());
        }
        residual = f_after - bound;
      }
      for (size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].kind != BlockKind::MatrixShaped) continue;
        recorder.record(t, blocks[b].name, blocks[b].matrix, artifacts[b].g_tilde,
                        artifacts[b].direction, eta, residual);
      }
    }

    if (config.checkpoint_interval &&
        (t + 1) % *config.checkpoint_interval == 0 && t + 1 != config.steps) {
      char name[40];
      std::snprintf(name, sizeof(name), "checkpoint_%08lld.ckpt",
                    static_cast<long long>(t + 1));
      save_snapshot(name, t + 1);
    }
  }

  summary.steps_run = steps_to_run;
  summary.final_loss = problem.loss(blocks);
  if (!std::isfinite(summary.final_loss)) {
    abort_nonfinite(start_step + steps_to_run);
    return summary;
  }
  summary.final_grad_norm = stacked_grad_norm(problem.grad(blocks));
  summary.holdout_loss = problem.holdout_loss(blocks);
  if (!smoothness.has_value()) {
    summary.local_smoothness_estimate = estimate_local_smoothness(
        problem, blocks, 0.1, 256, derive_seed(config.seed, 0x4c455354));
  }

  save_snapshot("final.ckpt", start_step + steps_to_run);
  summary.final_blocks = blocks;
  loss_csv.flush();
  recorder.flush();
  persist_summary(summary.final_loss, summary.final_grad_norm);
  return summary;
}

RunSummary start_run(const RunConfig& config) {
  config.validate();
  auto problem = make_problem(config.problem_name, config.problem_params, config.seed);
  std::vector<ParamBlock> blocks = problem->initial_blocks();
  std::vector<OptimizerState> states;
  states.reserve(blocks.size());
  for (const ParamBlock& block : blocks) {
    states.push_back(OptimizerState::zeros_like(
        block, needs_second_moment(config.optimizer, block.kind)));
  }
  return run_loop(config, *problem, std::move(blocks), std::move(states), 0,
                  config.steps);
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& doc) {
  check_known_keys(doc,
                   {"problem", "optimizer", "hyperparams", "schedule", "steps", "batch",
                    "seed", "diag_interval", "output_dir", "checkpoint_interval",
                    "polar_mode", "grad_clip"},
                   "config");
  RunConfig config;
  if (doc.contains("problem")) {
    const auto& problem = doc.at("problem");
    check_known_keys(problem, {"name", "params"}, "config.problem");
    config.problem_name = problem.value("name", config.problem_name);
    config.problem_params = problem.value("params", nlohmann::json::object());
  }
  if (doc.contains("optimizer")) {
    config.optimizer = optimizer_kind_from_name(doc.at("optimizer").get<std::string>());
  }
  config.hyperparams = default_hyperparams(config.optimizer);
  if (doc.contains("hyperparams")) {
    const auto& hp = doc.at("hyperparams");
    check_known_keys(hp,
                     {"lr", "beta1", "beta2", "weight_decay", "ns_steps", "rms_target",
                      "adam_eps"},
                     "config.hyperparams");
    config.hyperparams.lr = hp.value("lr", config.hyperparams.lr);
    config.hyperparams.beta1 = hp.value("beta1", config.hyperparams.beta1);
    config.hyperparams.beta2 = hp.value("beta2", config.hyperparams.beta2);
    config.hyperparams.weight_decay =
        hp.value("weight_decay", config.hyperparams.weight_decay);
    config.hyperparams.ns_steps = hp.value("ns_steps", config.hyperparams.ns_steps);
    config.hyperparams.rms_target = hp.value("rms_target", config.hyperparams.rms_target);
    config.hyperparams.adam_eps = hp.value("adam_eps", config.hyperparams.adam_eps);
  }
  config.steps = doc.value("steps", config.steps);
  // Default schedule: constant at hyperparams.lr over the run length.
  config.schedule.kind = ScheduleKind::Constant;
  config.schedule.lr_max = config.hyperparams.lr;
  config.schedule.lr_min = 0.0;
  config.schedule.total_steps = config.steps;
  if (doc.contains("schedule")) {
    const auto& sched = doc.at("schedule");
    check_known_keys(sched, {"kind", "warmup_steps", "total_steps", "lr_max", "lr_min"},
                     "config.schedule");
    config.schedule.kind =
        schedule_kind_from_name(sched.value("kind", std::string("constant")));
    config.schedule.warmup_steps = sched.value("warmup_steps", int64_t{0});
    config.schedule.total_steps = sched.value("total_steps", config.steps);
    config.schedule.lr_max = sched.value("lr_max", config.hyperparams.lr);
    config.schedule.lr_min = sched.value("lr_min", 0.0);
  }
  if (doc.contains("batch")) {
    const auto& batch = doc.at("batch");
    check_known_keys(batch, {"mode", "size"}, "config.batch");
    std::string mode = batch.value("mode", std::string("full"));
    if (mode == "full") {
      config.batch.full = true;
    } else if (mode == "minibatch") {
      config.batch.full = false;
      config.batch.size = batch.value("size", 0);
    } else {
      throw Error(ErrorCode::ConfigInvalid, "batch.mode must be full or minibatch");
    }
  }
  config.seed = doc.value("seed", config.seed);
  config.diag_interval = doc.value("diag_interval", config.diag_interval);
  if (doc.contains("output_dir")) {
    config.output_dir = doc.at("output_dir").get<std::string>();
  }
  if (doc.contains("checkpoint_interval") && !doc.at("checkpoint_interval").is_null()) {
    config.checkpoint_interval = doc.at("checkpoint_interval").get<int64_t>();
  }
  if (doc.contains("polar_mode")) {
    std::string mode = doc.at("polar_mode").get<std::string>();
    if (mode == "exact") {
      config.polar_mode = PolarMode::Exact;
    } else if (mode == "newton_schulz") {
      config.polar_mode = PolarMode::NewtonSchulz;
    } else {
      throw Error(ErrorCode::ConfigInvalid, "polar_mode must be exact or newton_schulz");
    }
  }
  config.grad_clip = doc.value("grad_clip", 0.0);
  return config;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json doc;
  doc["problem"] = {{"name", problem_name}, {"params", problem_params}};
  doc["optimizer"] = optimizer_kind_name(optimizer);
  doc["hyperparams"] = {{"lr", hyperparams.lr},
                        {"beta1", hyperparams.beta1},
                        {"beta2", hyperparams.beta2},
                        {"weight_decay", hyperparams.weight_decay},
                        {"ns_steps", hyperparams.ns_steps},
                        {"rms_target", hyperparams.rms_target},
                        {"adam_eps", hyperparams.adam_eps}};
  doc["schedule"] = {{"kind", schedule_kind_name(schedule.kind)},
                     {"warmup_steps", schedule.warmup_steps},
                     {"total_steps", schedule.total_steps},
                     {"lr_max", schedule.lr_max},
                     {"lr_min", schedule.lr_min}};
  doc["steps"] = steps;
  if (batch.full) {
    doc["batch"] = {{"mode", "full"}};
  } else {
    doc["batch"] = {{"mode", "minibatch"}, {"size", batch.size}};
  }
  doc["seed"] = seed;
  doc["diag_interval"] = diag_interval;
  doc["output_dir"] = output_dir.string();
  if (checkpoint_interval) doc["checkpoint_interval"] = *checkpoint_interval;
  doc["polar_mode"] = polar_mode == PolarMode::Exact ? "exact" : "newton_schulz";
  doc["grad_clip"] = grad_clip;
  return doc;
}

void RunConfig::validate() const {
  if (steps < 1) {
    throw Error(ErrorCode::ConfigInvalid, "steps must be >= 1");
  }
  if (diag_interval < 1) {
    throw Error(ErrorCode::ConfigInvalid, "diag_interval must be >= 1");
  }
  if (checkpoint_interval && *checkpoint_interval < 1) {
    throw Error(ErrorCode::ConfigInvalid, "checkpoint_interval must be >= 1");
  }
  if (!batch.full && batch.size < 1) {
    throw Error(ErrorCode::ConfigInvalid, "minibatch size must be >= 1");
  }
  if (grad_clip < 0.0) {
    throw Error(ErrorCode::ConfigInvalid, "grad_clip must be non-negative");
  }
  hyperparams.validate();
  schedule.validate();
  if (steps > schedule.total_steps) {
    throw Error(ErrorCode::ConfigInvalid, "steps exceeds schedule.total_steps");
  }
  if (output_dir.empty()) {
    throw Error(ErrorCode::ConfigInvalid, "output_dir must be set");
  }
}

RunSummary run(const RunConfig& config) {
  RunSummary summary = start_run(config);
  if (summary.status != "ok") {
    throw Error(ErrorCode::NonFiniteLoss,
                "loss became non-finite at step " +
                    std::to_string(summary.divergent_step) + " (see " +
                    summary.summary_path.string() + ")");
  }
  return summary;
}

RunSummary run_no_throw(const RunConfig& config) { return start_run(config); }

RunSummary resume(const std::filesystem::path& checkpoint_path, int64_t remaining_steps,
                  const std::optional<std::filesystem::path>& output_dir,
                  const std::optional<std::string>& expected_problem) {
  if (remaining_steps < 1) {
    throw Error(ErrorCode::ConfigInvalid, "resume: remaining steps must be >= 1");
  }
  Checkpoint ckpt = load_checkpoint(checkpoint_path);
  RunConfig config = RunConfig::from_json(ckpt.config);
  if (expected_problem && *expected_problem != config.problem_name) {
    throw Error(ErrorCode::ConfigInvalid,
                "resume: checkpoint problem '" + config.problem_name +
                    "' does not match expected '" + *expected_problem + "'");
  }
  int64_t start_step = ckpt.step_count;
  if (start_step + remaining_steps > config.schedule.total_steps) {
    throw Error(ErrorCode::ConfigInvalid,
                "resume: run would exceed the schedule's total_steps");
  }
  // The echoed config tracks the cumulative step count so that a resumed
  // final checkpoint is byte-identical to an unbroken run's.
  config.steps = start_step + remaining_steps;
  config.output_dir = output_dir ? *output_dir
                                 : checkpoint_path.parent_path() / "resumed";
  config.validate();

  auto problem = make_problem(config.problem_name, config.problem_params, config.seed);
  std::vector<ParamBlock> expected_blocks = problem->initial_blocks();
  if (expected_blocks.size() != ckpt.blocks.size()) {
    throw Error(ErrorCode::ConfigInvalid, "resume: block count mismatch with problem");
  }
  for (size_t b = 0; b < expected_blocks.size(); ++b) {
    if (!expected_blocks[b].matrix.same_shape(ckpt.blocks[b].matrix) ||
        expected_blocks[b].name != ckpt.blocks[b].name) {
      throw Error(ErrorCode::ConfigInvalid,
                  "resume: block layout mismatch at index " + std::to_string(b));
    }
  }
  return run_loop(config, *problem, std::move(ckpt.blocks), std::move(ckpt.states),
                  start_step, remaining_steps);
}

SweepConfig SweepConfig::from_json(const nlohmann::json& doc) {
  check_known_keys(doc, {"base", "lr_grid", "metric_step", "optimizers",
                         "hyperparams_overrides"},
                   "sweep");
  SweepConfig sweep;
  if (!doc.contains("base")) {
    throw Error(ErrorCode::ConfigInvalid, "sweep: missing base config");
  }
  sweep.base = RunConfig::from_json(doc.at("base"));
  sweep.lr_grid = doc.value("lr_grid", std::vector<double>{});
  sweep.metric_step = doc.value("metric_step", int64_t{0});
  if (doc.contains("optimizers")) {
    for (const auto& name : doc.at("optimizers")) {
      sweep.optimizers.push_back(optimizer_kind_from_name(name.get<std::string>()));
    }
  } else {
    sweep.optimizers = {sweep.base.optimizer};
  }
  sweep.hyperparams_overrides =
      doc.value("hyperparams_overrides", nlohmann::json::object());
  return sweep;
}

void SweepConfig::validate() const {
  base.validate();
  if (lr_grid.empty()) {
    throw Error(ErrorCode::ConfigInvalid, "sweep: lr_grid must be non-empty");
  }
  for (double lr : lr_grid) {
    if (!(lr > 0.0)) {
      throw Error(ErrorCode::ConfigInvalid, "sweep: learning rates must be positive");
    }
  }
  if (metric_step < 0 || metric_step >= base.steps) {
    throw Error(ErrorCode::ConfigInvalid, "sweep: metric_step outside [0, steps)");
  }
  if (optimizers.empty()) {
    throw Error(ErrorCode::ConfigInvalid, "sweep: optimizer list must be non-empty");
  }
}

std::vector<SweepCell> lr_sweep(const SweepConfig& sweep) {
  sweep.validate();
  ensure_directory(sweep.base.output_dir);

  std::vector<SweepCell> cells;
  int cell_index = 0;
  for (OptimizerKind opt : sweep.optimizers) {
    for (double lr : sweep.lr_grid) {
      RunConfig config = sweep.base;
      config.optimizer = opt;
      // Per-optimizer betas/eps come from the optimizer's defaults; decay
      // and structural knobs carry over from the base config.
      HyperParams hp = default_hyperparams(opt);
      hp.weight_decay = sweep.base.hyperparams.weight_decay;
      hp.ns_steps = sweep.base.hyperparams.ns_steps;
      hp.rms_target = sweep.base.hyperparams.rms_target;
      hp.adam_eps = sweep.base.hyperparams.adam_eps;
      hp.lr = lr;
      const std::string opt_name = optimizer_kind_name(opt);
      if (sweep.hyperparams_overrides.contains(opt_name)) {
        const auto& over = sweep.hyperparams_overrides.at(opt_name);
        hp.beta1 = over.value("beta1", hp.beta1);
        hp.beta2 = over.value("beta2", hp.beta2);
        hp.weight_decay = over.value("weight_decay", hp.weight_decay);
        hp.ns_steps = over.value("ns_steps", hp.ns_steps);
        hp.rms_target = over.value("rms_target", hp.rms_target);
        hp.adam_eps = over.value("adam_eps", hp.adam_eps);
      }
      config.hyperparams = hp;
      // Rescale the schedule to the cell's peak rate, keeping its shape.
      double floor_ratio = sweep.base.schedule.lr_max > 0.0
                               ? sweep.base.schedule.lr_min / sweep.base.schedule.lr_max
                               : 0.0;
      config.schedule.lr_max = lr;
      config.schedule.lr_min = lr * floor_ratio;

      char cell_name[64];
      std::snprintf(cell_name, sizeof(cell_name), "cell_%02d_%s", cell_index,
                    opt_name.c_str());
      config.output_dir = sweep.base.output_dir / "cells" / cell_name;

      SweepCell cell;
      cell.optimizer = opt;
      cell.lr = lr;
      cell.run_dir = config.output_dir;
      RunSummary summary = run_no_throw(config);
      if (static_cast<int64_t>(summary.loss_curve.size()) > sweep.metric_step) {
        cell.loss_at_metric_step = summary.loss_curve[sweep.metric_step];
      } else {
        cell.loss_at_metric_step = std::numeric_limits<double>::infinity();
      }
      cell.divergent =
          summary.status != "ok" || !std::isfinite(cell.loss_at_metric_step);
      cells.push_back(cell);
      ++cell_index;
    }
  }

  CsvWriter table(sweep.base.output_dir / "sweep_table.csv",
                  {"optimizer", "lr", "loss_at_metric_step", "status"});
  for (const SweepCell& cell : cells) {
    table.write_row({optimizer_kind_name(cell.optimizer), format_g17(cell.lr),
                     format_g17(cell.loss_at_metric_step),
                     cell.divergent ? "divergent" : "ok"});
  }
  return cells;
}

std::vector<BlockDistributions> dump_distributions(
    const std::filesystem::path& checkpoint_path,
    const std::vector<std::string>& block_names,
    const std::filesystem::path& output_dir) {
  Checkpoint ckpt = load_checkpoint(checkpoint_path);
  ensure_directory(output_dir);

  std::vector<const ParamBlock*> selected;
  if (block_names.empty()) {
    for (const ParamBlock& b : ckpt.blocks) selected.push_back(&b);
  } else {
    for (const std::string& name : block_names) {
      const ParamBlock* found = nullptr;
      for (const ParamBlock& b : ckpt.blocks) {
        if (b.name == name) found = &b;
      }
      if (!found) {
        throw Error(ErrorCode::UnknownBlock, "no block named '" + name + "'");
      }
      selected.push_back(found);
    }
  }

  constexpr int kBins = 64;
  std::vector<BlockDistributions> out;
  for (const ParamBlock* block : selected) {
    BlockDistributions dist;
    dist.block = block->name;
    dist.singular_values = singular_values(block->matrix);

    double max_abs = max_abs_entry(block->matrix);
    dist.histogram_edges.resize(kBins + 1);
    for (int i = 0; i <= kBins; ++i) {
      dist.histogram_edges[i] = max_abs * static_cast<double>(i) / kBins;
    }
    dist.histogram_counts.assign(kBins, 0);
    for (double v : block->matrix.data()) {
      int bin = 0;
      if (max_abs > 0.0) {
        bin = static_cast<int>(std::abs(v) / max_abs * kBins);
        bin = std::min(bin, kBins - 1);
      }
      dist.histogram_counts[bin] += 1;
    }

    CsvWriter sv_csv(output_dir / (block->name + "_singular_values.csv"),
                     {"index", "sigma"});
    for (size_t i = 0; i < dist.singular_values.size(); ++i) {
      sv_csv.write_row({std::to_string(i), format_g17(dist.singular_values[i])});
    }
    CsvWriter hist_csv(output_dir / (block->name + "_abs_hist.csv"),
                       {"bin_lo", "bin_hi", "count"});
    for (int i = 0; i < kBins; ++i) {
      hist_csv.write_row({format_g17(dist.histogram_edges[i]),
                          format_g17(dist.histogram_edges[i + 1]),
                          std::to_string(dist.histogram_counts[i])});
    }
    out.push_back(std::move(dist));
  }
  return out;
}

void apply_overrides(nlohmann::json& doc,
                     const std::vector<std::pair<std::string, std::string>>& overrides) {
  for (const auto& [path, raw_value] : overrides) {
    nlohmann::json value;
    try {
      value = nlohmann::json::parse(raw_value);
    } catch (const nlohmann::json::exception&) {
      value = raw_value;  // unquoted strings pass through verbatim
    }
    nlohmann::json* node = &doc;
    size_t begin = 0;
    while (true) {
      size_t dot = path.find('.', begin);
      std::string key = path.substr(begin, dot - begin);
      if (key.empty()) {
        throw Error(ErrorCode::ConfigInvalid, "override has empty key segment: " + path);
      }
      if (dot == std::string::npos) {
        (*node)[key] = value;
        break;
      }
      node = &(*node)[key];
      if (!node->is_object() && !node->is_null()) {
        throw Error(ErrorCode::ConfigInvalid,
                    "override path crosses a non-object: " + path);
      }
      begin = dot + 1;
    }
  }
}

}  // namespace olion
