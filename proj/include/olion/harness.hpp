// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "olion/optim.hpp"
#include "olion/problems.hpp"

namespace olion {

struct BatchConfig {
  bool full = true;
  int size = 0;  // minibatch size when full == false
};

/// One training run: problem, optimizer, schedule, logging and persistence.
/// (config, seed) -> byte-identical outputs on one machine.
struct RunConfig {
  std::string problem_name = "quadratic";
  nlohmann::json problem_params = nlohmann::json::object();
  OptimizerKind optimizer = OptimizerKind::OLion;
  HyperParams hyperparams;
  LrSchedule schedule;
  int64_t steps = 1;
  BatchConfig batch;
  uint64_t seed = 0;
  int64_t diag_interval = 10;
  std::filesystem::path output_dir = "run_out";
  std::optional<int64_t> checkpoint_interval;
  PolarMode polar_mode = PolarMode::NewtonSchulz;
  double grad_clip = 0.0;  // 0 disables clipping

  static RunConfig from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;  // canonical echo, defaults materialized
  void validate() const;
};

struct RunSummary {
  std::string status;  // "ok" or "diverged"
  double final_loss = 0.0;
  double final_grad_norm = 0.0;
  int64_t start_step = 0;
  int64_t steps_run = 0;
  int64_t divergent_step = -1;
  std::optional<double> holdout_loss;
  std::optional<double> local_smoothness_estimate;
  std::vector<double> loss_curve;  // f(X_t) before the update at step t
  std::filesystem::path run_dir;
  std::filesystem::path loss_csv_path;
  std::filesystem::path diagnostics_csv_path;
  std::filesystem::path summary_path;
  std::vector<std::filesystem::path> checkpoint_paths;
  std::vector<ParamBlock> final_blocks;
};

/// Executes the run, writing config.json, loss.csv, diagnostics.csv,
/// summary.json and checkpoints under config.output_dir. Throws
/// NonFiniteLoss (after persisting the summary) when the loss or the
/// parameters leave the finite range.
RunSummary run(const RunConfig& config);

/// As `run` but reports divergence in the summary status instead of
/// throwing; used by the sweep so every cell completes.
RunSummary run_no_throw(const RunConfig& config);

/// Continues a checkpointed run for `remaining_steps` more steps.
/// Full-batch deterministic runs satisfy run(N) == run(k) + resume(N-k)
/// bit-exactly, including the final checkpoint bytes. When
/// `expected_problem` is given it is cross-checked against the checkpoint.
RunSummary resume(const std::filesystem::path& checkpoint_path, int64_t remaining_steps,
                  const std::optional<std::filesystem::path>& output_dir = std::nullopt,
                  const std::optional<std::string>& expected_problem = std::nullopt);

struct SweepConfig {
  RunConfig base;
  std::vector<double> lr_grid;
  int64_t metric_step = 0;
  std::vector<OptimizerKind> optimizers;  // defaults to {base.optimizer}
  nlohmann::json hyperparams_overrides = nlohmann::json::object();  // per optimizer name

  static SweepConfig from_json(const nlohmann::json& doc);
  void validate() const;
};

struct SweepCell {
  OptimizerKind optimizer;
  double lr = 0.0;
  double loss_at_metric_step = 0.0;  // +inf when unreached
  bool divergent = false;
  std::filesystem::path run_dir;
};

/// One run per (optimizer, lr) cell; divergent cells are kept in the table.
/// Writes sweep_table.csv under base.output_dir.
std::vector<SweepCell> lr_sweep(const SweepConfig& sweep);

struct BlockDistributions {
  std::string block;
  std::vector<double> singular_values;      // all of them, non-increasing
  std::vector<double> histogram_edges;      // 65 edges for 64 bins
  std::vector<int64_t> histogram_counts;    // sums to rows*cols
};

/// Singular-value list and 64-bin |entry| histogram per requested block
/// (every block when `block_names` is empty). CSVs go to output_dir.
std::vector<BlockDistributions> dump_distributions(
    const std::filesystem::path& checkpoint_path,
    const std::vector<std::string>& block_names,
    const std::filesystem::path& output_dir);

/// Applies `--key value` style overrides onto a config document, with
/// dotted paths for nesting (e.g. hyperparams.lr). Values parse as JSON
/// when possible, else as strings.
void apply_overrides(nlohmann::json& doc,
                     const std::vector<std::pair<std::string, std::string>>& overrides);

}  // namespace olion
