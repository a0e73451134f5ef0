// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: run / resume / sweep / dump-dist / theory-lab /
// verify. Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "olion/errors.hpp"
#include "olion/harness.hpp"
#include "olion/io.hpp"
#include "olion/theory_lab.hpp"
#include "olion/verify.hpp"

namespace {

using olion::Error;
using olion::ErrorCode;

/// Turns leftover `--key value` arguments into config overrides.
std::vector<std::pair<std::string, std::string>> parse_overrides(
    const std::vector<std::string>& extras) {
  std::vector<std::pair<std::string, std::string>> overrides;
  for (size_t i = 0; i < extras.size(); ++i) {
    const std::string& key = extras[i];
    if (key.rfind("--", 0) != 0 || key.size() <= 2) {
      throw Error(ErrorCode::ConfigInvalid, "expected --key, got '" + key + "'");
    }
    if (i + 1 >= extras.size()) {
      throw Error(ErrorCode::ConfigInvalid, "override " + key + " is missing a value");
    }
    overrides.emplace_back(key.substr(2), extras[++i]);
  }
  return overrides;
}

nlohmann::json load_config(const std::string& path,
                           const std::vector<std::string>& extras) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(olion::read_file_bytes(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid,
                "cannot parse " + path + ": " + e.what());
  }
  olion::apply_overrides(doc, parse_overrides(extras));
  return doc;
}

std::vector<std::string> split_csv_list(const std::string& arg) {
  std::vector<std::string> out;
  size_t begin = 0;
  while (begin <= arg.size()) {
    size_t comma = arg.find(',', begin);
    std::string item = arg.substr(begin, comma - begin);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return out;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"OLion matrix-optimizer toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "execute one training run");
  run_cmd->add_option("config", config_path, "run config JSON")->required();
  run_cmd->allow_extras();

  std::string ckpt_path;
  int64_t resume_steps = 0;
  std::string resume_output;
  std::string expect_problem;
  auto* resume_cmd = app.add_subcommand("resume", "continue from a checkpoint");
  resume_cmd->add_option("checkpoint", ckpt_path, "checkpoint file")->required();
  resume_cmd->add_option("--steps", resume_steps, "steps to run")->required();
  resume_cmd->add_option("--output", resume_output, "output directory");
  resume_cmd->add_option("--expect-problem", expect_problem,
                         "fail unless the checkpoint trains this problem");

  auto* sweep_cmd = app.add_subcommand("sweep", "learning-rate sweep");
  sweep_cmd->add_option("config", config_path, "sweep config JSON")->required();
  sweep_cmd->allow_extras();

  std::string blocks_arg;
  std::string dump_output = "distributions";
  auto* dump_cmd =
      app.add_subcommand("dump-dist", "singular-value and |entry| distributions");
  dump_cmd->add_option("checkpoint", ckpt_path, "checkpoint file")->required();
  dump_cmd->add_option("--blocks", blocks_arg, "comma-separated block names (default all)");
  dump_cmd->add_option("--output", dump_output, "output directory");

  auto* lab_cmd = app.add_subcommand("theory-lab", "isotropy Monte-Carlo study");
  lab_cmd->add_option("config", config_path, "grid config JSON")->required();
  lab_cmd->allow_extras();

  std::string scratch_dir = "verify_scratch";
  auto* verify_cmd = app.add_subcommand("verify", "run the full invariant suite");
  verify_cmd->add_option("--scratch", scratch_dir, "scratch directory");

  CLI11_PARSE(app, argc, argv);

  if (run_cmd->parsed()) {
    nlohmann::json doc = load_config(config_path, run_cmd->remaining());
    olion::RunSummary summary = olion::run(olion::RunConfig::from_json(doc));
    std::cout << "run complete: final loss " << olion::format_g17(summary.final_loss)
              << ", ||grad|| " << olion::format_g17(summary.final_grad_norm)
              << "\noutputs in " << summary.run_dir.string() << "\n";
    return 0;
  }

  if (resume_cmd->parsed()) {
    std::optional<std::filesystem::path> out_dir;
    if (!resume_output.empty()) out_dir = resume_output;
    std::optional<std::string> expected;
    if (!expect_problem.empty()) expected = expect_problem;
    olion::RunSummary summary = olion::resume(ckpt_path, resume_steps, out_dir, expected);
    std::cout << "resumed through step " << summary.start_step + summary.steps_run
              << ": final loss " << olion::format_g17(summary.final_loss)
              << "\noutputs in " << summary.run_dir.string() << "\n";
    return 0;
  }

  if (sweep_cmd->parsed()) {
    nlohmann::json doc = load_config(config_path, sweep_cmd->remaining());
    olion::SweepConfig sweep = olion::SweepConfig::from_json(doc);
    auto cells = olion::lr_sweep(sweep);
    std::cout << "optimizer,lr,loss_at_metric_step,status\n";
    for (const auto& cell : cells) {
      std::cout << olion::optimizer_kind_name(cell.optimizer) << ","
                << olion::format_g17(cell.lr) << ","
                << olion::format_g17(cell.loss_at_metric_step) << ","
                << (cell.divergent ? "divergent" : "ok") << "\n";
    }
    return 0;
  }

  if (dump_cmd->parsed()) {
    auto dists =
        olion::dump_distributions(ckpt_path, split_csv_list(blocks_arg), dump_output);
    for (const auto& d : dists) {
      std::cout << d.block << ": " << d.singular_values.size()
                << " singular values, sigma_max "
                << olion::format_g17(d.singular_values.front()) << "\n";
    }
    std::cout << "CSV files in " << dump_output << "\n";
    return 0;
  }

  if (lab_cmd->parsed()) {
    nlohmann::json doc = load_config(config_path, lab_cmd->remaining());
    olion::ScalingStudy study;
    if (!doc.contains("grid")) {
      throw Error(ErrorCode::ConfigInvalid, "theory-lab config needs a grid");
    }
    for (const auto& cell : doc.at("grid")) {
      if (!cell.is_array() || cell.size() != 3) {
        throw Error(ErrorCode::ConfigInvalid, "grid cells must be [d1, d2, r]");
      }
      study.grid.push_back({cell[0].get<int>(), cell[1].get<int>(), cell[2].get<int>()});
    }
    study.trials = doc.value("trials", 50);
    study.seed = doc.value("seed", uint64_t{1});
    std::filesystem::path out_dir = doc.value("output_dir", std::string("theory_lab"));
    olion::ensure_directory(out_dir);
    olion::run_scaling_study(study);
    olion::FitResult fit = olion::fit_scaling_law(study);
    olion::write_study_csv(study, out_dir / "samples.csv");
    olion::write_fit_json(study, fit, out_dir / "fit.json");
    std::cout << "slope " << olion::format_g17(fit.slope) << ", intercept "
              << olion::format_g17(fit.intercept) << ", r^2 "
              << olion::format_g17(fit.r_squared) << "\noutputs in "
              << out_dir.string() << "\n";
    return 0;
  }

  // verify
  auto results = olion::verify::run_all(scratch_dir, std::cout);
  return olion::verify::all_passed(results) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error [" << olion::error_code_name(e.code()) << "]: " << e.what()
              << "\n";
    return e.code() == ErrorCode::ConfigInvalid ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
