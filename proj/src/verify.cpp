// SPDX-License-Identifier: Apache-2.0
#include "olion/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <ostream>
#include <sstream>

#include "olion/checkpoint.hpp"
#include "olion/diagnostics.hpp"
#include "olion/geometry.hpp"
#include "olion/harness.hpp"
#include "olion/io.hpp"
#include "olion/linalg.hpp"
#include "olion/optim.hpp"
#include "olion/problems.hpp"
#include "olion/rng.hpp"
#include "olion/theory_lab.hpp"

namespace olion::verify {

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& message) {
    if (!condition) {
      ok = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << message;
    }
  }

  void note(const std::string& message) {
    if (detail.tellp() > 0) detail << "; ";
    detail << message;
  }
};

/// Nuclear norm through the Gram spectrum, independent of the SVD route.
double nuclear_via_gram(const Matrix& m) {
  Eigen::MatrixXd em(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) em(i, j) = m(i, j);
  Eigen::MatrixXd gram = em.transpose() * em;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  double total = 0.0;
  for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
    total += std::sqrt(std::max(0.0, eig.eigenvalues()(k)));
  }
  return total;
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

bool bytes_equal(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) return false;
  return std::memcmp(a.data().data(), b.data().data(),
                     a.data().size() * sizeof(double)) == 0;
}

// --------------------------------------------------------------------------

void check_polar_oracle(Check& check) {
  const int shapes[][2] = {{8, 5},   {16, 8},  {32, 16}, {48, 24},
                           {64, 32}, {12, 12}, {20, 7},  {40, 10}};
  double worst_ortho = 0.0;
  double worst_score = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto& shape = shapes[i % 8];
    Matrix m = gaussian_matrix(shape[0], shape[1], 9000 + i);
    Matrix polar = polar_factor_exact(m);
    Matrix gram = matmul(transpose(polar), polar);
    double ortho = frobenius_norm(gram - Matrix::identity(shape[1]));
    worst_ortho = std::max(worst_ortho, ortho);

    double nuclear = nuclear_via_gram(m);
    double score = frobenius_inner(polar, m);
    worst_score = std::max(worst_score, std::abs(score - nuclear) / nuclear);
  }
  check.require(worst_ortho < 1e-10,
                "orthonormality defect " + format_g17(worst_ortho));
  check.require(worst_score < 1e-8,
                "polar score vs nuclear norm off by " + format_g17(worst_score));
  check.note("max ortho defect " + format_g17(worst_ortho) + ", max score err " +
             format_g17(worst_score));
}

void check_newton_schulz_fidelity(Check& check) {
  const int d1 = 64, d2 = 32;
  const double entry_floor = 0.05 / std::sqrt(static_cast<double>(d1));
  double sigma_lo = 1e9, sigma_hi = 0.0;
  long agreements = 0, comparisons = 0;
  for (int seed = 0; seed < 50; ++seed) {
    Matrix m = gaussian_matrix(d1, d2, 4200 + seed);
    Matrix approx = newton_schulz(m, 5);
    for (double s : singular_values(approx)) {
      sigma_lo = std::min(sigma_lo, s);
      sigma_hi = std::max(sigma_hi, s);
    }
    Matrix exact = polar_factor_exact(m);
    for (int i = 0; i < d1; ++i) {
      for (int j = 0; j < d2; ++j) {
        if (std::abs(exact(i, j)) <= entry_floor) continue;
        ++comparisons;
        double a = exact(i, j), b = approx(i, j);
        if ((a > 0 && b > 0) || (a < 0 && b < 0)) ++agreements;
      }
    }
  }
  double agreement = static_cast<double>(agreements) / comparisons;
  check.require(sigma_lo >= 0.6 && sigma_hi <= 1.4,
                "singular band [" + format_g17(sigma_lo) + ", " +
                    format_g17(sigma_hi) + "] outside [0.6, 1.4]");
  check.require(agreement > 0.99,
                "sign agreement " + format_g17(agreement) + " <= 0.99");
  check.note("sigma in [" + format_g17(sigma_lo) + ", " + format_g17(sigma_hi) +
             "], sign agreement " + format_g17(agreement));
}

void check_trace_identity(Check& check) {
  double worst = 0.0;
  Rng shape_rng(77);
  for (int i = 0; i < 1000; ++i) {
    int rows = 2 + static_cast<int>(shape_rng.below(30));
    int cols = 2 + static_cast<int>(shape_rng.below(30));
    Matrix q = gaussian_matrix(rows, cols, 30000 + i);
    double inner = frobenius_inner(q, sign_map(q));
    double l1 = entrywise_l1_norm(q);
    worst = std::max(worst, std::abs(inner - l1) / l1);
  }
  check.require(worst < 1e-12, "trace identity relative error " + format_g17(worst));
  check.note("max relative error " + format_g17(worst));
}

void check_cancellation_audit(Check& check) {
  const int shapes[][2] = {{64, 32}, {96, 48}, {128, 64}, {192, 96}, {256, 128}};
  double worst_identity = 0.0;
  double worst_gap = 0.0;
  std::vector<double> ratios;
  ratios.reserve(500);
  for (int i = 0; i < 500; ++i) {
    const auto& shape = shapes[i % 5];
    Matrix z = gaussian_matrix(shape[0], shape[1], 52000 + i);
    CancellationAudit audit = cancellation_audit(z);
    double identity_rel = audit.identity_residual / (std::abs(audit.lhs) + 1e-12);
    worst_identity = std::max(worst_identity, identity_rel);
    worst_gap = std::max(worst_gap, audit.lhs - audit.rhs);
    ratios.push_back(audit.rhs / audit.cs_rhs);
  }
  double median_ratio = median_of(ratios);
  check.require(worst_identity < 1e-8,
                "identity residual relative " + format_g17(worst_identity));
  check.require(worst_gap <= 1e-8, "lhs exceeds rhs by " + format_g17(worst_gap));
  check.require(median_ratio < 0.1,
                "median rhs/cs_rhs " + format_g17(median_ratio) + " >= 0.1");
  check.note("median tightening ratio " + format_g17(median_ratio));
}

void check_epsilon_scaling(Check& check) {
  ScalingStudy study;
  study.grid = {{64, 64, 8}, {128, 128, 8}, {256, 256, 8}, {512, 512, 8}};
  study.trials = 50;
  study.seed = 20260810;
  run_scaling_study(study);
  FitResult fit = fit_scaling_law(study);
  double eps_small = study.per_cell.front().mean_eps;
  double eps_large = study.per_cell.back().mean_eps;
  check.require(fit.slope >= 0.7 && fit.slope <= 1.3,
                "slope " + format_g17(fit.slope) + " outside [0.7, 1.3]");
  check.require(fit.r_squared > 0.9, "r^2 " + format_g17(fit.r_squared) + " <= 0.9");
  check.require(eps_large < eps_small,
                "mean eps did not shrink with dimension (" + format_g17(eps_small) +
                    " -> " + format_g17(eps_large) + ")");
  check.note("slope " + format_g17(fit.slope) + ", r^2 " + format_g17(fit.r_squared) +
             ", mean eps " + format_g17(eps_small) + " -> " + format_g17(eps_large));
}

void check_descent_certification(Check& check) {
  Matrix target = gaussian_matrix(32, 16, 616);
  auto problem = make_quadratic(target);
  std::vector<ParamBlock> blocks = problem->initial_blocks();
  OptimizerState state = OptimizerState::zeros_like(blocks[0], false);

  HyperParams hp;
  hp.lr = 0.05;
  hp.beta1 = 0.0;
  hp.beta2 = 0.0;
  hp.weight_decay = 0.0;
  const double smoothness = 1.0;
  const double eta = 0.05;
  const int steps = 500;
  const double d1d2 = 32.0 * 16.0;

  double worst_residual = -1e300;
  double sum_eta_phi = 0.0;
  double sum_eta_sq = 0.0;
  double f0 = problem->loss(blocks);
  for (int t = 0; t < steps; ++t) {
    double f_before = problem->loss(blocks);
    Matrix grad = problem->grad(blocks)[0];
    StepArtifacts art =
        olion_step(blocks[0], grad, state, hp, eta, PolarMode::Exact);
    double f_after = problem->loss(blocks);

    StationarityPhi phi = stationarity_phi(art.g_tilde);
    double eta_eff = eta * art.gamma;
    double residual = descent_audit(f_before, f_after, eta_eff, phi.phi, smoothness,
                                    blocks[0].matrix.rows(), blocks[0].matrix.cols());
    worst_residual = std::max(worst_residual, residual);
    sum_eta_phi += eta_eff * phi.phi;
    sum_eta_sq += eta_eff * eta_eff;
  }
  double f_lower_bound = problem->lower_bound();
  double summed_rhs = f0 - f_lower_bound + 0.5 * smoothness * d1d2 * sum_eta_sq;
  check.require(worst_residual <= 1e-9,
                "per-step residual up to " + format_g17(worst_residual));
  check.require(sum_eta_phi <= summed_rhs,
                "summed bound violated: " + format_g17(sum_eta_phi) + " > " +
                    format_g17(summed_rhs));
  check.note("max residual " + format_g17(worst_residual) + ", summed lhs/rhs " +
             format_g17(sum_eta_phi) + "/" + format_g17(summed_rhs));
}

RunConfig convergence_base(const std::filesystem::path& dir) {
  RunConfig config;
  config.steps = 2000;
  config.seed = 7;
  config.diag_interval = 500;
  config.schedule.kind = ScheduleKind::WarmupCosine;
  config.schedule.warmup_steps = 100;
  config.schedule.total_steps = 2000;
  config.output_dir = dir;
  return config;
}

void check_convergence(Check& check, const std::filesystem::path& scratch) {
  {
    RunConfig config = convergence_base(scratch / "c7_quadratic");
    config.problem_name = "quadratic";
    config.problem_params = {{"rows", 16}, {"cols", 8}};
    config.optimizer = OptimizerKind::OLion;
    config.hyperparams = default_hyperparams(OptimizerKind::OLion);
    config.hyperparams.weight_decay = 0.0;
    config.hyperparams.lr = 0.05;
    config.schedule.lr_max = 0.05;
    config.schedule.lr_min = 1e-4;
    RunSummary summary = run(config);
    check.require(summary.final_grad_norm < 1e-2,
                  "quadratic grad norm " + format_g17(summary.final_grad_norm));
    check.note("quadratic final ||grad|| " + format_g17(summary.final_grad_norm));
  }

  const double target = 0.1 * std::log(4.0);
  const OptimizerKind opts[] = {OptimizerKind::AdamW, OptimizerKind::Lion,
                                OptimizerKind::Muon, OptimizerKind::OLion};
  const double lrs[] = {0.05, 0.05, 0.05, 0.05};
  for (int i = 0; i < 4; ++i) {
    RunConfig config = convergence_base(
        scratch / (std::string("c7_softmax_") + optimizer_kind_name(opts[i])));
    config.problem_name = "softmax_classifier";
    config.problem_params = {{"n_features", 16}, {"n_classes", 4}, {"n_samples", 256}};
    config.optimizer = opts[i];
    config.hyperparams = default_hyperparams(opts[i]);
    config.hyperparams.weight_decay = 0.0;
    config.hyperparams.lr = lrs[i];
    config.schedule.lr_max = lrs[i];
    config.schedule.lr_min = lrs[i] * 1e-2;
    RunSummary summary = run(config);
    check.require(summary.final_loss < target,
                  std::string(optimizer_kind_name(opts[i])) + " loss " +
                      format_g17(summary.final_loss) + " >= " + format_g17(target));
    check.note(std::string(optimizer_kind_name(opts[i])) + " " +
               format_g17(summary.final_loss));
  }
}

/// Trains until the loss crosses `target`, returning the blocks at the
/// crossing step (or nullopt when never reached within max_steps).
std::optional<std::vector<ParamBlock>> train_to_loss(
    Problem& problem, OptimizerKind kind, const HyperParams& hp, double eta,
    double target, int max_steps) {
  std::vector<ParamBlock> blocks = problem.initial_blocks();
  std::vector<OptimizerState> states;
  for (const ParamBlock& b : blocks) {
    states.push_back(OptimizerState::zeros_like(b, needs_second_moment(kind, b.kind)));
  }
  for (int t = 0; t < max_steps; ++t) {
    if (problem.loss(blocks) <= target) return blocks;
    std::vector<Matrix> grads = problem.grad(blocks);
    for (size_t b = 0; b < blocks.size(); ++b) {
      apply_step(kind, blocks[b], grads[b], states[b], hp, eta,
                 PolarMode::NewtonSchulz);
    }
  }
  if (problem.loss(blocks) <= target) return blocks;
  return std::nullopt;
}

void check_implicit_bias(Check& check) {
  // Small init and a tight matched loss make the runs long enough (a few
  // hundred steps) for the update geometry, balanced against weight decay,
  // to shape the final weights rather than the shared initialization.
  const std::vector<int> widths = {8, 32, 16, 32, 4};
  const int n_blocks = 4;
  const uint64_t data_seeds[] = {101, 102, 103};
  const double matched_loss = 0.005;
  const double eta = 0.01;
  const int max_steps = 8000;

  double linf_olion[4] = {0, 0, 0, 0}, linf_muon[4] = {0, 0, 0, 0};
  double spec_olion[4] = {0, 0, 0, 0}, spec_lion[4] = {0, 0, 0, 0};

  for (uint64_t seed : data_seeds) {
    auto problem = make_tiny_mlp(widths, "tanh", 256, seed, 0.0, false, 0.2);
    const OptimizerKind kinds[] = {OptimizerKind::OLion, OptimizerKind::Muon,
                                   OptimizerKind::Lion};
    for (OptimizerKind kind : kinds) {
      HyperParams hp = default_hyperparams(kind);
      hp.weight_decay = 0.1;
      auto trained = train_to_loss(*problem, kind, hp, eta, matched_loss, max_steps);
      if (!trained) {
        check.require(false, std::string(optimizer_kind_name(kind)) +
                                 " never reached matched loss (seed " +
                                 std::to_string(seed) + ")");
        return;
      }
      for (int b = 0; b < n_blocks; ++b) {
        NormSuite norms = norm_suite((*trained)[b].matrix);
        if (kind == OptimizerKind::OLion) {
          linf_olion[b] += norms.linf;
          spec_olion[b] += norms.spectral;
        } else if (kind == OptimizerKind::Muon) {
          linf_muon[b] += norms.linf;
        } else {
          spec_lion[b] += norms.spectral;
        }
      }
    }
  }

  int linf_wins = 0, spec_wins = 0;
  std::ostringstream blocks_note;
  for (int b = 0; b < n_blocks; ++b) {
    if (linf_olion[b] <= linf_muon[b]) ++linf_wins;
    if (spec_olion[b] <= spec_lion[b]) ++spec_wins;
    blocks_note << (b ? " " : "") << "W" << b << "[linf " << format_g17(linf_olion[b] / 3)
                << " vs " << format_g17(linf_muon[b] / 3) << ", spec "
                << format_g17(spec_olion[b] / 3) << " vs " << format_g17(spec_lion[b] / 3)
                << "]";
  }
  check.require(linf_wins >= 3, "OLion linf <= Muon on only " +
                                    std::to_string(linf_wins) + "/4 blocks");
  check.require(spec_wins >= 3, "OLion spectral <= Lion on only " +
                                    std::to_string(spec_wins) + "/4 blocks");
  check.note("linf wins " + std::to_string(linf_wins) + "/4, spectral wins " +
             std::to_string(spec_wins) + "/4; " + blocks_note.str());
}

void check_reductions(Check& check) {
  Matrix target = gaussian_matrix(16, 8, 99);
  const int steps = 100;

  {  // ns_steps = 0 reduces OLion's sign pattern to Lion's.
    auto problem = make_quadratic(target);
    HyperParams hp = default_hyperparams(OptimizerKind::OLion);
    hp.ns_steps = 0;
    hp.weight_decay = 0.01;
    auto blocks_a = problem->initial_blocks();
    auto blocks_b = problem->initial_blocks();
    OptimizerState state_a = OptimizerState::zeros_like(blocks_a[0], false);
    OptimizerState state_b = OptimizerState::zeros_like(blocks_b[0], false);
    for (int t = 0; t < steps; ++t) {
      Matrix grad_a = problem->grad(blocks_a)[0];
      Matrix grad_b = problem->grad(blocks_b)[0];
      StepArtifacts art_a = olion_step(blocks_a[0], grad_a, state_a, hp, 0.01,
                                       PolarMode::NewtonSchulz);
      StepArtifacts art_b = lion_step(blocks_b[0], grad_b, state_b, hp, 0.01);
      if (!bytes_equal(art_a.sign, art_b.sign)) {
        check.require(false, "sign patterns diverged at step " + std::to_string(t));
        return;
      }
    }
    check.note("ns_steps=0 sign patterns identical over 100 steps");
  }

  {  // Positive scaling of the whole gradient history leaves S and D intact.
    auto problem = make_quadratic(target);
    const double scale = 3.0;
    HyperParams hp = default_hyperparams(OptimizerKind::OLion);
    hp.weight_decay = 0.0;
    auto blocks_a = problem->initial_blocks();
    auto blocks_b = problem->initial_blocks();
    OptimizerState state_a = OptimizerState::zeros_like(blocks_a[0], false);
    OptimizerState state_b = OptimizerState::zeros_like(blocks_b[0], false);
    for (int t = 0; t < steps; ++t) {
      Matrix grad_a = problem->grad(blocks_a)[0];
      Matrix grad_b = problem->grad(blocks_b)[0];
      grad_b *= scale;
      StepArtifacts art_a = olion_step(blocks_a[0], grad_a, state_a, hp, 0.01,
                                       PolarMode::NewtonSchulz);
      StepArtifacts art_b = olion_step(blocks_b[0], grad_b, state_b, hp, 0.01,
                                       PolarMode::NewtonSchulz);
      if (!bytes_equal(art_a.sign, art_b.sign) ||
          !bytes_equal(art_a.direction, art_b.direction) ||
          !bytes_equal(blocks_a[0].matrix, blocks_b[0].matrix)) {
        check.require(false, "scaled history diverged at step " + std::to_string(t));
        return;
      }
    }
    check.note("3x-scaled history: S, D and X bit-identical over 100 steps");
  }
}

void check_persistence(Check& check, const std::filesystem::path& scratch) {
  RunConfig config;
  config.problem_name = "quadratic";
  config.problem_params = {{"rows", 12}, {"cols", 6}};
  config.optimizer = OptimizerKind::OLion;
  config.hyperparams = default_hyperparams(OptimizerKind::OLion);
  config.hyperparams.lr = 0.02;
  config.schedule.kind = ScheduleKind::WarmupCosine;
  config.schedule.warmup_steps = 2;
  config.schedule.total_steps = 10;
  config.schedule.lr_max = 0.02;
  config.schedule.lr_min = 1e-3;
  config.steps = 10;
  config.seed = 42;
  config.diag_interval = 1;

  config.output_dir = scratch / "c10_run_a";
  run(config);
  config.output_dir = scratch / "c10_run_b";
  run(config);
  check.require(read_file_bytes(scratch / "c10_run_a" / "loss.csv") ==
                    read_file_bytes(scratch / "c10_run_b" / "loss.csv"),
                "repeated runs produced different loss CSVs");

  RunConfig half = config;
  half.steps = 5;
  half.output_dir = scratch / "c10_run_half";
  run(half);
  resume(scratch / "c10_run_half" / "final.ckpt", 5, scratch / "c10_run_resumed");
  check.require(read_file_bytes(scratch / "c10_run_a" / "final.ckpt") ==
                    read_file_bytes(scratch / "c10_run_resumed" / "final.ckpt"),
                "run(10) and run(5)+resume(5) final checkpoints differ");

  std::string tail;
  {
    std::string full_csv = read_file_bytes(scratch / "c10_run_a" / "loss.csv");
    size_t pos = 0;
    for (int newlines = 0; newlines < 6 && pos != std::string::npos; ++newlines) {
      pos = full_csv.find('\n', pos) + 1;
    }
    tail = full_csv.substr(pos);
  }
  std::string resumed_csv = read_file_bytes(scratch / "c10_run_resumed" / "loss.csv");
  check.require(resumed_csv.substr(resumed_csv.find('\n') + 1) == tail,
                "resumed loss rows differ from the unbroken run");

  Checkpoint loaded = load_checkpoint(scratch / "c10_run_a" / "final.ckpt");
  save_checkpoint(loaded, scratch / "c10_roundtrip.ckpt");
  check.require(read_file_bytes(scratch / "c10_run_a" / "final.ckpt") ==
                    read_file_bytes(scratch / "c10_roundtrip.ckpt"),
                "save -> load -> save changed checkpoint bytes");
  check.note("loss CSVs, split-run checkpoints and round-trip all byte-identical");
}

void check_gradient_oracles(Check& check) {
  {
    Matrix target = gaussian_matrix(10, 6, 31);
    auto problem = make_quadratic(target);
    auto blocks = problem->initial_blocks();
    // Probe where every gradient entry is bounded away from zero, keeping
    // the relative error clear of FD cancellation noise.
    Rng rng(55);
    blocks[0].matrix = target;
    for (double& v : blocks[0].matrix.data()) {
      double noise = rng.normal();
      v += (noise >= 0 ? 1.0 : -1.0) * (0.5 + std::abs(noise));
    }
    double err = finite_difference_check(*problem, blocks);
    check.require(err < 1e-7, "quadratic FD error " + format_g17(err));
    check.note("quadratic " + format_g17(err));
  }
  {
    auto problem = make_softmax_classifier(8, 3, 96, 12345);
    auto blocks = problem->initial_blocks();
    Rng rng(56);
    for (double& v : blocks[0].matrix.data()) v = 0.3 * rng.normal();
    double err = finite_difference_check(*problem, blocks);
    check.require(err < 1e-5, "softmax FD error " + format_g17(err));
    check.note("softmax " + format_g17(err));
  }
  {
    auto problem = make_tiny_mlp({6, 12, 8, 12, 3}, "tanh", 48, 777);
    auto blocks = problem->initial_blocks();
    double err = finite_difference_check(*problem, blocks);
    check.require(err < 1e-4, "MLP FD error " + format_g17(err));
    check.note("mlp " + format_g17(err));
  }
}

}  // namespace

std::vector<CriterionResult> run_all(const std::filesystem::path& scratch_dir,
                                     std::ostream& out) {
  ensure_directory(scratch_dir);

  struct Entry {
    int number;
    const char* name;
    std::function<void(Check&)> body;
  };
  const Entry entries[] = {
      {1, "polar factor oracle", [](Check& c) { check_polar_oracle(c); }},
      {2, "Newton-Schulz fidelity", [](Check& c) { check_newton_schulz_fidelity(c); }},
      {3, "trace identity", [](Check& c) { check_trace_identity(c); }},
      {4, "cancellation-aware bound audit", [](Check& c) { check_cancellation_audit(c); }},
      {5, "isotropy scaling law", [](Check& c) { check_epsilon_scaling(c); }},
      {6, "descent certification", [](Check& c) { check_descent_certification(c); }},
      {7, "desk-scale convergence",
       [&](Check& c) { check_convergence(c, scratch_dir); }},
      {8, "implicit-bias ordering", [](Check& c) { check_implicit_bias(c); }},
      {9, "reduction checks", [](Check& c) { check_reductions(c); }},
      {10, "reproducibility and persistence",
       [&](Check& c) { check_persistence(c, scratch_dir); }},
      {11, "gradient oracles", [](Check& c) { check_gradient_oracles(c); }},
  };

  std::vector<CriterionResult> results;
  for (const Entry& entry : entries) {
    Check check;
    auto start = std::chrono::steady_clock::now();
    try {
      entry.body(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("exception: ") + e.what());
    }
    auto stop = std::chrono::steady_clock::now();

    CriterionResult result;
    result.number = entry.number;
    result.name = entry.name;
    result.passed = check.ok;
    result.detail = check.detail.str();
    result.seconds = std::chrono::duration<double>(stop - start).count();
    results.push_back(result);

    char line[32];
    std::snprintf(line, sizeof(line), " (%.2fs)", result.seconds);
    out << (result.passed ? "[PASS]" : "[FAIL]") << " criterion " << result.number
        << ": " << result.name << line
        << (result.detail.empty() ? "" : " -- " + result.detail) << "\n";
    out.flush();
  }
  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const CriterionResult& r : results) {
    if (!r.passed) return false;
  }
  return !results.empty();
}

}  // namespace olion::verify
