// SPDX-License-Identifier: Apache-2.0
#include "olion/optim.hpp"

#include <cmath>
#include <numbers>

#include "olion/errors.hpp"
#include "olion/linalg.hpp"

namespace olion {

namespace {

void check_step_preconditions(const ParamBlock& block, const Matrix& grad) {
  require_same_shape(block.matrix, grad, "optimizer step");
}

/// X <- (1 - lambda*eta) * X - eta * D, weight decay on the pre-update X.
void apply_update(Matrix& x, const Matrix& direction, double eta, double weight_decay) {
  double keep = 1.0 - weight_decay * eta;
  auto xs = x.data();
  if (direction.empty()) {
    for (double& v : xs) v *= keep;
    return;
  }
  auto ds = direction.data();
  for (size_t i = 0; i < xs.size(); ++i) {
    xs[i] = xs[i] * keep - eta * ds[i];
  }
}

/// Momentum and Nesterov mix shared by the Lion family:
///   M <- beta2 * M + (1 - beta2) * g
///   G-tilde = (1 - beta1) * g + beta1 * M
Matrix momentum_mix(const Matrix& grad, OptimizerState& state, const HyperParams& hp) {
  if (state.momentum.empty()) {
    state.momentum = Matrix(grad.rows(), grad.cols());
  }
  require_same_shape(state.momentum, grad, "momentum buffer");
  auto ms = state.momentum.data();
  auto gs = grad.data();
  for (size_t i = 0; i < ms.size(); ++i) {
    ms[i] = hp.beta2 * ms[i] + (1.0 - hp.beta2) * gs[i];
  }
  Matrix mixed(grad.rows(), grad.cols());
  auto out = mixed.data();
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = (1.0 - hp.beta1) * gs[i] + hp.beta1 * ms[i];
  }
  return mixed;
}

/// gamma = rms_target * sqrt(d1*d2) / ||A||_F, matching the update RMS to
/// the target. Returns 0 for an all-zero A.
double rms_alignment(const Matrix& a, double rms_target) {
  double norm = frobenius_norm(a);
  if (norm < kZeroFloor) return 0.0;
  double entries = static_cast<double>(a.size());
  return rms_target * std::sqrt(entries) / norm;
}

}  // namespace

OptimizerKind optimizer_kind_from_name(const std::string& name) {
  if (name == "olion") return OptimizerKind::OLion;
  if (name == "lion") return OptimizerKind::Lion;
  if (name == "muon") return OptimizerKind::Muon;
  if (name == "adamw") return OptimizerKind::AdamW;
  if (name == "signsgd") return OptimizerKind::SignSgd;
  throw Error(ErrorCode::ConfigInvalid, "unknown optimizer: " + name);
}

const char* optimizer_kind_name(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::OLion: return "olion";
    case OptimizerKind::Lion: return "lion";
    case OptimizerKind::Muon: return "muon";
    case OptimizerKind::AdamW: return "adamw";
    case OptimizerKind::SignSgd: return "signsgd";
  }
  return "?";
}

void HyperParams::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::ConfigInvalid, "hyperparams: " + what);
  };
  if (!(lr > 0.0)) fail("lr must be positive");
  if (beta1 < 0.0 || beta1 >= 1.0) fail("beta1 must be in [0, 1)");
  if (beta2 < 0.0 || beta2 >= 1.0) fail("beta2 must be in [0, 1)");
  if (weight_decay < 0.0) fail("weight_decay must be non-negative");
  if (ns_steps < 0) fail("ns_steps must be non-negative");
  if (!(rms_target > 0.0)) fail("rms_target must be positive");
  if (!(adam_eps > 0.0)) fail("adam_eps must be positive");
}

HyperParams default_hyperparams(OptimizerKind kind) {
  HyperParams hp;
  switch (kind) {
    case OptimizerKind::OLion:
      hp.beta1 = 0.95;
      hp.beta2 = 0.98;
      break;
    case OptimizerKind::Lion:
      hp.beta1 = 0.9;
      hp.beta2 = 0.99;
      break;
    case OptimizerKind::Muon:
      hp.beta1 = 0.95;
      hp.beta2 = 0.95;
      break;
    case OptimizerKind::AdamW:
      hp.beta1 = 0.9;
      hp.beta2 = 0.95;
      break;
    case OptimizerKind::SignSgd:
      hp.beta1 = 0.0;
      hp.beta2 = 0.0;
      break;
  }
  return hp;
}

OptimizerState OptimizerState::zeros_like(const ParamBlock& block, bool with_second_moment) {
  OptimizerState state;
  state.momentum = Matrix(block.matrix.rows(), block.matrix.cols());
  if (with_second_moment) {
    state.second_moment = Matrix(block.matrix.rows(), block.matrix.cols());
  }
  return state;
}

void LrSchedule::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::ConfigInvalid, "schedule: " + what);
  };
  if (total_steps < 1) fail("total_steps must be >= 1");
  if (warmup_steps < 0 || warmup_steps > total_steps) {
    fail("warmup_steps must be in [0, total_steps]");
  }
  if (!(lr_max > 0.0)) fail("lr_max must be positive");
  if (lr_min < 0.0 || lr_min > lr_max) fail("lr_min must be in [0, lr_max]");
}

double schedule_lr(const LrSchedule& schedule, int64_t t) {
  if (t < 0 || t >= schedule.total_steps) {
    throw Error(ErrorCode::OutOfRange,
                "schedule_lr: step " + std::to_string(t) + " outside [0, " +
                    std::to_string(schedule.total_steps) + ")");
  }
  if (t < schedule.warmup_steps) {
    return schedule.lr_max * static_cast<double>(t + 1) /
           static_cast<double>(schedule.warmup_steps);
  }
  if (schedule.kind == ScheduleKind::Constant) {
    return schedule.lr_max;
  }
  int64_t decay_span = schedule.total_steps - 1 - schedule.warmup_steps;
  double progress = decay_span > 0
                        ? static_cast<double>(t - schedule.warmup_steps) /
                              static_cast<double>(decay_span)
                        : 0.0;
  if (schedule.kind == ScheduleKind::WarmupLinear) {
    return schedule.lr_max + (schedule.lr_min - schedule.lr_max) * progress;
  }
  double cosine = 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
  return schedule.lr_min + (schedule.lr_max - schedule.lr_min) * cosine;
}

StepArtifacts olion_step(ParamBlock& block, const Matrix& grad, OptimizerState& state,
                         const HyperParams& hp, double eta, PolarMode mode) {
  check_step_preconditions(block, grad);
  StepArtifacts art;
  art.g_tilde = momentum_mix(grad, state, hp);
  state.step_count += 1;

  if (max_abs_entry(art.g_tilde) < kZeroFloor) {
    art.zero_signal = true;
    apply_update(block.matrix, Matrix(), eta, hp.weight_decay);
    return art;
  }

  art.ortho = project_A(art.g_tilde, mode, hp.ns_steps);
  art.sign = sign_map(art.ortho);
  art.gamma = rms_alignment(art.sign, hp.rms_target);
  art.direction = art.sign;
  art.direction *= art.gamma;
  apply_update(block.matrix, art.direction, eta, hp.weight_decay);
  return art;
}

StepArtifacts lion_step(ParamBlock& block, const Matrix& grad, OptimizerState& state,
                        const HyperParams& hp, double eta) {
  check_step_preconditions(block, grad);
  StepArtifacts art;
  art.g_tilde = momentum_mix(grad, state, hp);
  state.step_count += 1;

  if (max_abs_entry(art.g_tilde) < kZeroFloor) {
    art.zero_signal = true;
    apply_update(block.matrix, Matrix(), eta, hp.weight_decay);
    return art;
  }

  art.sign = sign_map(art.g_tilde);
  art.gamma = rms_alignment(art.sign, hp.rms_target);
  art.direction = art.sign;
  art.direction *= art.gamma;
  apply_update(block.matrix, art.direction, eta, hp.weight_decay);
  return art;
}

StepArtifacts muon_step(ParamBlock& block, const Matrix& grad, OptimizerState& state,
                        const HyperParams& hp, double eta, PolarMode mode) {
  check_step_preconditions(block, grad);
  StepArtifacts art;
  art.g_tilde = momentum_mix(grad, state, hp);
  state.step_count += 1;

  if (max_abs_entry(art.g_tilde) < kZeroFloor) {
    art.zero_signal = true;
    apply_update(block.matrix, Matrix(), eta, hp.weight_decay);
    return art;
  }

  art.ortho = project_A(art.g_tilde, mode, hp.ns_steps);
  art.gamma = rms_alignment(art.ortho, hp.rms_target);
  art.direction = art.ortho;
  art.direction *= art.gamma;
  apply_update(block.matrix, art.direction, eta, hp.weight_decay);
  return art;
}

StepArtifacts adamw_step(ParamBlock& block, const Matrix& grad, OptimizerState& state,
                         const HyperParams& hp, double eta) {
  check_step_preconditions(block, grad);
  if (state.momentum.empty()) {
    state.momentum = Matrix(grad.rows(), grad.cols());
  }
  if (state.second_moment.empty()) {
    state.second_moment = Matrix(grad.rows(), grad.cols());
  }
  require_same_shape(state.momentum, grad, "momentum buffer");
  require_same_shape(state.second_moment, grad, "second-moment buffer");
  state.step_count += 1;

  auto ms = state.momentum.data();
  auto vs = state.second_moment.data();
  auto gs = grad.data();
  for (size_t i = 0; i < ms.size(); ++i) {
    ms[i] = hp.beta1 * ms[i] + (1.0 - hp.beta1) * gs[i];
    vs[i] = hp.beta2 * vs[i] + (1.0 - hp.beta2) * gs[i] * gs[i];
  }

  double t = static_cast<double>(state.step_count);
  double correct1 = 1.0 - std::pow(hp.beta1, t);
  double correct2 = 1.0 - std::pow(hp.beta2, t);

  StepArtifacts art;
  art.direction = Matrix(grad.rows(), grad.cols());
  art.g_tilde = Matrix(grad.rows(), grad.cols());
  auto ds = art.direction.data();
  auto gt = art.g_tilde.data();
  for (size_t i = 0; i < ds.size(); ++i) {
    double m_hat = ms[i] / correct1;
    double v_hat = vs[i] / correct2;
    gt[i] = m_hat;
    ds[i] = m_hat / (std::sqrt(v_hat) + hp.adam_eps);
  }
  apply_update(block.matrix, art.direction, eta, hp.weight_decay);
  return art;
}

StepArtifacts signsgd_step(ParamBlock& block, const Matrix& grad, OptimizerState& state,
                           const HyperParams& hp, double eta) {
  check_step_preconditions(block, grad);
  state.step_count += 1;

  StepArtifacts art;
  art.g_tilde = grad;
  art.sign = sign_map(grad);
  art.direction = art.sign;
  art.gamma = 1.0;
  apply_update(block.matrix, art.direction, eta, hp.weight_decay);
  return art;
}

StepArtifacts fallback_step_1d(ParamBlock& block, const Matrix& grad, OptimizerState& state,
                               const HyperParams& hp, double eta) {
  if (block.kind != BlockKind::Fallback1d) {
    throw Error(ErrorCode::ShapeMismatch, "fallback_step_1d: block is not 1-D");
  }
  if (block.matrix.rows() != 1 && block.matrix.cols() != 1) {
    throw Error(ErrorCode::ShapeMismatch,
                "fallback_step_1d: block " + block.name + " is not a vector");
  }
  return adamw_step(block, grad, state, hp, eta);
}

StepArtifacts apply_step(OptimizerKind kind, ParamBlock& block, const Matrix& grad,
                         OptimizerState& state, const HyperParams& hp, double eta,
                         PolarMode mode) {
  if (block.kind == BlockKind::Fallback1d) {
    return fallback_step_1d(block, grad, state, hp, eta);
  }
  switch (kind) {
    case OptimizerKind::OLion: return olion_step(block, grad, state, hp, eta, mode);
    case OptimizerKind::Lion: return lion_step(block, grad, state, hp, eta);
    case OptimizerKind::Muon: return muon_step(block, grad, state, hp, eta, mode);
    case OptimizerKind::AdamW: return adamw_step(block, grad, state, hp, eta);
    case OptimizerKind::SignSgd: return signsgd_step(block, grad, state, hp, eta);
  }
  throw Error(ErrorCode::ConfigInvalid, "apply_step: bad optimizer kind");
}

bool needs_second_moment(OptimizerKind kind, BlockKind block_kind) {
  return kind == OptimizerKind::AdamW || block_kind == BlockKind::Fallback1d;
}

}  // namespace olion
