// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "olion/geometry.hpp"
#include "olion/matrix.hpp"

namespace olion {

enum class BlockKind { MatrixShaped, Fallback1d };

/// One trainable matrix. Fallback1d marks row/column vectors that bypass
/// orthogonalization and take the AdamW fallback rule.
struct ParamBlock {
  std::string name;
  Matrix matrix;
  BlockKind kind = BlockKind::MatrixShaped;
};

enum class OptimizerKind { OLion, Lion, Muon, AdamW, SignSgd };

OptimizerKind optimizer_kind_from_name(const std::string& name);
const char* optimizer_kind_name(OptimizerKind kind);

struct HyperParams {
  double lr = 1e-3;
  double beta1 = 0.95;
  double beta2 = 0.98;
  double weight_decay = 0.1;
  int ns_steps = 5;
  double rms_target = 0.2;
  double adam_eps = 1e-8;

  void validate() const;  // throws ConfigInvalid on out-of-range fields
};

/// Per-optimizer defaults (betas, eps); lr and weight decay keep the
/// library-wide defaults.
HyperParams default_hyperparams(OptimizerKind kind);

/// Per-block state: momentum buffer M, second moment V (AdamW family only),
/// and a step counter that advances by exactly one per step.
struct OptimizerState {
  Matrix momentum;
  Matrix second_moment;  // empty unless the rule needs it
  int64_t step_count = 0;

  static OptimizerState zeros_like(const ParamBlock& block, bool with_second_moment);
};

enum class ScheduleKind { Constant, WarmupCosine, WarmupLinear };

struct LrSchedule {
  ScheduleKind kind = ScheduleKind::Constant;
  int64_t warmup_steps = 0;
  int64_t total_steps = 1;
  double lr_max = 1e-3;
  double lr_min = 0.0;

  void validate() const;
};

/// Learning rate at step t. Warmup ramps as lr_max*(t+1)/warmup_steps so the
/// first step is never dead; decay then runs lr_max -> lr_min over the
/// remaining steps. Throws OutOfRange outside [0, total_steps).
double schedule_lr(const LrSchedule& schedule, int64_t t);

/// Everything a step produced besides the parameter update, for diagnostics.
/// The post-update parameter is X_new = (1 - lambda*eta) * X_old - eta * D.
struct StepArtifacts {
  Matrix g_tilde;   // update signal fed to the geometry (or the raw/
                    // bias-corrected gradient for the element-wise rules)
  Matrix ortho;     // Q: orthogonalized signal (OLion/Muon only, else empty)
  Matrix sign;      // S: sign pattern (OLion/Lion only, else empty)
  Matrix direction; // D
  double gamma = 0.0;
  bool zero_signal = false;  // update signal was below the zero floor
};

/// OLion: momentum, Nesterov mix, orthogonalize, sign, RMS-align, update
/// with decoupled weight decay. A zero update signal is a valid step that
/// only applies decay (state still advances).
StepArtifacts olion_step(ParamBlock& block, const Matrix& grad, OptimizerState& state,
                         const HyperParams& hp, double eta,
                         PolarMode mode = PolarMode::NewtonSchulz);

/// Lion: same pipeline with the orthogonalization skipped (Q := G-tilde).
StepArtifacts lion_step(ParamBlock& block, const Matrix& grad, OptimizerState& state,
                        const HyperParams& hp, double eta);

/// Muon: same momentum lines, D = gamma * Q with the RMS alignment applied
/// to Q instead of its sign.
StepArtifacts muon_step(ParamBlock& block, const Matrix& grad, OptimizerState& state,
                        const HyperParams& hp, double eta,
                        PolarMode mode = PolarMode::NewtonSchulz);

/// AdamW with bias correction and decoupled decay.
StepArtifacts adamw_step(ParamBlock& block, const Matrix& grad, OptimizerState& state,
                         const HyperParams& hp, double eta);

/// Sign of the raw gradient times eta (plus decoupled decay).
StepArtifacts signsgd_step(ParamBlock& block, const Matrix& grad, OptimizerState& state,
                           const HyperParams& hp, double eta);

/// AdamW applied to 1-D blocks, which cannot be orthogonalized.
StepArtifacts fallback_step_1d(ParamBlock& block, const Matrix& grad, OptimizerState& state,
                               const HyperParams& hp, double eta);

/// Dispatch on optimizer kind and block kind (1-D blocks always take the
/// fallback rule).
StepArtifacts apply_step(OptimizerKind kind, ParamBlock& block, const Matrix& grad,
                         OptimizerState& state, const HyperParams& hp, double eta,
                         PolarMode mode);

/// Whether the rule keeps a second-moment buffer.
bool needs_second_moment(OptimizerKind kind, BlockKind block_kind);

}  // namespace olion
