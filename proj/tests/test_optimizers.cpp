// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "olion/errors.hpp"
#include "olion/linalg.hpp"
#include "olion/optim.hpp"
#include "olion/rng.hpp"

using namespace olion;

namespace {

bool bit_equal(const Matrix& a, const Matrix& b) {
  return a.same_shape(b) && std::memcmp(a.data().data(), b.data().data(),
                                        a.data().size() * sizeof(double)) == 0;
}

ParamBlock block_of(const Matrix& m, const char* name = "X") {
  return {name, m, BlockKind::MatrixShaped};
}

}  // namespace

TEST_SUITE_BEGIN("optimizers");

TEST_CASE("zero gradient with zero momentum shrinks by the decay factor only") {
  Matrix x0 = gaussian_matrix(4, 3, 1);
  ParamBlock block = block_of(x0);
  OptimizerState state = OptimizerState::zeros_like(block, false);
  HyperParams hp = default_hyperparams(OptimizerKind::OLion);
  hp.weight_decay = 0.1;
  double eta = 0.01;

  StepArtifacts art = olion_step(block, Matrix(4, 3), state, hp, eta);
  CHECK(art.zero_signal);
  CHECK(state.step_count == 1);

  Matrix expected = x0;
  expected *= 1.0 - hp.weight_decay * eta;
  CHECK(bit_equal(block.matrix, expected));
}

TEST_CASE("gamma equals the rms target exactly when the sign has no zeros") {
  Matrix grad = gaussian_matrix(8, 8, 3);
  ParamBlock block = block_of(Matrix(8, 8));
  OptimizerState state = OptimizerState::zeros_like(block, false);
  HyperParams hp = default_hyperparams(OptimizerKind::OLion);

  StepArtifacts art = olion_step(block, grad, state, hp, 0.01, PolarMode::Exact);
  bool any_zero = false;
  for (double v : art.sign.data()) {
    if (v == 0.0) any_zero = true;
  }
  REQUIRE(!any_zero);
  CHECK(art.gamma == hp.rms_target);
  double rms = frobenius_norm(art.direction) /
               std::sqrt(static_cast<double>(art.direction.size()));
  CHECK(rms == doctest::Approx(hp.rms_target).epsilon(1e-15));
}

TEST_CASE("single olion step matches the hand-composed pipeline") {
  // f(X) = 0.5 ||X - A||_F^2, beta1 = beta2 = 0, no decay, exact polar.
  Matrix a = gaussian_matrix(6, 4, 5);
  Matrix x0 = gaussian_matrix(6, 4, 6);
  ParamBlock block = block_of(x0);
  OptimizerState state = OptimizerState::zeros_like(block, false);
  HyperParams hp;
  hp.beta1 = 0.0;
  hp.beta2 = 0.0;
  hp.weight_decay = 0.0;
  double eta = 0.05;

  Matrix grad = x0 - a;
  olion_step(block, grad, state, hp, eta, PolarMode::Exact);

  Matrix s = sign_map(polar_factor_exact(grad));
  double gamma = hp.rms_target * std::sqrt(static_cast<double>(s.size())) /
                 frobenius_norm(s);
  Matrix expected = x0 - eta * gamma * s;
  CHECK(frobenius_norm(block.matrix - expected) < 1e-14);
}

TEST_CASE("lion equals olion when the mixed signal is already orthogonal") {
  // With an orthogonal gradient and beta = 0 the orthogonalization only
  // rescales, so the sign patterns agree.
  Matrix q = polar_factor_exact(gaussian_matrix(6, 6, 7));
  HyperParams hp;
  hp.beta1 = 0.0;
  hp.beta2 = 0.0;
  hp.weight_decay = 0.0;

  ParamBlock block_a = block_of(Matrix::identity(6));
  ParamBlock block_b = block_of(Matrix::identity(6));
  OptimizerState state_a = OptimizerState::zeros_like(block_a, false);
  OptimizerState state_b = OptimizerState::zeros_like(block_b, false);
  StepArtifacts art_a = olion_step(block_a, q, state_a, hp, 0.01, PolarMode::Exact);
  StepArtifacts art_b = lion_step(block_b, q, state_b, hp, 0.01);
  CHECK(bit_equal(art_a.sign, art_b.sign));
}

TEST_CASE("lion on an all-positive gradient signs to the all-ones matrix") {
  Matrix grad = Matrix::constant(3, 5, 0.7);
  ParamBlock block = block_of(Matrix(3, 5));
  OptimizerState state = OptimizerState::zeros_like(block, false);
  HyperParams hp = default_hyperparams(OptimizerKind::Lion);
  StepArtifacts art = lion_step(block, grad, state, hp, 0.01);
  for (double v : art.sign.data()) CHECK(v == 1.0);
}

TEST_CASE("lion trajectory matches a straight-line reference implementation") {
  const int rows = 5, cols = 3, steps = 10;
  Matrix a = gaussian_matrix(rows, cols, 11);
  HyperParams hp = default_hyperparams(OptimizerKind::Lion);
  hp.weight_decay = 0.05;
  double eta = 0.02;

  ParamBlock block = block_of(Matrix(rows, cols));
  OptimizerState state = OptimizerState::zeros_like(block, false);
  for (int t = 0; t < steps; ++t) {
    Matrix grad = block.matrix - a;
    lion_step(block, grad, state, hp, eta);
  }

  // Entrywise reference, written directly from the update equations.
  std::vector<double> x(rows * cols, 0.0), m(rows * cols, 0.0);
  for (int t = 0; t < steps; ++t) {
    std::vector<double> g(rows * cols);
    for (int i = 0; i < rows * cols; ++i) g[i] = x[i] - a.data()[i];
    std::vector<double> mixed(rows * cols);
    double norm_sq = 0.0;
    for (int i = 0; i < rows * cols; ++i) {
      m[i] = hp.beta2 * m[i] + (1.0 - hp.beta2) * g[i];
      mixed[i] = (1.0 - hp.beta1) * g[i] + hp.beta1 * m[i];
    }
    std::vector<double> s(rows * cols);
    for (int i = 0; i < rows * cols; ++i) {
      s[i] = mixed[i] > 0 ? 1.0 : (mixed[i] < 0 ? -1.0 : 0.0);
      norm_sq += s[i] * s[i];
    }
    double gamma = hp.rms_target * std::sqrt(static_cast<double>(rows * cols)) /
                   std::sqrt(norm_sq);
    for (int i = 0; i < rows * cols; ++i) {
      x[i] = x[i] * (1.0 - hp.weight_decay * eta) - eta * gamma * s[i];
    }
  }
  for (int i = 0; i < rows * cols; ++i) {
    CHECK(block.matrix.data()[i] == doctest::Approx(x[i]).epsilon(1e-14));
  }
}

TEST_CASE("muon aligns the orthogonal update to the rms target") {
  Matrix q = polar_factor_exact(gaussian_matrix(8, 8, 13));
  ParamBlock block = block_of(Matrix(8, 8));
  OptimizerState state = OptimizerState::zeros_like(block, false);
  HyperParams hp;
  hp.beta1 = 0.0;
  hp.beta2 = 0.0;
  hp.weight_decay = 0.0;

  StepArtifacts art = muon_step(block, q, state, hp, 0.01, PolarMode::Exact);
  double rms = frobenius_norm(art.direction) /
               std::sqrt(static_cast<double>(art.direction.size()));
  CHECK(rms == doctest::Approx(hp.rms_target).epsilon(1e-12));
  // Direction is proportional to the polar factor itself.
  Matrix expected = q;
  expected *= art.gamma;
  CHECK(frobenius_norm(art.direction - expected) < 1e-12);
}

TEST_CASE("muon 10-step trajectory matches a reference loop") {
  const int rows = 6, cols = 4, steps = 10;
  Matrix a = gaussian_matrix(rows, cols, 17);
  HyperParams hp = default_hyperparams(OptimizerKind::Muon);
  hp.weight_decay = 0.0;
  double eta = 0.03;

  ParamBlock block = block_of(Matrix(rows, cols));
  OptimizerState state = OptimizerState::zeros_like(block, false);
  for (int t = 0; t < steps; ++t) {
    Matrix grad = block.matrix - a;
    muon_step(block, grad, state, hp, eta, PolarMode::Exact);
  }

  Matrix x(rows, cols), m(rows, cols);
  for (int t = 0; t < steps; ++t) {
    Matrix g = x - a;
    m *= hp.beta2;
    m += (1.0 - hp.beta2) * g;
    Matrix mixed = (1.0 - hp.beta1) * g + hp.beta1 * m;
    Matrix q = polar_factor_exact(mixed);
    double gamma = hp.rms_target * std::sqrt(static_cast<double>(q.size())) /
                   frobenius_norm(q);
    x -= eta * gamma * q;
  }
  CHECK(frobenius_norm(block.matrix - x) < 1e-12);
}

TEST_CASE("adamw first step and constant-gradient closed form") {
  Matrix grad = gaussian_matrix(3, 4, 19);
  ParamBlock block = block_of(Matrix(3, 4));
  OptimizerState state = OptimizerState::zeros_like(block, true);
  HyperParams hp = default_hyperparams(OptimizerKind::AdamW);
  hp.weight_decay = 0.0;
  double eta = 0.1;

  adamw_step(block, grad, state, hp, eta);
  // Bias correction cancels on step one: direction = g / (|g| + eps).
  for (long i = 0; i < grad.size(); ++i) {
    double g = grad.data()[i];
    double expected = -eta * g / (std::abs(g) + hp.adam_eps);
    CHECK(block.matrix.data()[i] == doctest::Approx(expected).epsilon(1e-12));
  }

  // Second step on the same constant gradient doubles the displacement.
  adamw_step(block, grad, state, hp, eta);
  for (long i = 0; i < grad.size(); ++i) {
    double g = grad.data()[i];
    double expected = -2.0 * eta * g / (std::abs(g) + hp.adam_eps);
    CHECK(block.matrix.data()[i] == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("signsgd moves against the gradient sign") {
  Matrix grad = Matrix::identity(3);
  grad *= -1.0;
  ParamBlock block = block_of(Matrix(3, 3));
  OptimizerState state = OptimizerState::zeros_like(block, false);
  HyperParams hp = default_hyperparams(OptimizerKind::SignSgd);
  hp.weight_decay = 0.0;
  signsgd_step(block, grad, state, hp, 0.25);
  CHECK(frobenius_norm(block.matrix - 0.25 * Matrix::identity(3)) < 1e-15);
}

TEST_CASE("fallback accepts vectors and rejects matrix-shaped blocks") {
  ParamBlock vec{"bias", Matrix(1, 7), BlockKind::Fallback1d};
  OptimizerState state = OptimizerState::zeros_like(vec, true);
  HyperParams hp = default_hyperparams(OptimizerKind::AdamW);
  Matrix grad = gaussian_matrix(1, 7, 23);
  CHECK_NOTHROW(fallback_step_1d(vec, grad, state, hp, 0.01));

  ParamBlock bad{"square", Matrix(3, 3), BlockKind::Fallback1d};
  OptimizerState bad_state = OptimizerState::zeros_like(bad, true);
  CHECK_THROWS_AS(fallback_step_1d(bad, Matrix(3, 3), bad_state, hp, 0.01), Error);

  ParamBlock wrong_kind{"w", Matrix(1, 5), BlockKind::MatrixShaped};
  OptimizerState wk_state = OptimizerState::zeros_like(wrong_kind, true);
  CHECK_THROWS_AS(fallback_step_1d(wrong_kind, Matrix(1, 5), wk_state, hp, 0.01), Error);
}

TEST_CASE("apply_step routes 1-D blocks to the fallback rule") {
  ParamBlock vec{"bias", gaussian_matrix(1, 5, 29), BlockKind::Fallback1d};
  OptimizerState state = OptimizerState::zeros_like(
      vec, needs_second_moment(OptimizerKind::OLion, vec.kind));
  HyperParams hp = default_hyperparams(OptimizerKind::OLion);
  Matrix grad = gaussian_matrix(1, 5, 31);
  StepArtifacts art =
      apply_step(OptimizerKind::OLion, vec, grad, state, hp, 0.01, PolarMode::Exact);
  CHECK(!state.second_moment.empty());  // AdamW fallback keeps a second moment
  CHECK(art.ortho.empty());             // and never orthogonalizes
}

TEST_CASE("shape mismatch is rejected") {
  ParamBlock block = block_of(Matrix(4, 4));
  OptimizerState state = OptimizerState::zeros_like(block, false);
  HyperParams hp = default_hyperparams(OptimizerKind::OLion);
  CHECK_THROWS_AS(olion_step(block, Matrix(3, 4), state, hp, 0.01), Error);
}

TEST_CASE("state buffers are lazily sized from the gradient") {
  ParamBlock block = block_of(gaussian_matrix(3, 4, 47));
  OptimizerState state;  // empty buffers
  HyperParams hp = default_hyperparams(OptimizerKind::AdamW);
  CHECK_NOTHROW(adamw_step(block, gaussian_matrix(3, 4, 48), state, hp, 0.01));
  CHECK(state.momentum.same_shape(block.matrix));
  CHECK(state.second_moment.same_shape(block.matrix));

  OptimizerState lion_state;
  CHECK_NOTHROW(lion_step(block, gaussian_matrix(3, 4, 49), lion_state, hp, 0.01));
  CHECK(lion_state.momentum.same_shape(block.matrix));
}

TEST_CASE("weight decay over many zero-gradient steps is the exact power") {
  Matrix x0 = gaussian_matrix(3, 3, 37);
  ParamBlock block = block_of(x0);
  OptimizerState state = OptimizerState::zeros_like(block, false);
  HyperParams hp = default_hyperparams(OptimizerKind::OLion);
  hp.weight_decay = 0.1;
  const double eta = 0.05;
  const int steps = 25;
  for (int t = 0; t < steps; ++t) {
    olion_step(block, Matrix(3, 3), state, hp, eta);
  }
  Matrix expected = x0;
  for (int t = 0; t < steps; ++t) expected *= 1.0 - hp.weight_decay * eta;
  CHECK(bit_equal(block.matrix, expected));
  CHECK(state.step_count == steps);
}

TEST_CASE("sign patterns are invariant to gradient-history scaling") {
  Matrix a = gaussian_matrix(5, 4, 41);
  HyperParams hp = default_hyperparams(OptimizerKind::OLion);
  hp.weight_decay = 0.0;

  ParamBlock block_a = block_of(Matrix(5, 4));
  ParamBlock block_b = block_of(Matrix(5, 4));
  OptimizerState state_a = OptimizerState::zeros_like(block_a, false);
  OptimizerState state_b = OptimizerState::zeros_like(block_b, false);
  for (int t = 0; t < 20; ++t) {
    Matrix grad_a = block_a.matrix - a;
    Matrix grad_b = block_b.matrix - a;
    grad_b *= 7.5;
    StepArtifacts art_a = olion_step(block_a, grad_a, state_a, hp, 0.01, PolarMode::Exact);
    StepArtifacts art_b = olion_step(block_b, grad_b, state_b, hp, 0.01, PolarMode::Exact);
    REQUIRE(bit_equal(art_a.sign, art_b.sign));
    REQUIRE(bit_equal(art_a.direction, art_b.direction));
  }
}

TEST_CASE("schedules ramp, decay, and reject out-of-range steps") {
  LrSchedule schedule;
  schedule.kind = ScheduleKind::WarmupCosine;
  schedule.warmup_steps = 10;
  schedule.total_steps = 100;
  schedule.lr_max = 1.0;
  schedule.lr_min = 0.01;
  schedule.validate();

  CHECK(schedule_lr(schedule, 0) == doctest::Approx(0.1));  // lr_max * 1/warmup
  CHECK(schedule_lr(schedule, 10) == doctest::Approx(1.0));
  CHECK(schedule_lr(schedule, 99) == doctest::Approx(0.01).epsilon(1e-9));
  CHECK_THROWS_AS(schedule_lr(schedule, -1), Error);
  CHECK_THROWS_AS(schedule_lr(schedule, 100), Error);

  schedule.kind = ScheduleKind::WarmupLinear;
  CHECK(schedule_lr(schedule, 99) == doctest::Approx(0.01).epsilon(1e-12));
  double mid = schedule_lr(schedule, 10 + (99 - 10) / 2);
  CHECK(mid > 0.01);
  CHECK(mid < 1.0);

  schedule.kind = ScheduleKind::Constant;
  CHECK(schedule_lr(schedule, 50) == 1.0);
  CHECK(schedule_lr(schedule, 5) == doctest::Approx(0.6));  // warmup still ramps

  LrSchedule bad = schedule;
  bad.lr_min = 2.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("hyperparameter validation") {
  HyperParams hp = default_hyperparams(OptimizerKind::OLion);
  CHECK_NOTHROW(hp.validate());
  hp.beta1 = 1.0;
  CHECK_THROWS_AS(hp.validate(), Error);
  hp = default_hyperparams(OptimizerKind::OLion);
  hp.lr = 0.0;
  CHECK_THROWS_AS(hp.validate(), Error);
}

TEST_SUITE_END();
