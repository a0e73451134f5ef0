// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "olion/diagnostics.hpp"
#include "olion/errors.hpp"
#include "olion/io.hpp"
#include "olion/optim.hpp"
#include "olion/problems.hpp"
#include "olion/rng.hpp"
#include "olion/theory_lab.hpp"
#include "oracles.hpp"

using namespace olion;

namespace {

std::filesystem::path temp_csv(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / "olion_diag_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

Matrix scaled_hadamard4() {
  Matrix h{{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
  h *= 0.5;
  return h;
}

}  // namespace

TEST_SUITE_BEGIN("diagnostics");

TEST_CASE("rank-1 input has a single correlation equal to ||Q||_1 and eps 0") {
  Matrix u = gaussian_matrix(7, 1, 2);
  Matrix v = gaussian_matrix(5, 1, 3);
  Matrix z = matmul(u, transpose(v));
  IsotropyReport report = isotropy_epsilon(z);
  REQUIRE(report.rank == 1);
  CHECK(report.m_vector[0] == doctest::Approx(report.q_l1).epsilon(1e-10));
  CHECK(report.epsilon == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("hadamard times a diagonal is perfectly isotropic") {
  Matrix h = scaled_hadamard4();
  Matrix z = h;
  double sigma[4] = {4.0, 3.0, 2.0, 1.0};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) z(i, j) *= sigma[j];
  IsotropyReport report = isotropy_epsilon(z);
  REQUIRE(report.rank == 4);
  for (double m : report.m_vector) {
    CHECK(m == doctest::Approx(report.m_bar).epsilon(1e-10));
  }
  CHECK(report.epsilon < 1e-10);
}

TEST_CASE("haar pairs at d=256 r=16 have small eps") {
  for (uint64_t seed : {90u, 91u, 92u}) {
    HaarPair pair = sample_haar_pair(256, 256, 16, seed);
    IsotropyReport report = isotropy_from_factors(pair.U, pair.V);
    CHECK(report.epsilon < 0.2);
  }
}

TEST_CASE("svd route and factor route agree") {
  HaarPair pair = sample_haar_pair(40, 30, 6, 1234);
  // Give the factors a spectrum so the SVD is well separated.
  Matrix scaled_u = pair.U;
  for (int i = 0; i < scaled_u.rows(); ++i)
    for (int k = 0; k < scaled_u.cols(); ++k) scaled_u(i, k) *= 6.0 - k;
  Matrix z = matmul(scaled_u, transpose(pair.V));
  IsotropyReport via_svd = isotropy_epsilon(z);
  IsotropyReport via_factors = isotropy_from_factors(pair.U, pair.V);
  REQUIRE(via_svd.rank == via_factors.rank);
  CHECK(via_svd.epsilon == doctest::Approx(via_factors.epsilon).epsilon(1e-8));
  CHECK(via_svd.q_l1 == doctest::Approx(via_factors.q_l1).epsilon(1e-8));
}

TEST_CASE("trace identity: correlations sum to ||Q||_1") {
  Rng rng(777);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix z = gaussian_matrix(12 + trial, 8, rng.next_u64());
    IsotropyReport report = isotropy_epsilon(z);
    double sum = 0.0;
    for (double m : report.m_vector) sum += m;
    CHECK(std::abs(sum - report.q_l1) <= 1e-8 * report.q_l1);
  }
}

TEST_CASE("audit on an isotropic spectrum is degenerate") {
  Matrix q = polar_factor_exact(gaussian_matrix(6, 6, 15));
  Matrix z = 2.5 * q;
  CancellationAudit audit = cancellation_audit(z);
  CHECK(audit.lhs < 1e-10);
  CHECK(audit.rhs < 1e-10);
}

TEST_CASE("audit identity residual vanishes on a seeded gaussian") {
  Matrix z = gaussian_matrix(32, 16, 1001);
  CancellationAudit audit = cancellation_audit(z);
  CHECK(audit.identity_residual < 1e-8 * std::abs(audit.lhs) + 1e-12);
}

TEST_CASE("cancellation-aware bound beats cauchy-schwarz on dense gaussians") {
  Matrix z = gaussian_matrix(128, 64, 1002);
  CancellationAudit audit = cancellation_audit(z);
  CHECK(audit.rhs / audit.cs_rhs < 0.1);
}

TEST_CASE("lhs never exceeds the bound with the tight constant") {
  Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    Matrix z = gaussian_matrix(24, 12, rng.next_u64());
    CancellationAudit audit = cancellation_audit(z);
    CHECK(audit.lhs <= audit.rhs + 1e-8);
    CHECK(audit.rhs <= audit.cs_rhs + 1e-8);
  }
}

TEST_CASE("stationarity measure on orthogonal and scaled-orthogonal input") {
  Matrix q = polar_factor_exact(gaussian_matrix(5, 5, 17));
  StationarityPhi phi = stationarity_phi(q);
  CHECK(phi.alpha == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(phi.rho == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(phi.phi == doctest::Approx(oracles::entry_l1(q)).epsilon(1e-7));

  StationarityPhi scaled = stationarity_phi(3.0 * q);
  CHECK(scaled.alpha == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(scaled.phi == doctest::Approx(3.0 * oracles::entry_l1(q)).epsilon(1e-7));
}

TEST_CASE("phi lower-bounds the alignment score") {
  Rng rng(57);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix z = gaussian_matrix(20, 10, rng.next_u64());
    StationarityPhi phi = stationarity_phi(z);
    Matrix q = polar_factor_exact(z);
    double score = frobenius_inner(z, sign_map(q));
    CHECK(phi.phi <= score + 1e-8);
  }
}

TEST_CASE("mean singular value centers the spectrum to trace zero") {
  Matrix z = gaussian_matrix(18, 9, 61);
  ThinSvd svd = thin_svd(z);
  StationarityPhi phi = stationarity_phi(z);
  double trace = 0.0;
  for (double s : svd.singular_values) trace += s - phi.alpha;
  CHECK(std::abs(trace) < 1e-10);
}

TEST_CASE("descent audit residual is zero for a no-op step") {
  CHECK(descent_audit(3.25, 3.25, 0.0, 1.7, 1.0, 4, 4) == 0.0);
}

TEST_CASE("descent audit certifies exact-polar steps on the quadratic") {
  auto problem = make_quadratic(gaussian_matrix(12, 8, 63));
  auto blocks = problem->initial_blocks();
  OptimizerState state = OptimizerState::zeros_like(blocks[0], false);
  HyperParams hp;
  hp.beta1 = 0.0;
  hp.beta2 = 0.0;
  hp.weight_decay = 0.0;
  const double eta = 0.04;

  double sum_eta_phi = 0.0, sum_eta_sq = 0.0;
  double f0 = problem->loss(blocks);
  for (int t = 0; t < 50; ++t) {
    double f_before = problem->loss(blocks);
    Matrix grad = problem->grad(blocks)[0];
    StepArtifacts art = olion_step(blocks[0], grad, state, hp, eta, PolarMode::Exact);
    double f_after = problem->loss(blocks);
    StationarityPhi phi = stationarity_phi(art.g_tilde);
    double eta_eff = eta * art.gamma;
    double residual = descent_audit(f_before, f_after, eta_eff, phi.phi, 1.0, 12, 8);
    CHECK(residual <= 1e-9);
    sum_eta_phi += eta_eff * phi.phi;
    sum_eta_sq += eta_eff * eta_eff;
  }
  CHECK(sum_eta_phi <= f0 - problem->lower_bound() + 0.5 * 96.0 * sum_eta_sq);
}

TEST_CASE("recorder writes one row per block per due step") {
  auto path = temp_csv("recorder_counting.csv");
  TrajectoryRecorder recorder(path, 1);
  Matrix x = gaussian_matrix(6, 4, 71);
  Matrix signal = gaussian_matrix(6, 4, 72);
  Matrix direction = sign_map(signal);
  for (int step = 0; step < 10; ++step) {
    REQUIRE(recorder.due(step));
    StepDiagnostics diag = recorder.record(step, "X", x, signal, direction, 0.01, 0.0);
    CHECK(diag.bound_lhs <= diag.bound_rhs + 1e-8);
    CHECK(diag.rho >= 0.0);
  }
  CHECK(recorder.rows_written() == 10);
  recorder.flush();

  std::string text = read_file_bytes(path);
  CHECK(text.rfind("step,block,eps,alpha,rho,phi,fro_X,spec_X,nuc_X,l1_X,linf_X,"
                   "rms_D,descent_residual,lr\n",
                   0) == 0);
  int lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  CHECK(lines == 11);  // header + 10 rows
}

TEST_CASE("interval gating skips off-cycle steps") {
  TrajectoryRecorder recorder(temp_csv("recorder_interval.csv"), 5);
  CHECK(recorder.due(0));
  CHECK(!recorder.due(3));
  CHECK(recorder.due(10));
  CHECK_THROWS_AS(TrajectoryRecorder(temp_csv("bad.csv"), 0), Error);
}

TEST_CASE("sign updates keep the max-entry trajectory under the step budget") {
  auto problem = make_quadratic(gaussian_matrix(10, 6, 73));
  auto blocks = problem->initial_blocks();
  OptimizerState state = OptimizerState::zeros_like(blocks[0], false);
  HyperParams hp = default_hyperparams(OptimizerKind::OLion);
  hp.weight_decay = 0.0;
  const double eta = 0.02;

  double linf0 = max_abs_entry(blocks[0].matrix);
  double budget = 0.0;
  for (int t = 0; t < 60; ++t) {
    Matrix grad = problem->grad(blocks)[0];
    StepArtifacts art = olion_step(blocks[0], grad, state, hp, eta);
    budget += eta * art.gamma;
    CHECK(max_abs_entry(blocks[0].matrix) <= linf0 + budget + 1e-12);
  }
}

TEST_CASE("eps stays small along a wide-layer training trajectory") {
  // GPT-like wide layer shape at desk scale.
  auto problem = make_quadratic(gaussian_matrix(64, 256, 79));
  auto blocks = problem->initial_blocks();
  OptimizerState state = OptimizerState::zeros_like(blocks[0], false);
  HyperParams hp = default_hyperparams(OptimizerKind::OLion);
  hp.weight_decay = 0.0;
  for (int t = 0; t < 50; ++t) {
    Matrix grad = problem->grad(blocks)[0];
    StepArtifacts art = olion_step(blocks[0], grad, state, hp, 0.02);
    IsotropyReport report = isotropy_epsilon(art.g_tilde);
    CHECK(report.epsilon < 0.5);
  }
}

TEST_CASE("zero matrix is rejected") {
  CHECK_THROWS_AS(isotropy_epsilon(Matrix(4, 4)), Error);
  CHECK_THROWS_AS(cancellation_audit(Matrix(4, 4)), Error);
  CHECK_THROWS_AS(stationarity_phi(Matrix(4, 4)), Error);
}

TEST_SUITE_END();
