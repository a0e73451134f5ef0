// SPDX-License-Identifier: Apache-2.0
#include "olion/theory_lab.hpp"

#include <Eigen/Dense>
#include <cmath>

#include <nlohmann/json.hpp>

#include "olion/diagnostics.hpp"
#include "olion/errors.hpp"
#include "olion/io.hpp"
#include "olion/rng.hpp"

namespace olion {

namespace {

/// Haar Q-factor of a Gaussian matrix: thin QR, columns flipped wherever the
/// corresponding diagonal of R is negative.
Matrix haar_factor(int n, int r, Rng& rng) {
  Eigen::MatrixXd gauss(n, r);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < r; ++j) gauss(i, j) = rng.normal();

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  Eigen::MatrixXd thin_q = qr.householderQ() * Eigen::MatrixXd::Identity(n, r);
  Eigen::MatrixXd r_factor =
      qr.matrixQR().topLeftCorner(r, r).triangularView<Eigen::Upper>();
  for (int j = 0; j < r; ++j) {
    if (r_factor(j, j) < 0.0) thin_q.col(j) = -thin_q.col(j);
  }

  Matrix out(n, r);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < r; ++j) out(i, j) = thin_q(i, j);
  return out;
}

}  // namespace

HaarPair sample_haar_pair(int d1, int d2, int r, uint64_t seed) {
  if (r < 1 || r > d1 || r > d2) {
    throw Error(ErrorCode::InvalidRank,
                "sample_haar_pair: r must satisfy 1 <= r <= min(d1, d2)");
  }
  Rng rng(seed);
  HaarPair pair;
  pair.seed = seed;
  pair.U = haar_factor(d1, r, rng);
  pair.V = haar_factor(d2, r, rng);
  return pair;
}

EpsilonMcResult epsilon_mc(int d1, int d2, int r, int trials, uint64_t base_seed) {
  if (r < 2) {
    throw Error(ErrorCode::InvalidRank, "epsilon_mc: r must be >= 2");
  }
  if (trials < 1) {
    throw Error(ErrorCode::ConfigInvalid, "epsilon_mc: trials must be >= 1");
  }
  EpsilonMcResult result;
  result.eps_samples.reserve(trials);
  result.q_l1_samples.reserve(trials);
  for (int trial = 0; trial < trials; ++trial) {
    HaarPair pair = sample_haar_pair(d1, d2, r, base_seed + static_cast<uint64_t>(trial));
    IsotropyReport report = isotropy_from_factors(pair.U, pair.V);
    result.eps_samples.push_back(report.epsilon);
    result.q_l1_samples.push_back(report.q_l1);
  }
  double sum = 0.0;
  for (double e : result.eps_samples) sum += e;
  result.mean_eps = sum / trials;
  double var = 0.0;
  for (double e : result.eps_samples) {
    double d = e - result.mean_eps;
    var += d * d;
  }
  result.std_eps = std::sqrt(var / trials);
  return result;
}

void run_scaling_study(ScalingStudy& study) {
  if (study.trials < 30) {
    throw Error(ErrorCode::ConfigInvalid,
                "scaling study needs >= 30 trials per cell for the fit");
  }
  study.per_cell.clear();
  study.per_cell.reserve(study.grid.size());
  for (size_t i = 0; i < study.grid.size(); ++i) {
    const GridCell& cell = study.grid[i];
    uint64_t cell_seed = derive_seed(study.seed, static_cast<uint64_t>(i));
    study.per_cell.push_back(
        epsilon_mc(cell.d1, cell.d2, cell.r, study.trials, cell_seed));
  }
}

FitResult fit_scaling_law(const ScalingStudy& study) {
  if (study.grid.size() < 4 || study.per_cell.size() != study.grid.size()) {
    throw Error(ErrorCode::InsufficientGrid, "fit needs >= 4 completed grid cells");
  }
  double min_area = 0.0;
  double max_area = 0.0;
  for (const GridCell& cell : study.grid) {
    double area = static_cast<double>(cell.d1) * cell.d2;
    if (min_area == 0.0 || area < min_area) min_area = area;
    if (area > max_area) max_area = area;
  }
  if (max_area < 8.0 * min_area) {
    throw Error(ErrorCode::InsufficientGrid, "grid must span >= 8x in d1*d2");
  }

  // OLS of y = log(mean eps) on x = log(sqrt(r log r / (d1 d2))).
  std::vector<double> xs, ys;
  for (size_t i = 0; i < study.grid.size(); ++i) {
    const GridCell& cell = study.grid[i];
    double predictor = std::sqrt(static_cast<double>(cell.r) *
                                 std::log(static_cast<double>(cell.r)) /
                                 (static_cast<double>(cell.d1) * cell.d2));
    xs.push_back(std::log(predictor));
    ys.push_back(std::log(study.per_cell[i].mean_eps));
  }
  double n = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
    syy += (ys[i] - mean_y) * (ys[i] - mean_y);
  }

  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

void write_study_csv(const ScalingStudy& study, const std::filesystem::path& path) {
  CsvWriter csv(path, {"d1", "d2", "r", "trial", "eps", "q_l1"});
  for (size_t i = 0; i < study.grid.size(); ++i) {
    const GridCell& cell = study.grid[i];
    const EpsilonMcResult& result = study.per_cell[i];
    for (size_t trial = 0; trial < result.eps_samples.size(); ++trial) {
      csv.write_row({std::to_string(cell.d1), std::to_string(cell.d2),
                     std::to_string(cell.r), std::to_string(trial),
                     format_g17(result.eps_samples[trial]),
                     format_g17(result.q_l1_samples[trial])});
    }
  }
}

void write_fit_json(const ScalingStudy& study, const FitResult& fit,
                    const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["slope"] = fit.slope;
  doc["intercept"] = fit.intercept;
  doc["r_squared"] = fit.r_squared;
  auto grid = nlohmann::json::array();
  for (size_t i = 0; i < study.grid.size(); ++i) {
    const GridCell& cell = study.grid[i];
    grid.push_back({{"d1", cell.d1},
                    {"d2", cell.d2},
                    {"r", cell.r},
                    {"mean_eps", study.per_cell[i].mean_eps},
                    {"std_eps", study.per_cell[i].std_eps}});
  }
  doc["grid"] = grid;
  write_file_bytes(path, doc.dump(2) + "\n");
}

}  // namespace olion
