// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "olion/matrix.hpp"
#include "olion/optim.hpp"

namespace olion {

/// A differentiable objective over a fixed list of parameter blocks.
/// Problems are immutable after construction; loss/grad are pure.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual const std::string& name() const = 0;

  /// Deterministic initial parameters (seeded at construction).
  virtual std::vector<ParamBlock> initial_blocks() const = 0;

  virtual double loss(const std::vector<ParamBlock>& params) const = 0;

  /// Full gradient, one matrix per block, shapes matching the blocks.
  virtual std::vector<Matrix> grad(const std::vector<ParamBlock>& params) const = 0;

  /// Mean gradient over one deterministic batch. Batches partition the data:
  /// batch index = batch_seed % (n_samples / batch_size), over a fixed
  /// seeded permutation, so one epoch of batches averages to the full
  /// gradient. Problems without sample structure return the full gradient.
  virtual std::vector<Matrix> minibatch_grad(const std::vector<ParamBlock>& params,
                                             uint64_t batch_seed, int batch_size) const {
    (void)batch_seed;
    (void)batch_size;
    return grad(params);
  }

  /// Global Frobenius-smoothness constant, when known analytically.
  virtual std::optional<double> smoothness_constant() const { return std::nullopt; }

  virtual double lower_bound() const { return 0.0; }

  /// Loss on the held-out split, when the problem was built with one.
  virtual std::optional<double> holdout_loss(const std::vector<ParamBlock>& params) const {
    (void)params;
    return std::nullopt;
  }
};

/// f(X) = 0.5 * ||X - A||_F^2 with X initialized to zero. L = 1 exactly.
std::unique_ptr<Problem> make_quadratic(Matrix target);

/// f(W1, W2) = 0.5 * ||W1 W2 - Y||_F^2; non-convex two-block objective,
/// no global smoothness constant. Throws InvalidDim when k exceeds Y's dims.
std::unique_ptr<Problem> make_matrix_factorization(Matrix y, int inner_dim,
                                                   uint64_t init_seed);

/// Cross-entropy over seeded Gaussian blobs; W is n_classes x n_features,
/// initialized to zero. Stores the analytic smoothness upper bound
/// sigma_max(X^T X) / (2 n).
std::unique_ptr<Problem> make_softmax_classifier(int n_features, int n_classes,
                                                 int n_samples, uint64_t data_seed,
                                                 double separation = 3.0,
                                                 double noise = 0.5,
                                                 double holdout_fraction = 0.0);

/// Squared-loss regression onto a seeded teacher network (tanh hidden
/// layers, linear head). widths[0] is the input width; each consecutive
/// pair contributes one weight block. `init_at_teacher` starts the student
/// at the global minimum (zero loss, zero gradients).
std::unique_ptr<Problem> make_tiny_mlp(const std::vector<int>& widths,
                                       const std::string& activation, int n_samples,
                                       uint64_t data_seed,
                                       double holdout_fraction = 0.0,
                                       bool init_at_teacher = false,
                                       double init_scale = 1.0);

/// Central-difference gradient check: per-entry step h*(1+|x|), relative
/// error floored at 1e-8. Returns the max relative error over all blocks.
double finite_difference_check(const Problem& problem,
                               const std::vector<ParamBlock>& params, double h = 1e-6);

/// Empirical local smoothness: max ||grad(X)-grad(Y)|| / ||X-Y|| over
/// sampled pairs in a ball around the given point. An estimate only.
double estimate_local_smoothness(const Problem& problem,
                                 const std::vector<ParamBlock>& center, double radius,
                                 int pairs, uint64_t seed);

/// Builds a problem from its registry name and JSON parameters.
/// Problems pick up `data_seed` from params, else the supplied default.
std::unique_ptr<Problem> make_problem(const std::string& name,
                                      const nlohmann::json& params,
                                      uint64_t default_data_seed);

}  // namespace olion
