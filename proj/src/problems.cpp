// SPDX-License-Identifier: Apache-2.0
#include "olion/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "olion/errors.hpp"
#include "olion/linalg.hpp"
#include "olion/rng.hpp"

namespace olion {

namespace {

std::vector<int> batch_indices(int n_samples, int batch_size, uint64_t batch_seed,
                               const std::vector<int>& permutation) {
  if (batch_size < 1 || batch_size > n_samples) {
    throw Error(ErrorCode::ConfigInvalid, "batch size out of range");
  }
  if (n_samples % batch_size != 0) {
    throw Error(ErrorCode::ConfigInvalid,
                "batch size must divide n_samples so epochs average exactly");
  }
  int num_batches = n_samples / batch_size;
  int batch = static_cast<int>(batch_seed % static_cast<uint64_t>(num_batches));
  std::vector<int> indices(batch_size);
  for (int i = 0; i < batch_size; ++i) {
    indices[i] = permutation[static_cast<size_t>(batch) * batch_size + i];
  }
  return indices;
}

std::vector<int> seeded_permutation(int n, uint64_t seed) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng.below(static_cast<uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

// ---------------------------------------------------------------------------
// Quadratic: f(X) = 0.5 ||X - A||_F^2

class QuadraticProblem final : public Problem {
 public:
  explicit QuadraticProblem(Matrix target) : target_(std::move(target)) {
    name_ = "quadratic";
  }

  const std::string& name() const override { return name_; }

  std::vector<ParamBlock> initial_blocks() const override {
    return {{"X", Matrix(target_.rows(), target_.cols()), BlockKind::MatrixShaped}};
  }

  double loss(const std::vector<ParamBlock>& params) const override {
    const Matrix& x = params.at(0).matrix;
    Matrix diff = x - target_;
    double f = frobenius_norm(diff);
    return 0.5 * f * f;
  }

  std::vector<Matrix> grad(const std::vector<ParamBlock>& params) const override {
    return {params.at(0).matrix - target_};
  }

  std::optional<double> smoothness_constant() const override { return 1.0; }

 private:
  std::string name_;
  Matrix target_;
};

// ---------------------------------------------------------------------------
// Two-block factorization: f(W1, W2) = 0.5 ||W1 W2 - Y||_F^2

class FactorizationProblem final : public Problem {
 public:
  FactorizationProblem(Matrix y, int inner_dim, uint64_t init_seed)
      : y_(std::move(y)), inner_dim_(inner_dim) {
    name_ = "matrix_factorization";
    if (inner_dim < 1 || inner_dim > std::min(y_.rows(), y_.cols())) {
      throw Error(ErrorCode::InvalidDim,
                  "matrix_factorization: inner dim must be in [1, min(dims)]");
    }
    double scale = 0.5 / std::sqrt(static_cast<double>(inner_dim));
    Rng rng(init_seed);
    w1_init_ = gaussian_matrix(y_.rows(), inner_dim, rng, scale);
    w2_init_ = gaussian_matrix(inner_dim, y_.cols(), rng, scale);
  }

  const std::string& name() const override { return name_; }

  std::vector<ParamBlock> initial_blocks() const override {
    return {{"W1", w1_init_, BlockKind::MatrixShaped},
            {"W2", w2_init_, BlockKind::MatrixShaped}};
  }

  double loss(const std::vector<ParamBlock>& params) const override {
    Matrix residual = matmul(params.at(0).matrix, params.at(1).matrix) - y_;
    double f = frobenius_norm(residual);
    return 0.5 * f * f;
  }

  std::vector<Matrix> grad(const std::vector<ParamBlock>& params) const override {
    const Matrix& w1 = params.at(0).matrix;
    const Matrix& w2 = params.at(1).matrix;
    Matrix residual = matmul(w1, w2) - y_;
    return {matmul(residual, transpose(w2)), matmul(transpose(w1), residual)};
  }

 private:
  std::string name_;
  Matrix y_;
  Matrix w1_init_, w2_init_;
  int inner_dim_;
};

// ---------------------------------------------------------------------------
// Softmax classifier on Gaussian blobs

class SoftmaxProblem final : public Problem {
 public:
  SoftmaxProblem(int n_features, int n_classes, int n_samples, uint64_t data_seed,
                 double separation, double noise, double holdout_fraction)
      : n_features_(n_features), n_classes_(n_classes), n_samples_(n_samples) {
    name_ = "softmax_classifier";
    if (n_classes < 2) {
      throw Error(ErrorCode::ConfigInvalid, "softmax: n_classes must be >= 2");
    }
    if (n_features < 1 || n_samples < n_classes) {
      throw Error(ErrorCode::ConfigInvalid, "softmax: bad data dimensions");
    }

    Rng rng(data_seed);
    centers_ = Matrix(n_classes, n_features);
    for (int k = 0; k < n_classes; ++k) {
      double norm_sq = 0.0;
      std::vector<double> direction(n_features);
      for (double& d : direction) {
        d = rng.normal();
        norm_sq += d * d;
      }
      double scale = separation / std::sqrt(norm_sq);
      for (int j = 0; j < n_features; ++j) centers_(k, j) = direction[j] * scale;
    }
    std::tie(data_, labels_) = sample_split(n_samples, rng, noise);

    int n_holdout = static_cast<int>(std::lround(holdout_fraction * n_samples));
    if (n_holdout > 0) {
      Rng holdout_rng(derive_seed(data_seed, 0x48444f55));
      std::tie(holdout_data_, holdout_labels_) =
          sample_split(n_holdout, holdout_rng, noise);
    }

    permutation_ = seeded_permutation(n_samples, derive_seed(data_seed, 0x5045524d));

    // Cross-entropy Hessian in the logits is at most I/2, so
    // sigma_max(X^T X) / (2 n) bounds the smoothness constant.
    std::vector<double> sigma = singular_values(data_);
    smoothness_ = sigma.front() * sigma.front() / (2.0 * n_samples);
  }

  const std::string& name() const override { return name_; }

  std::vector<ParamBlock> initial_blocks() const override {
    return {{"W", Matrix(n_classes_, n_features_), BlockKind::MatrixShaped}};
  }

  double loss(const std::vector<ParamBlock>& params) const override {
    return cross_entropy(params.at(0).matrix, data_, labels_);
  }

  std::vector<Matrix> grad(const std::vector<ParamBlock>& params) const override {
    std::vector<int> all(labels_.size());
    std::iota(all.begin(), all.end(), 0);
    return {ce_gradient(params.at(0).matrix, data_, labels_, all)};
  }

  std::vector<Matrix> minibatch_grad(const std::vector<ParamBlock>& params,
                                     uint64_t batch_seed, int batch_size) const override {
    auto indices = batch_indices(n_samples_, batch_size, batch_seed, permutation_);
    return {ce_gradient(params.at(0).matrix, data_, labels_, indices)};
  }

  std::optional<double> smoothness_constant() const override { return smoothness_; }

  std::optional<double> holdout_loss(const std::vector<ParamBlock>& params) const override {
    if (holdout_labels_.empty()) return std::nullopt;
    return cross_entropy(params.at(0).matrix, holdout_data_, holdout_labels_);
  }

 private:
  std::pair<Matrix, std::vector<int>> sample_split(int count, Rng& rng,
                                                   double noise) const {
    Matrix x(count, n_features_);
    std::vector<int> y(count);
    for (int i = 0; i < count; ++i) {
      y[i] = i % n_classes_;
      for (int j = 0; j < n_features_; ++j) {
        x(i, j) = centers_(y[i], j) + noise * rng.normal();
      }
    }
    return {std::move(x), std::move(y)};
  }

  static double cross_entropy(const Matrix& w, const Matrix& x,
                              const std::vector<int>& y) {
    Matrix logits = matmul(x, transpose(w));  // n x C
    double total = 0.0;
    for (int i = 0; i < logits.rows(); ++i) {
      double zmax = logits(i, 0);
      for (int k = 1; k < logits.cols(); ++k) zmax = std::max(zmax, logits(i, k));
      double sum_exp = 0.0;
      for (int k = 0; k < logits.cols(); ++k) sum_exp += std::exp(logits(i, k) - zmax);
      total += zmax + std::log(sum_exp) - logits(i, y[i]);
    }
    return total / logits.rows();
  }

  Matrix ce_gradient(const Matrix& w, const Matrix& x, const std::vector<int>& y,
                     const std::vector<int>& indices) const {
    Matrix grad(n_classes_, n_features_);
    std::vector<double> probs(n_classes_);
    for (int idx : indices) {
      double zmax = -1e300;
      for (int k = 0; k < n_classes_; ++k) {
        double z = 0.0;
        for (int j = 0; j < n_features_; ++j) z += w(k, j) * x(idx, j);
        probs[k] = z;
        zmax = std::max(zmax, z);
      }
      double sum_exp = 0.0;
      for (int k = 0; k < n_classes_; ++k) {
        probs[k] = std::exp(probs[k] - zmax);
        sum_exp += probs[k];
      }
      for (int k = 0; k < n_classes_; ++k) {
        double coeff = probs[k] / sum_exp - (k == y[idx] ? 1.0 : 0.0);
        for (int j = 0; j < n_features_; ++j) grad(k, j) += coeff * x(idx, j);
      }
    }
    grad *= 1.0 / static_cast<double>(indices.size());
    return grad;
  }

  std::string name_;
  int n_features_, n_classes_, n_samples_;
  Matrix centers_;
  Matrix data_;
  std::vector<int> labels_;
  Matrix holdout_data_;
  std::vector<int> holdout_labels_;
  std::vector<int> permutation_;
  double smoothness_ = 0.0;
};

// ---------------------------------------------------------------------------
// Teacher-student MLP regression (tanh hidden layers, linear head)

class MlpProblem final : public Problem {
 public:
  MlpProblem(std::vector<int> widths, const std::string& activation, int n_samples,
             uint64_t data_seed, double holdout_fraction, bool init_at_teacher,
             double init_scale)
      : widths_(std::move(widths)), n_samples_(n_samples) {
    name_ = "tiny_mlp";
    if (widths_.size() < 3) {
      throw Error(ErrorCode::ConfigInvalid, "tiny_mlp: needs >= 2 layers");
    }
    for (int w : widths_) {
      if (w < 1) throw Error(ErrorCode::ConfigInvalid, "tiny_mlp: widths must be positive");
    }
    if (activation != "tanh") {
      throw Error(ErrorCode::ConfigInvalid, "tiny_mlp: unsupported activation " + activation);
    }

    int layers = static_cast<int>(widths_.size()) - 1;
    Rng teacher_rng(derive_seed(data_seed, 0x54454348));
    std::vector<Matrix> teacher;
    teacher.reserve(layers);
    for (int l = 0; l < layers; ++l) {
      double scale = 1.0 / std::sqrt(static_cast<double>(widths_[l]));
      teacher.push_back(gaussian_matrix(widths_[l + 1], widths_[l], teacher_rng, scale));
    }

    Rng data_rng(derive_seed(data_seed, 0x44415441));
    data_ = gaussian_matrix(n_samples, widths_.front(), data_rng);
    targets_ = forward(teacher, data_).back();

    int n_holdout = static_cast<int>(std::lround(holdout_fraction * n_samples));
    if (n_holdout > 0) {
      Rng holdout_rng(derive_seed(data_seed, 0x484f4c44));
      holdout_data_ = gaussian_matrix(n_holdout, widths_.front(), holdout_rng);
      holdout_targets_ = forward(teacher, holdout_data_).back();
    }

    if (init_at_teacher) {
      init_ = teacher;
    } else {
      Rng init_rng(derive_seed(data_seed, 0x494e4954));
      init_.reserve(layers);
      for (int l = 0; l < layers; ++l) {
        double scale = init_scale / std::sqrt(static_cast<double>(widths_[l]));
        init_.push_back(gaussian_matrix(widths_[l + 1], widths_[l], init_rng, scale));
      }
    }

    permutation_ = seeded_permutation(n_samples, derive_seed(data_seed, 0x5045524d));
  }

  const std::string& name() const override { return name_; }

  std::vector<ParamBlock> initial_blocks() const override {
    std::vector<ParamBlock> blocks;
    for (size_t l = 0; l < init_.size(); ++l) {
      blocks.push_back({"W" + std::to_string(l), init_[l], BlockKind::MatrixShaped});
    }
    return blocks;
  }

  double loss(const std::vector<ParamBlock>& params) const override {
    return loss_on(params, data_, targets_);
  }

  std::vector<Matrix> grad(const std::vector<ParamBlock>& params) const override {
    std::vector<int> all(n_samples_);
    std::iota(all.begin(), all.end(), 0);
    return backprop(params, all);
  }

  std::vector<Matrix> minibatch_grad(const std::vector<ParamBlock>& params,
                                     uint64_t batch_seed, int batch_size) const override {
    auto indices = batch_indices(n_samples_, batch_size, batch_seed, permutation_);
    return backprop(params, indices);
  }

  std::optional<double> holdout_loss(const std::vector<ParamBlock>& params) const override {
    if (holdout_data_.empty()) return std::nullopt;
    return loss_on(params, holdout_data_, holdout_targets_);
  }

 private:
  /// Activations per layer for row-stacked inputs; index 0 is the input.
  static std::vector<Matrix> forward(const std::vector<Matrix>& weights,
                                     const Matrix& inputs) {
    std::vector<Matrix> acts;
    acts.push_back(inputs);
    for (size_t l = 0; l < weights.size(); ++l) {
      Matrix z = matmul(acts.back(), transpose(weights[l]));
      if (l + 1 < weights.size()) {
        for (double& v : z.data()) v = std::tanh(v);
      }
      acts.push_back(std::move(z));
    }
    return acts;
  }

  double loss_on(const std::vector<ParamBlock>& params, const Matrix& x,
                 const Matrix& y) const {
    std::vector<Matrix> weights;
    weights.reserve(params.size());
    for (const auto& b : params) weights.push_back(b.matrix);
    Matrix diff = forward(weights, x).back() - y;
    double f = frobenius_norm(diff);
    return 0.5 * f * f / x.rows();
  }

  std::vector<Matrix> backprop(const std::vector<ParamBlock>& params,
                               const std::vector<int>& indices) const {
    Matrix x(static_cast<int>(indices.size()), widths_.front());
    Matrix y(static_cast<int>(indices.size()), widths_.back());
    for (size_t i = 0; i < indices.size(); ++i) {
      for (int j = 0; j < x.cols(); ++j) x(static_cast<int>(i), j) = data_(indices[i], j);
      for (int j = 0; j < y.cols(); ++j) y(static_cast<int>(i), j) = targets_(indices[i], j);
    }

    std::vector<Matrix> weights;
    weights.reserve(params.size());
    for (const auto& b : params) weights.push_back(b.matrix);
    std::vector<Matrix> acts = forward(weights, x);

    // delta at the linear head; hidden deltas pick up the tanh derivative
    // 1 - a^2 from the stored activations.
    Matrix delta = acts.back() - y;
    delta *= 1.0 / static_cast<double>(indices.size());

    std::vector<Matrix> grads(weights.size());
    for (int l = static_cast<int>(weights.size()) - 1; l >= 0; --l) {
      grads[l] = matmul(transpose(delta), acts[l]);
      if (l > 0) {
        Matrix next = matmul(delta, weights[l]);
        const Matrix& act = acts[l];
        for (int i = 0; i < next.rows(); ++i) {
          for (int j = 0; j < next.cols(); ++j) {
            next(i, j) *= 1.0 - act(i, j) * act(i, j);
          }
        }
        delta = std::move(next);
      }
    }
    return grads;
  }

  std::string name_;
  std::vector<int> widths_;
  int n_samples_;
  Matrix data_, targets_;
  Matrix holdout_data_, holdout_targets_;
  std::vector<Matrix> init_;
  std::vector<int> permutation_;
};

}  // namespace

std::unique_ptr<Problem> make_quadratic(Matrix target) {
  return std::make_unique<QuadraticProblem>(std::move(target));
}

std::unique_ptr<Problem> make_matrix_factorization(Matrix y, int inner_dim,
                                                   uint64_t init_seed) {
  return std::make_unique<FactorizationProblem>(std::move(y), inner_dim, init_seed);
}

std::unique_ptr<Problem> make_softmax_classifier(int n_features, int n_classes,
                                                 int n_samples, uint64_t data_seed,
                                                 double separation, double noise,
                                                 double holdout_fraction) {
  return std::make_unique<SoftmaxProblem>(n_features, n_classes, n_samples, data_seed,
                                          separation, noise, holdout_fraction);
}

std::unique_ptr<Problem> make_tiny_mlp(const std::vector<int>& widths,
                                       const std::string& activation, int n_samples,
                                       uint64_t data_seed, double holdout_fraction,
                                       bool init_at_teacher, double init_scale) {
  return std::make_unique<MlpProblem>(widths, activation, n_samples, data_seed,
                                      holdout_fraction, init_at_teacher, init_scale);
}

double finite_difference_check(const Problem& problem,
                               const std::vector<ParamBlock>& params, double h) {
  std::vector<ParamBlock> probe = params;
  std::vector<Matrix> analytic = problem.grad(params);
  double worst = 0.0;
  for (size_t b = 0; b < probe.size(); ++b) {
    Matrix& x = probe[b].matrix;
    for (int i = 0; i < x.rows(); ++i) {
      for (int j = 0; j < x.cols(); ++j) {
        double saved = x(i, j);
        double step = h * (1.0 + std::abs(saved));
        x(i, j) = saved + step;
        double f_plus = problem.loss(probe);
        x(i, j) = saved - step;
        double f_minus = problem.loss(probe);
        x(i, j) = saved;
        double fd = (f_plus - f_minus) / (2.0 * step);
        double rel = std::abs(fd - analytic[b](i, j)) /
                     std::max(std::abs(analytic[b](i, j)), 1e-8);
        worst = std::max(worst, rel);
      }
    }
  }
  return worst;
}

double estimate_local_smoothness(const Problem& problem,
                                 const std::vector<ParamBlock>& center, double radius,
                                 int pairs, uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int p = 0; p < pairs; ++p) {
    std::vector<ParamBlock> a = center;
    std::vector<ParamBlock> b = center;
    double dist_sq = 0.0;
    for (size_t blk = 0; blk < center.size(); ++blk) {
      for (long i = 0; i < center[blk].matrix.size(); ++i) {
        double da = radius * rng.normal();
        double db = radius * rng.normal();
        a[blk].matrix.data()[i] += da;
        b[blk].matrix.data()[i] += db;
        dist_sq += (da - db) * (da - db);
      }
    }
    if (dist_sq < kZeroFloor) continue;
    std::vector<Matrix> ga = problem.grad(a);
    std::vector<Matrix> gb = problem.grad(b);
    double diff_sq = 0.0;
    for (size_t blk = 0; blk < ga.size(); ++blk) {
      Matrix d = ga[blk] - gb[blk];
      double n = frobenius_norm(d);
      diff_sq += n * n;
    }
    worst = std::max(worst, std::sqrt(diff_sq / dist_sq));
  }
  return worst;
}

std::unique_ptr<Problem> make_problem(const std::string& name,
                                      const nlohmann::json& params,
                                      uint64_t default_data_seed) {
  uint64_t data_seed = params.value("data_seed", default_data_seed);
  if (name == "quadratic") {
    int rows = params.value("rows", 32);
    int cols = params.value("cols", 16);
    Matrix target = gaussian_matrix(rows, cols, derive_seed(data_seed, 0x51554144));
    return make_quadratic(std::move(target));
  }
  if (name == "matrix_factorization") {
    int rows = params.value("rows", 20);
    int cols = params.value("cols", 20);
    int rank = params.value("rank", 5);
    int inner = params.value("k", 5);
    Rng rng(derive_seed(data_seed, 0x46414354));
    Matrix left = gaussian_matrix(rows, rank, rng);
    Matrix right = gaussian_matrix(rank, cols, rng);
    right *= 1.0 / std::sqrt(static_cast<double>(rank));
    return make_matrix_factorization(matmul(left, right), inner,
                                     derive_seed(data_seed, 0x57494e49));
  }
  if (name == "softmax_classifier") {
    return make_softmax_classifier(
        params.value("n_features", 16), params.value("n_classes", 4),
        params.value("n_samples", 512), data_seed, params.value("separation", 3.0),
        params.value("noise", 0.5), params.value("holdout_fraction", 0.0));
  }
  if (name == "tiny_mlp") {
    std::vector<int> widths = params.value("widths", std::vector<int>{8, 32, 16, 32, 4});
    return make_tiny_mlp(widths, params.value("activation", std::string("tanh")),
                         params.value("n_samples", 256), data_seed,
                         params.value("holdout_fraction", 0.0),
                         params.value("init_at_teacher", false),
                         params.value("init_scale", 1.0));
  }
  throw Error(ErrorCode::ConfigInvalid, "unknown problem: " + name);
}

}  // namespace olion
