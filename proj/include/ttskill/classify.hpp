#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ttskill/labels.hpp"
#include "ttskill/matrix.hpp"
#include "ttskill/smo.hpp"

namespace ttskill {

/// exp(-gamma * |u - v|^2)
double gaussian_kernel(std::span<const double> u, std::span<const double> v, double gamma) noexcept;

/// Gram matrix of the rows of x. OpenMP-parallel over rows.
Matrix gaussian_gram(const Matrix& x, double gamma);

namespace serial {
Matrix gaussian_gram(const Matrix& x, double gamma);
}

/// Binary Gaussian-kernel SVM separating class_pair.first (+1) from class_pair.second (-1).
struct KernelSvmModel {
  Matrix support_vectors;
  /// alpha_i * y_i per support vector.
  std::vector<double> coef;
  double b = 0.0;
  double gamma = 1.0;
  double c = 1.0;
  std::pair<StrokeLabel, StrokeLabel> class_pair{StrokeLabel::ForehandAttack,
                                                 StrokeLabel::BackhandAttack};
  /// Kernel expansion vanished on the training set; decisions reduce to sign(b).
  bool degenerate = false;

  double decision(std::span<const double> x) const;
  /// first when decision > 0, else second.
  StrokeLabel predict(std::span<const double> x) const;
};

/// xa rows are the positive class, xb rows the negative class.
KernelSvmModel train_pairwise_svm(const Matrix& xa, const Matrix& xb,
                                  std::pair<StrokeLabel, StrokeLabel> class_pair,
                                  double gamma, const SmoOptions& options = {});

/// 1 / (k * var) over every entry of the training matrix.
double default_gamma(const Matrix& x);

struct DagSvmModel {
  /// One model per unordered pair (i < j in code order), 15 in total.
  std::vector<KernelSvmModel> models;
  std::array<StrokeLabel, kNumStrokes> class_order = kAllStrokes;

  const KernelSvmModel& model_for(StrokeLabel a, StrokeLabel b) const;
};

struct DagSvmOptions {
  SmoOptions smo{};
  /// <= 0 selects default_gamma of the training matrix.
  double gamma = 0.0;
};

/// Trains all 15 pairwise models, OpenMP-parallel over pairs.
/// Throws EmptyClass when any class has no rows.
DagSvmModel train_dag(const Matrix& x, std::span<const StrokeLabel> labels,
                      const DagSvmOptions& options = {});

struct DagTrace {
  StrokeLabel label;
  std::size_t evaluations = 0;
};

/// Eliminates first-vs-last of the remaining list until one class is left.
DagTrace dag_predict_traced(const DagSvmModel& dag, std::span<const double> x);
StrokeLabel dag_predict(const DagSvmModel& dag, std::span<const double> x);

// ---------------------------------------------------------------------------
// Feed-forward network: [k_in, 120, 120, 6], tanh hidden, softmax output.

inline constexpr std::size_t kHiddenNodes = 120;

struct DenseLayer {
  Matrix weights;  // out x in
  std::vector<double> bias;
};

struct MlpModel {
  std::vector<DenseLayer> layers;
  std::string hidden_activation = "tanh";

  std::vector<std::size_t> layer_sizes() const;
  std::size_t input_dim() const;
};

MlpModel mlp_init(std::size_t k_in, std::uint64_t seed,
                  std::size_t hidden = kHiddenNodes, std::size_t hidden_layers = 2);

std::array<double, kNumStrokes> mlp_forward(const MlpModel& model, std::span<const double> x);

/// Lowest class code wins ties.
StrokeLabel mlp_predict(const MlpModel& model, std::span<const double> x);

/// Cross-entropy -log p[label].
double mlp_loss(const MlpModel& model, std::span<const double> x, StrokeLabel label);

/// d loss / d parameters, shaped like the model's layers.
std::vector<DenseLayer> mlp_gradient(const MlpModel& model, std::span<const double> x,
                                     StrokeLabel label);

struct MlpTrainOptions {
  double learning_rate = 0.01;
  std::size_t epochs = 200;
  /// Stop once the mean epoch loss improves by less than this. <= 0 disables.
  double early_stop = 1e-5;
  std::uint64_t seed = 7;
};

struct MlpTrainResult {
  MlpModel model;
  std::vector<double> epoch_loss;
};

/// Per-sample SGD, shuffled every epoch. Throws NonFinite on divergence.
MlpTrainResult mlp_train(MlpModel model, const Matrix& x, std::span<const StrokeLabel> labels,
                         const MlpTrainOptions& options = {});

}  // namespace ttskill
