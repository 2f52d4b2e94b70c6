#include "ttskill/classify.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <numeric>

#include "ttskill/error.hpp"
#include "ttskill/rng.hpp"

namespace ttskill {

double gaussian_kernel(std::span<const double> u, std::span<const double> v, double gamma) noexcept {
  return std::exp(-gamma * squared_distance(u, v));
}

Matrix gaussian_gram(const Matrix& x, double gamma) {
  const std::size_t n = x.rows();
  Matrix k(n, n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t ii = 0; ii < count; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    k(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double value = gaussian_kernel(x.row(i), x.row(j), gamma);
      k(i, j) = value;
      k(j, i) = value;
    }
  }
  return k;
}

namespace serial {
Matrix gaussian_gram(const Matrix& x, double gamma) {
  const std::size_t n = x.rows();
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double value = gaussian_kernel(x.row(i), x.row(j), gamma);
      k(i, j) = value;
      k(j, i) = value;
    }
  }
  return k;
}
}  // namespace serial

double KernelSvmModel::decision(std::span<const double> x) const {
  if (support_vectors.rows() > 0 && x.size() != support_vectors.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "input size differs from support vectors");
  }
  double f = b;
  for (std::size_t i = 0; i < support_vectors.rows(); ++i) {
    f += coef[i] * gaussian_kernel(support_vectors.row(i), x, gamma);
  }
  return f;
}

StrokeLabel KernelSvmModel::predict(std::span<const double> x) const {
  return decision(x) > 0.0 ? class_pair.first : class_pair.second;
}

KernelSvmModel train_pairwise_svm(const Matrix& xa, const Matrix& xb,
                                  std::pair<StrokeLabel, StrokeLabel> class_pair, double gamma,
                                  const SmoOptions& options) {
  if (xa.rows() == 0 || xb.rows() == 0) throw Error(ErrorCode::EmptyClass, "pairwise SVM needs both classes");
  if (xa.cols() != xb.cols()) throw Error(ErrorCode::DimensionMismatch, "class matrices differ in width");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error(ErrorCode::BadConfig, "gamma must be positive");

  const std::size_t n = xa.rows() + xb.rows();
  const std::size_t dim = xa.cols();
  Matrix x(n, dim);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < xa.rows(); ++i) {
    std::copy(xa.row(i).begin(), xa.row(i).end(), x.row(i).begin());
    y[i] = 1;
  }
  for (std::size_t i = 0; i < xb.rows(); ++i) {
    std::copy(xb.row(i).begin(), xb.row(i).end(), x.row(xa.rows() + i).begin());
    y[xa.rows() + i] = -1;
  }

  const Matrix gram = gaussian_gram(x, gamma);
  const auto solved = smo_solve(gram, y, options);

  KernelSvmModel model;
  model.gamma = gamma;
  model.c = options.c;
  model.b = solved.b;
  model.class_pair = class_pair;
  std::vector<std::size_t> sv;
  for (std::size_t i = 0; i < n; ++i) {
    if (solved.alpha[i] > 0.0) sv.push_back(i);
  }
  model.support_vectors = Matrix(sv.size(), dim);
  model.coef.resize(sv.size());
  for (std::size_t s = 0; s < sv.size(); ++s) {
    std::copy(x.row(sv[s]).begin(), x.row(sv[s]).end(), model.support_vectors.row(s).begin());
    model.coef[s] = solved.alpha[sv[s]] * y[sv[s]];
  }

  double largest = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double expansion = 0.0;
    for (std::size_t s = 0; s < sv.size(); ++s) expansion += model.coef[s] * gram(sv[s], i);
    largest = std::max(largest, std::abs(expansion));
  }
  model.degenerate = largest <= 1e-12;
  return model;
}

double default_gamma(const Matrix& x) {
  const auto data = x.data();
  if (data.empty() || x.cols() == 0) return 1.0;
  const double n = static_cast<double>(data.size());
  const double mean = std::accumulate(data.begin(), data.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : data) ss += (v - mean) * (v - mean);
  const double var = ss / n;
  const double k = static_cast<double>(x.cols());
  return var > 0.0 ? 1.0 / (k * var) : 1.0 / k;
}

const KernelSvmModel& DagSvmModel::model_for(StrokeLabel a, StrokeLabel b) const {
  for (const auto& m : models) {
    if ((m.class_pair.first == a && m.class_pair.second == b) ||
        (m.class_pair.first == b && m.class_pair.second == a)) {
      return m;
    }
  }
  throw Error(ErrorCode::BadModel, "no pairwise model for " + std::string(stroke_name(a)) + " vs " +
                                       std::string(stroke_name(b)));
}

DagSvmModel train_dag(const Matrix& x, std::span<const StrokeLabel> labels, const DagSvmOptions& options) {
  if (labels.size() != x.rows()) throw Error(ErrorCode::LengthMismatch, "labels and rows differ");
  std::array<std::vector<std::size_t>, kNumStrokes> members;
  for (std::size_t r = 0; r < labels.size(); ++r) members[index(labels[r])].push_back(r);
  for (std::size_t c = 0; c < kNumStrokes; ++c) {
    if (members[c].empty()) {
      throw Error(ErrorCode::EmptyClass, "no samples of " + std::string(stroke_name(kAllStrokes[c])));
    }
  }
  const double gamma = options.gamma > 0.0 ? options.gamma : default_gamma(x);

  auto gather = [&](std::size_t c) {
    Matrix out(members[c].size(), x.cols());
    for (std::size_t i = 0; i < members[c].size(); ++i) {
      std::copy(x.row(members[c][i]).begin(), x.row(members[c][i]).end(), out.row(i).begin());
    }
    return out;
  };

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < kNumStrokes; ++i)
    for (std::size_t j = i + 1; j < kNumStrokes; ++j) pairs.emplace_back(i, j);

  DagSvmModel dag;
  dag.models.resize(pairs.size());
  std::vector<std::exception_ptr> errors(pairs.size());
  const auto count = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t p = 0; p < count; ++p) {
    const auto [i, j] = pairs[static_cast<std::size_t>(p)];
    try {
      dag.models[static_cast<std::size_t>(p)] =
          train_pairwise_svm(gather(i), gather(j), {kAllStrokes[i], kAllStrokes[j]}, gamma, options.smo);
    } catch (...) {
      errors[static_cast<std::size_t>(p)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return dag;
}

DagTrace dag_predict_traced(const DagSvmModel& dag, std::span<const double> x) {
  std::deque<StrokeLabel> remaining(dag.class_order.begin(), dag.class_order.end());
  DagTrace trace{remaining.front(), 0};
  while (remaining.size() > 1) {
    const StrokeLabel first = remaining.front();
    const StrokeLabel last = remaining.back();
    const StrokeLabel winner = dag.model_for(first, last).predict(x);
    ++trace.evaluations;
    if (winner == first) remaining.pop_back();
    else remaining.pop_front();
  }
  trace.label = remaining.front();
  return trace;
}

StrokeLabel dag_predict(const DagSvmModel& dag, std::span<const double> x) {
  return dag_predict_traced(dag, x).label;
}

// --- MLP --------------------------------------------------------------------

std::vector<std::size_t> MlpModel::layer_sizes() const {
  std::vector<std::size_t> sizes;
  if (layers.empty()) return sizes;
  sizes.push_back(layers.front().weights.cols());
  for (const auto& l : layers) sizes.push_back(l.weights.rows());
  return sizes;
}

std::size_t MlpModel::input_dim() const { return layers.empty() ? 0 : layers.front().weights.cols(); }

MlpModel mlp_init(std::size_t k_in, std::uint64_t seed, std::size_t hidden, std::size_t hidden_layers) {
  if (k_in == 0 || hidden == 0) throw Error(ErrorCode::BadConfig, "layer sizes must be positive");
  std::vector<std::size_t> sizes{k_in};
  for (std::size_t i = 0; i < hidden_layers; ++i) sizes.push_back(hidden);
  sizes.push_back(kNumStrokes);

  MlpModel model;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const std::size_t fan_in = sizes[l];
    const std::size_t fan_out = sizes[l + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    CounterRng rng(seed, l);
    DenseLayer layer{Matrix(fan_out, fan_in), std::vector<double>(fan_out, 0.0)};
    for (double& w : layer.weights.data()) w = rng.uniform(-bound, bound);
    model.layers.push_back(std::move(layer));
  }
  return model;
}

namespace {

void check_input(const MlpModel& model, std::span<const double> x) {
  if (model.layers.empty()) throw Error(ErrorCode::BadModel, "empty network");
  if (x.size() != model.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "network expects " + std::to_string(model.input_dim()) +
                                                  " inputs, got " + std::to_string(x.size()));
  }
}

/// Activations of every layer; the last entry holds the output logits.
std::vector<std::vector<double>> forward_pass(const MlpModel& model, std::span<const double> x) {
  std::vector<std::vector<double>> acts;
  acts.reserve(model.layers.size() + 1);
  acts.emplace_back(x.begin(), x.end());
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const auto& layer = model.layers[l];
    const auto& in = acts.back();
    std::vector<double> out(layer.weights.rows());
    for (std::size_t o = 0; o < out.size(); ++o) out[o] = dot(layer.weights.row(o), in) + layer.bias[o];
    if (l + 1 < model.layers.size()) {
      for (double& v : out) v = std::tanh(v);
    }
    acts.push_back(std::move(out));
  }
  return acts;
}

std::array<double, kNumStrokes> softmax(std::span<const double> logits) {
  std::array<double, kNumStrokes> p{};
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < kNumStrokes; ++i) {
    p[i] = std::exp(logits[i] - top);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

double cross_entropy(std::span<const double> logits, std::size_t label) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - top);
  return top + std::log(sum) - logits[label];
}

/// Backpropagates one sample. When `grads` is null the parameters are updated
/// in place with step `lr`; otherwise gradients are written to `grads`.
double backprop(MlpModel& model, std::span<const double> x, std::size_t label,
                std::vector<DenseLayer>* grads, double lr) {
  const auto acts = forward_pass(model, x);
  const auto& logits = acts.back();
  const double loss = cross_entropy(logits, label);
  const auto p = softmax(logits);

  std::vector<double> delta(p.begin(), p.end());
  delta[label] -= 1.0;

  for (std::size_t l = model.layers.size(); l-- > 0;) {
    auto& layer = model.layers[l];
    const auto& in = acts[l];
    std::vector<double> prev;
    if (l > 0) {
      prev.assign(in.size(), 0.0);
      for (std::size_t o = 0; o < delta.size(); ++o) {
        const auto w = layer.weights.row(o);
        for (std::size_t i = 0; i < in.size(); ++i) prev[i] += w[i] * delta[o];
      }
      for (std::size_t i = 0; i < in.size(); ++i) prev[i] *= 1.0 - in[i] * in[i];
    }
    if (grads) {
      auto& g = (*grads)[l];
      for (std::size_t o = 0; o < delta.size(); ++o) {
        auto row = g.weights.row(o);
        for (std::size_t i = 0; i < in.size(); ++i) row[i] = delta[o] * in[i];
        g.bias[o] = delta[o];
      }
    } else {
      for (std::size_t o = 0; o < delta.size(); ++o) {
        auto row = layer.weights.row(o);
        const double step = lr * delta[o];
        for (std::size_t i = 0; i < in.size(); ++i) row[i] -= step * in[i];
        layer.bias[o] -= step;
      }
    }
    delta = std::move(prev);
  }
  return loss;
}

}  // namespace

std::array<double, kNumStrokes> mlp_forward(const MlpModel& model, std::span<const double> x) {
  check_input(model, x);
  return softmax(forward_pass(model, x).back());
}

StrokeLabel mlp_predict(const MlpModel& model, std::span<const double> x) {
  const auto p = mlp_forward(model, x);
  std::size_t best = 0;
  for (std::size_t i = 1; i < kNumStrokes; ++i) {
    if (p[i] > p[best]) best = i;
  }
  return kAllStrokes[best];
}

double mlp_loss(const MlpModel& model, std::span<const double> x, StrokeLabel label) {
  check_input(model, x);
  return cross_entropy(forward_pass(model, x).back(), index(label));
}

std::vector<DenseLayer> mlp_gradient(const MlpModel& model, std::span<const double> x, StrokeLabel label) {
  check_input(model, x);
  std::vector<DenseLayer> grads;
  for (const auto& l : model.layers) {
    grads.push_back({Matrix(l.weights.rows(), l.weights.cols()), std::vector<double>(l.bias.size())});
  }
  MlpModel scratch = model;
  backprop(scratch, x, index(label), &grads, 0.0);
  return grads;
}

MlpTrainResult mlp_train(MlpModel model, const Matrix& x, std::span<const StrokeLabel> labels,
                         const MlpTrainOptions& options) {
  if (x.rows() == 0) throw Error(ErrorCode::EmptyInput, "no training samples");
  if (labels.size() != x.rows()) throw Error(ErrorCode::LengthMismatch, "labels and rows differ");
  if (x.cols() != model.input_dim()) throw Error(ErrorCode::DimensionMismatch, "input width differs from network");

  MlpTrainResult result;
  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), 0);
  CounterRng rng(options.seed, 0x5eed);

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(std::span(order));
    double total = 0.0;
    for (auto r : order) {
      total += backprop(model, x.row(r), index(labels[r]), nullptr, options.learning_rate);
    }
    const double mean_loss = total / static_cast<double>(order.size());
    if (!std::isfinite(mean_loss)) throw Error(ErrorCode::NonFinite, "training loss diverged");
    result.epoch_loss.push_back(mean_loss);
    if (options.early_stop > 0.0 && result.epoch_loss.size() >= 2) {
      const double previous = result.epoch_loss[result.epoch_loss.size() - 2];
      if (previous - mean_loss < options.early_stop) break;
    }
  }
  result.model = std::move(model);
  return result;
}

}  // namespace ttskill
