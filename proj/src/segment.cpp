#include "ttskill/segment.hpp"

#include <algorithm>
#include <cmath>

#include "ttskill/error.hpp"

namespace ttskill {

namespace {

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

void append_mean_var_pv(std::span<const double> x, std::span<double> out) {
  const double n = static_cast<double>(x.size());
  double sum = 0.0;
  for (double v : x) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  out[0] = mean;
  out[1] = ss / n;
  out[2] = *hi - *lo;
}

}  // namespace

std::size_t window_stride(std::size_t width, double overlap) {
  if (width == 0) throw Error(ErrorCode::BadConfig, "window width must be positive");
  if (!(overlap >= 0.0 && overlap < 1.0)) throw Error(ErrorCode::BadConfig, "overlap must lie in [0, 1)");
  const auto stride = static_cast<std::size_t>(std::llround(static_cast<double>(width) * (1.0 - overlap)));
  return std::max<std::size_t>(stride, 1);
}

MotionWindow cut_window(const SensorSeries& series, std::size_t start, std::size_t width) {
  if (start + width > series.size()) throw Error(ErrorCode::TooShort, "window runs past the series end");
  MotionWindow w;
  w.start_index = start;
  w.sample_period = series.sample_period();
  const auto first = series.frames().begin() + static_cast<std::ptrdiff_t>(start);
  w.frames.assign(first, first + static_cast<std::ptrdiff_t>(width));
  return w;
}

std::vector<MotionWindow> slide_windows(const SensorSeries& series, std::size_t width, double overlap) {
  const std::size_t stride = window_stride(width, overlap);
  if (series.size() < width) {
    throw Error(ErrorCode::TooShort, "series has " + std::to_string(series.size()) +
                                         " frames, window needs " + std::to_string(width));
  }
  std::vector<MotionWindow> windows;
  windows.reserve((series.size() - width) / stride + 1);
  for (std::size_t start = 0; start + width <= series.size(); start += stride) {
    windows.push_back(cut_window(series, start, width));
  }
  return windows;
}

ActivationFeatures activation_features(const MotionWindow& window) {
  ActivationFeatures out{};
  if (window.frames.empty()) return out;
  std::vector<double> acc(window.size());
  std::vector<double> gyro(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) {
    acc[i] = norm3(window.frames[i].acc);
    gyro[i] = norm3(window.frames[i].gyro);
  }
  append_mean_var_pv(acc, std::span(out).subspan(0, 3));
  append_mean_var_pv(gyro, std::span(out).subspan(3, 3));
  return out;
}

double LinearSvmModel::decision(std::span<const double> x) const {
  if (x.size() != w.size()) throw Error(ErrorCode::DimensionMismatch, "feature size differs from model");
  return dot(w, x) + b;
}

LinearSvmModel train_linear_svm(const std::vector<std::vector<double>>& x,
                                const std::vector<bool>& positive, const SmoOptions& options) {
  if (x.size() != positive.size()) throw Error(ErrorCode::LengthMismatch, "samples and labels differ");
  if (x.empty()) throw Error(ErrorCode::SingleClass, "no training samples");
  const std::size_t n = x.size();
  const std::size_t dim = x.front().size();
  Matrix gram(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i].size() != dim) throw Error(ErrorCode::DimensionMismatch, "ragged training samples");
    for (std::size_t j = 0; j <= i; ++j) gram(i, j) = gram(j, i) = dot(x[i], x[j]);
  }
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = positive[i] ? 1 : -1;

  const auto solved = smo_solve(gram, y, options);
  LinearSvmModel model;
  model.c = options.c;
  model.b = solved.b;
  model.w.assign(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double coef = solved.alpha[i] * y[i];
    if (coef == 0.0) continue;
    for (std::size_t d = 0; d < dim; ++d) model.w[d] += coef * x[i][d];
  }
  return model;
}

LinearSvmModel train_activation(const std::vector<std::pair<MotionWindow, bool>>& labeled,
                                const SmoOptions& options) {
  const std::size_t n = labeled.size();
  std::vector<std::vector<double>> x(n);
  std::vector<bool> positive(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto f = activation_features(labeled[i].first);
    x[i].assign(f.begin(), f.end());
    positive[i] = labeled[i].second;
  }

  // Magnitude statistics span several orders of magnitude; solve in
  // standardized coordinates and map the separator back to raw features.
  const std::size_t dim = kActivationFeatureNames.size();
  std::vector<double> mean(dim, 0.0);
  std::vector<double> scale(dim, 0.0);
  for (const auto& row : x)
    for (std::size_t d = 0; d < dim; ++d) mean[d] += row[d];
  for (auto& m : mean) m /= static_cast<double>(std::max<std::size_t>(n, 1));
  for (const auto& row : x)
    for (std::size_t d = 0; d < dim; ++d) scale[d] += (row[d] - mean[d]) * (row[d] - mean[d]);
  for (auto& s : scale) {
    s = std::sqrt(s / static_cast<double>(std::max<std::size_t>(n, 1)));
    if (s < 1e-12) s = 1.0;
  }
  for (auto& row : x)
    for (std::size_t d = 0; d < dim; ++d) row[d] = (row[d] - mean[d]) / scale[d];

  LinearSvmModel model = train_linear_svm(x, positive, options);
  for (std::size_t d = 0; d < dim; ++d) {
    model.w[d] /= scale[d];
    model.b -= model.w[d] * mean[d];
  }
  model.feature_names.assign(kActivationFeatureNames.begin(), kActivationFeatureNames.end());
  return model;
}

bool is_active(const MotionWindow& window, const LinearSvmModel& model) {
  const auto f = activation_features(window);
  return model.decision(f) > 0.0;
}

}  // namespace ttskill
