#include "ttskill/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <numeric>

#include "ttskill/error.hpp"

namespace ttskill {

AhpMatrix standard_ahp_matrix() noexcept {
  return {{{1.0, 1.0 / 3, 1.0, 1.0 / 5, 1.0 / 7},
           {3.0, 1.0, 3.0, 3.0, 1.0 / 5},
           {1.0, 1.0 / 3, 1.0, 1.0 / 3, 1.0 / 7},
           {5.0, 1.0 / 3, 3.0, 1.0, 1.0 / 3},
           {7.0, 5.0, 7.0, 3.0, 1.0}}};
}

LevelVector published_level_weights() noexcept {
  LevelVector w{0.0556, 0.2055, 0.0592, 0.1715, 0.5081};
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= sum;
  return w;
}

namespace {

void check_reciprocal(const AhpMatrix& a) {
  for (std::size_t i = 0; i < kNumLevels; ++i) {
    for (std::size_t j = 0; j < kNumLevels; ++j) {
      if (!(a[i][j] > 0.0) || !std::isfinite(a[i][j])) {
        throw Error(ErrorCode::NotReciprocal, "comparison entries must be positive and finite");
      }
      if (std::abs(a[i][j] * a[j][i] - 1.0) > 1e-12) {
        throw Error(ErrorCode::NotReciprocal, "a_ij * a_ji must equal 1");
      }
    }
  }
}

LevelVector multiply(const AhpMatrix& a, const LevelVector& w) {
  LevelVector out{};
  for (std::size_t i = 0; i < kNumLevels; ++i)
    for (std::size_t j = 0; j < kNumLevels; ++j) out[i] += a[i][j] * w[j];
  return out;
}

LevelVector normalized(LevelVector w) {
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= sum;
  return w;
}

/// Sum-normalized principal eigenvector and its eigenvalue.
std::pair<LevelVector, double> principal_eigen(const AhpMatrix& a) {
  LevelVector w;
  w.fill(1.0 / kNumLevels);
  double lambda = 0.0;
  for (int iter = 0; iter < 100000; ++iter) {
    const LevelVector aw = multiply(a, w);
    lambda = std::accumulate(aw.begin(), aw.end(), 0.0);  // sum(w) == 1
    double residual = 0.0;
    for (std::size_t i = 0; i < kNumLevels; ++i) residual = std::max(residual, std::abs(aw[i] - lambda * w[i]));
    w = normalized(aw);
    if (residual < 1e-10) break;
  }
  return {w, lambda};
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

Vec3 direction_angles(const Vec3& v) {
  const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  Vec3 out{90.0, 90.0, 90.0};
  if (norm < 1e-12) return out;
  for (std::size_t a = 0; a < 3; ++a) {
    out[a] = std::acos(std::clamp(v[a] / norm, -1.0, 1.0)) * 180.0 / std::numbers::pi;
  }
  return out;
}

double percentile(std::vector<double> sorted_values, double q) {
  std::sort(sorted_values.begin(), sorted_values.end());
  const double pos = q * static_cast<double>(sorted_values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted_values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[hi] - sorted_values[lo]);
}

constexpr IndicatorKind level_kind(std::size_t level) {
  return level == static_cast<std::size_t>(Level::Strength) || level == static_cast<std::size_t>(Level::Velocity)
             ? IndicatorKind::Maximal
             : IndicatorKind::Interval;
}

}  // namespace

AhpResult ahp_weights(const AhpMatrix& a, AhpMethod method) {
  check_reciprocal(a);
  const auto [eigvec, lambda] = principal_eigen(a);

  AhpResult result;
  if (method == AhpMethod::Eigenvector) {
    result.weights = eigvec;
  } else {
    std::array<double, kNumLevels> col_sum{};
    for (std::size_t i = 0; i < kNumLevels; ++i)
      for (std::size_t j = 0; j < kNumLevels; ++j) col_sum[j] += a[i][j];
    for (std::size_t i = 0; i < kNumLevels; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < kNumLevels; ++j) s += a[i][j] / col_sum[j];
      result.weights[i] = s / kNumLevels;
    }
    result.weights = normalized(result.weights);
  }
  result.lambda_max = lambda;
  result.consistency_index = (lambda - static_cast<double>(kNumLevels)) / static_cast<double>(kNumLevels - 1);
  result.consistency_ratio = result.consistency_index / kRandomIndex5;
  result.consistent = result.consistency_ratio <= 0.1;
  return result;
}

std::array<std::vector<double>, 3> derive_velocity(const MotionWindow& window) {
  const std::size_t n = window.size();
  const double dt = window.sample_period;
  std::array<std::vector<double>, 3> v;
  for (std::size_t axis = 0; axis < 3; ++axis) {
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = window.frames[i].acc[axis];
    const double mean = n > 0 ? mean_of(a) : 0.0;
    v[axis].assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
      v[axis][i] = v[axis][i - 1] + 0.5 * dt * ((a[i - 1] - mean) + (a[i] - mean));
    }
  }
  return v;
}

IndicatorVector window_indicators(const MotionWindow& window) {
  if (window.size() < 2) throw Error(ErrorCode::TooShort, "indicators need at least 2 frames");
  const std::size_t n = window.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  const auto velocity = derive_velocity(window);

  Vec3 acc_mean{}, angle_mean{}, vel_mean{};
  for (const auto& f : window.frames) {
    for (std::size_t a = 0; a < 3; ++a) {
      acc_mean[a] += f.acc[a] * inv_n;
      angle_mean[a] += f.angle[a] * inv_n;
    }
  }
  Vec3 strength{}, speed{};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < 3; ++a) {
      strength[a] += std::abs(window.frames[i].acc[a] - acc_mean[a]) * inv_n;
      speed[a] += std::abs(velocity[a][i]) * inv_n;
      vel_mean[a] += velocity[a][i] * inv_n;
    }
  }
  const Vec3 force_dir = direction_angles(acc_mean);
  const Vec3 vel_dir = direction_angles(vel_mean);

  IndicatorVector out{};
  const std::array<const Vec3*, kNumLevels> levels{&strength, &force_dir, &speed, &vel_dir, &angle_mean};
  for (std::size_t l = 0; l < kNumLevels; ++l)
    for (std::size_t a = 0; a < 3; ++a) out[l * 3 + a] = (*levels[l])[a];
  return out;
}

double profile_epsilon(double center) noexcept { return 1e-6 * std::max(1.0, std::abs(center)); }

StandardProfile build_profile(std::span<const IndicatorVector> reference, StrokeLabel stroke) {
  if (reference.size() < 2) throw Error(ErrorCode::TooFew, "a profile needs at least 2 reference windows");
  StandardProfile profile;
  profile.stroke = stroke;
  profile.reference_count = reference.size();
  std::vector<double> values(reference.size());
  for (std::size_t i = 0; i < kNumIndicators; ++i) {
    for (std::size_t r = 0; r < reference.size(); ++r) values[r] = reference[r][i];
    auto& spec = profile.indicators[i];
    spec.kind = level_kind(i / 3);
    spec.center = mean_of(values);
    const double eps = profile_epsilon(spec.center);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    spec.down = *lo;
    spec.up = *hi;
    if (spec.up - spec.down < eps) {
      spec.down = spec.center - 0.5 * eps;
      spec.up = spec.center + 0.5 * eps;
    }
    spec.lo = percentile(values, 0.05);
    spec.hi = percentile(values, 0.95);
    double ss = 0.0;
    for (double v : values) ss += (v - spec.center) * (v - spec.center);
    const double sd = std::sqrt(ss / static_cast<double>(values.size()));
    spec.k1 = spec.k2 = std::max(sd, eps);
  }
  return profile;
}

StandardProfile build_profile(std::span<const MotionWindow> reference, StrokeLabel stroke) {
  if (reference.size() < 2) throw Error(ErrorCode::TooFew, "a profile needs at least 2 reference windows");
  std::vector<IndicatorVector> indicators;
  indicators.reserve(reference.size());
  for (const auto& w : reference) {
    if (w.label && *w.label != stroke) {
      throw Error(ErrorCode::MixedLabels, "reference windows must all be " + std::string(stroke_name(stroke)));
    }
    indicators.push_back(window_indicators(w));
  }
  return build_profile(std::span<const IndicatorVector>(indicators), stroke);
}

double score_maximal(double value, const IndicatorSpec& spec) {
  const double width = spec.up - spec.down;
  if (!(width >= 0.5 * profile_epsilon(spec.center))) {
    throw Error(ErrorCode::DegenerateRange, "maximal indicator has an empty reference range");
  }
  return 1.0 / (1.0 + std::exp(-(value - spec.center) / width));
}

double score_interval(double value, const IndicatorSpec& spec, bool literal) {
  if (!(spec.k1 > 0.0) || !(spec.k2 > 0.0)) {
    throw Error(ErrorCode::DegenerateRange, "interval loss coefficients must be positive");
  }
  if (value >= spec.lo && value <= spec.hi) return 1.0;
  const bool below = value < spec.lo;
  const double distance = below ? spec.lo - value : value - spec.hi;
  const double decay = std::exp(-distance / (below ? spec.k1 : spec.k2));
  return literal ? 1.0 - decay : decay;
}

LevelVector level_scores(const IndicatorVector& indicators, const StandardProfile& profile, bool literal) {
  LevelVector q{};
  for (std::size_t l = 0; l < kNumLevels; ++l) {
    double sum = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
      const std::size_t i = l * 3 + a;
      const auto& spec = profile.indicators[i];
      sum += spec.kind == IndicatorKind::Maximal ? score_maximal(indicators[i], spec)
                                                 : score_interval(indicators[i], spec, literal);
    }
    q[l] = sum / 3.0;
  }
  return q;
}

LevelVector level_scores(const MotionWindow& window, const StandardProfile& profile, bool literal) {
  return level_scores(window_indicators(window), profile, literal);
}

double total_score(const LevelVector& q, const LevelVector& weights) {
  double sum = 0.0;
  for (double k : weights) {
    if (!(k >= 0.0)) throw Error(ErrorCode::BadWeights, "level weights must be non-negative");
    sum += k;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::BadWeights, "level weights must sum to 1");
  double total = 0.0;
  for (std::size_t i = 0; i < kNumLevels; ++i) total += weights[i] * q[i];
  return total;
}

ScoreReport score_window(const MotionWindow& window, const StandardProfile& profile,
                         const LevelVector& weights, bool literal) {
  ScoreReport report;
  report.q = level_scores(window, profile, literal);
  report.total = total_score(report.q, weights);
  report.weights = weights;
  return report;
}

std::vector<ScoreReport> score_windows(std::span<const MotionWindow> windows, std::span<const StrokeLabel> strokes,
                                       std::span<const StandardProfile> profiles, const LevelVector& weights,
                                       bool literal) {
  if (windows.size() != strokes.size()) throw Error(ErrorCode::LengthMismatch, "windows and strokes differ");
  std::array<const StandardProfile*, kNumStrokes> lookup{};
  for (const auto& p : profiles) lookup[index(p.stroke)] = &p;
  for (auto s : strokes) {
    if (!lookup[index(s)]) throw Error(ErrorCode::BadModel, "no profile for " + std::string(stroke_name(s)));
  }

  std::vector<ScoreReport> out(windows.size());
  std::vector<std::exception_ptr> errors(windows.size());
  const auto count = static_cast<std::ptrdiff_t>(windows.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < count; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    try {
      out[i] = score_window(windows[i], *lookup[index(strokes[i])], weights, literal);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace ttskill
