#include "ttskill/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ttskill/error.hpp"

namespace ttskill {

EigenDecomposition symmetric_eigen(const Matrix& symmetric) {
  const std::size_t n = symmetric.rows();
  if (symmetric.cols() != n) throw Error(ErrorCode::DimensionMismatch, "eigensolver needs a square matrix");
  Matrix a = symmetric;
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  double frob = 0.0;
  for (double x : a.data()) frob += x * x;
  const double threshold = 1e-28 * frob;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= threshold) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t col = order[r];
    out.values[r] = a(col, col);
    std::size_t largest = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(v(k, col)) > std::abs(v(largest, col))) largest = k;
    }
    const double sign = v(largest, col) < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < n; ++k) out.vectors(r, k) = sign * v(k, col);
  }
  return out;
}

namespace {

void check_covariance_input(const Matrix& centered) {
  if (centered.rows() < 2) throw Error(ErrorCode::DegenerateInput, "covariance needs at least 2 rows");
}

}  // namespace

Matrix covariance(const Matrix& centered) {
  check_covariance_input(centered);
  const Matrix cols = centered.transposed();
  const std::size_t p = cols.rows();
  const double denom = static_cast<double>(centered.rows() - 1);
  Matrix c(p, p);
  const auto count = static_cast<std::ptrdiff_t>(p);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t ii = 0; ii < count; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = i; j < p; ++j) {
      const double value = dot(cols.row(i), cols.row(j)) / denom;
      c(i, j) = value;
      c(j, i) = value;
    }
  }
  return c;
}

namespace serial {
Matrix covariance(const Matrix& centered) {
  check_covariance_input(centered);
  const Matrix cols = centered.transposed();
  const std::size_t p = cols.rows();
  const double denom = static_cast<double>(centered.rows() - 1);
  Matrix c(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      const double value = dot(cols.row(i), cols.row(j)) / denom;
      c(i, j) = value;
      c(j, i) = value;
    }
  }
  return c;
}
}  // namespace serial

Contributions contribution_rates(std::span<const double> eigenvalues) {
  Contributions out;
  const double total = std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorCode::DegenerateInput, "eigenvalues sum to zero");
  out.rate.reserve(eigenvalues.size());
  out.cumulative.reserve(eigenvalues.size());
  double running = 0.0;
  for (double lambda : eigenvalues) {
    running += lambda;
    out.rate.push_back(lambda / total);
    out.cumulative.push_back(running / total);
  }
  if (!out.cumulative.empty()) out.cumulative.back() = 1.0;
  return out;
}

Contributions contribution_rates(const PcaModel& model) { return contribution_rates(model.eigenvalues); }

std::size_t retained_count(const Contributions& contributions, double retention) {
  for (std::size_t i = 0; i < contributions.cumulative.size(); ++i) {
    if (contributions.cumulative[i] >= retention) return i + 1;
  }
  return contributions.cumulative.size();
}

PcaModel fit_pca(const Matrix& x, const PcaOptions& options) {
  if (x.rows() < 2) throw Error(ErrorCode::DegenerateInput, "PCA needs at least 2 rows");
  if (!(options.retention > 0.0 && options.retention <= 1.0)) {
    throw Error(ErrorCode::BadConfig, "retention must lie in (0, 1]");
  }
  for (double v : x.data()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "feature matrix has a non-finite entry");
  }
  const std::size_t m = x.rows();
  const std::size_t p = x.cols();

  PcaModel model;
  model.retention = options.retention;
  model.mean.assign(p, 0.0);
  model.scale.assign(p, 1.0);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < p; ++c) model.mean[c] += x(r, c);
  for (auto& mu : model.mean) mu /= static_cast<double>(m);

  if (options.standardize) {
    std::vector<double> ss(p, 0.0);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < p; ++c) {
        const double d = x(r, c) - model.mean[c];
        ss[c] += d * d;
      }
    for (std::size_t c = 0; c < p; ++c) {
      const double sd = std::sqrt(ss[c] / static_cast<double>(m - 1));
      model.scale[c] = sd > 1e-12 * std::max(1.0, std::abs(model.mean[c])) ? sd : 1.0;
    }
  }

  Matrix z(m, p);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < p; ++c) z(r, c) = (x(r, c) - model.mean[c]) / model.scale[c];

  const auto eig = symmetric_eigen(covariance(z));
  model.eigenvalues = eig.values;
  const auto contributions = contribution_rates(model.eigenvalues);
  model.k = retained_count(contributions, options.retention);
  model.components = Matrix(model.k, p);
  for (std::size_t r = 0; r < model.k; ++r) {
    std::copy(eig.vectors.row(r).begin(), eig.vectors.row(r).end(), model.components.row(r).begin());
  }
  return model;
}

std::vector<double> transform(const PcaModel& model, std::span<const double> f) {
  if (f.size() != model.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(model.input_dim()) +
                                                  " features, got " + std::to_string(f.size()));
  }
  std::vector<double> z(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) z[i] = (f[i] - model.mean[i]) / model.scale[i];
  std::vector<double> out(model.k);
  for (std::size_t r = 0; r < model.k; ++r) out[r] = dot(model.components.row(r), z);
  return out;
}

Matrix transform_rows(const PcaModel& model, const Matrix& x) {
  Matrix out(x.rows(), model.k);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto projected = transform(model, x.row(r));
    std::copy(projected.begin(), projected.end(), out.row(r).begin());
  }
  return out;
}

std::vector<double> reconstruct(const PcaModel& model, std::span<const double> projected) {
  if (projected.size() != model.k) throw Error(ErrorCode::DimensionMismatch, "projection size differs from k");
  const std::size_t p = model.input_dim();
  std::vector<double> out(p, 0.0);
  for (std::size_t r = 0; r < model.k; ++r)
    for (std::size_t c = 0; c < p; ++c) out[c] += model.components(r, c) * projected[r];
  for (std::size_t c = 0; c < p; ++c) out[c] = model.mean[c] + model.scale[c] * out[c];
  return out;
}

}  // namespace ttskill
