#include "ttskill/smo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ttskill/error.hpp"

namespace ttskill {

namespace {
constexpr double kTau = 1e-12;
}

SmoResult smo_solve(const Matrix& kernel, std::span<const int> y, const SmoOptions& options) {
  const std::size_t n = y.size();
  if (kernel.rows() != n || kernel.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "Gram matrix does not match label count");
  }
  if (!(options.c > 0.0)) throw Error(ErrorCode::BadConfig, "C must be positive");
  const bool has_pos = std::any_of(y.begin(), y.end(), [](int v) { return v > 0; });
  const bool has_neg = std::any_of(y.begin(), y.end(), [](int v) { return v < 0; });
  if (!has_pos || !has_neg) throw Error(ErrorCode::SingleClass, "SVM training needs both classes");

  const double c = options.c;
  auto q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * kernel(i, j); };

  SmoResult result;
  auto& alpha = result.alpha;
  alpha.assign(n, 0.0);
  std::vector<double> grad(n, -1.0);

  auto in_up = [&](std::size_t t) {
    return (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0.0);
  };
  auto in_low = [&](std::size_t t) {
    return (y[t] < 0 && alpha[t] < c) || (y[t] > 0 && alpha[t] > 0.0);
  };

  const std::size_t cap = options.max_passes * std::max<std::size_t>(n, 1);
  while (true) {
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    std::size_t i = n;
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(t) && v > gmax) {
        gmax = v;
        i = t;
      }
      if (in_low(t) && v < gmin) {
        gmin = v;
        j = t;
      }
    }
    if (i == n || j == n || gmax - gmin < options.tol) break;
    if (result.iterations >= cap) {
      throw Error(ErrorCode::NoConvergence, "SMO iteration cap reached");
    }
    ++result.iterations;

    const double old_i = alpha[i];
    const double old_j = alpha[j];
    if (y[i] != y[j]) {
      double quad = q(i, i) + q(j, j) + 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) grad[t] += q(i, t) * di + q(j, t) * dj;
  }

  // Bias from the free multipliers, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= c) {
      if (y[t] < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
  result.b = -rho;
  return result;
}

}  // namespace ttskill
