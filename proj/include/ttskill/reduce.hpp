#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ttskill/matrix.hpp"

namespace ttskill {

struct PcaOptions {
  double retention = 0.95;
  /// Divide each centered feature by its sample standard deviation.
  bool standardize = true;
};

/// Symmetric eigendecomposition: eigenvalues descending, eigenvectors as rows.
struct EigenDecomposition {
  std::vector<double> values;
  Matrix vectors;
};

/// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
EigenDecomposition symmetric_eigen(const Matrix& symmetric);

/// Centered covariance X_c' X_c / (m - 1). OpenMP-parallel over output rows.
Matrix covariance(const Matrix& centered);

namespace serial {
Matrix covariance(const Matrix& centered);
}

struct PcaModel {
  std::vector<double> mean;
  /// Per-feature divisor applied after centering (all ones when not standardized).
  std::vector<double> scale;
  /// k x p, orthonormal rows, largest-magnitude entry of each row positive.
  Matrix components;
  /// All p eigenvalues, descending; the first k belong to `components`.
  std::vector<double> eigenvalues;
  std::size_t k = 0;
  double retention = 0.95;

  std::size_t input_dim() const noexcept { return mean.size(); }
};

/// Throws DegenerateInput when m < 2 and NonFinite on NaN/inf entries.
PcaModel fit_pca(const Matrix& x, const PcaOptions& options = {});

std::vector<double> transform(const PcaModel& model, std::span<const double> f);
Matrix transform_rows(const PcaModel& model, const Matrix& x);

/// Inverse map of a k-vector back to feature space.
std::vector<double> reconstruct(const PcaModel& model, std::span<const double> projected);

struct Contributions {
  std::vector<double> rate;        // c_i = lambda_i / sum lambda
  std::vector<double> cumulative;  // C_i, last entry exactly 1
};

Contributions contribution_rates(std::span<const double> eigenvalues);
Contributions contribution_rates(const PcaModel& model);

/// Smallest i (1-based count) with C_i >= retention.
std::size_t retained_count(const Contributions& contributions, double retention);

}  // namespace ttskill
