#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ttskill/matrix.hpp"

namespace ttskill {

struct SmoOptions {
  double c = 1.0;
  /// KKT violation tolerance (maximal violating pair gap).
  double tol = 1e-3;
  /// Iteration cap in passes; one pass is n working-pair updates.
  std::size_t max_passes = 10000;
};

struct SmoResult {
  std::vector<double> alpha;
  double b = 0.0;
  std::size_t iterations = 0;
};

/// Solves  min 1/2 a'Qa - 1'a  s.t. 0 <= a_i <= C, y'a = 0  with Q_ij = y_i y_j K_ij,
/// using maximal-violating-pair working set selection. `kernel` is the full
/// n x n Gram matrix and y_i in {+1, -1}.
/// Throws SingleClass when y has one sign and NoConvergence at the cap.
SmoResult smo_solve(const Matrix& kernel, std::span<const int> y, const SmoOptions& options);

}  // namespace ttskill
