#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "ttskill/corpus.hpp"
#include "ttskill/features.hpp"
#include "ttskill/reduce.hpp"

using namespace ttskill;
using ttskill::testing::error_of;

namespace {

Matrix random_matrix(std::size_t m, std::size_t p, std::uint64_t seed) {
  CounterRng rng(seed, 31);
  Matrix x(m, p);
  // Correlated columns so the spectrum is spread out.
  for (std::size_t r = 0; r < m; ++r) {
    double carry = 0.0;
    for (std::size_t c = 0; c < p; ++c) {
      carry = 0.6 * carry + rng.normal();
      x(r, c) = carry * (1.0 + static_cast<double>(c));
    }
  }
  return x;
}

Eigen::MatrixXd to_eigen(const Matrix& a) {
  Eigen::MatrixXd e(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) e(r, c) = a(r, c);
  return e;
}

}  // namespace

TEST_CASE("symmetric_eigen agrees with an independent solver") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t p = 3 + seed * 3;
    const auto cov = covariance(random_matrix(60, p, seed));
    const auto mine = symmetric_eigen(cov);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(cov));
    const auto& ref = solver.eigenvalues();  // ascending
    const double scale = ref.cwiseAbs().maxCoeff();
    for (std::size_t i = 0; i < p; ++i) {
      CHECK(std::abs(mine.values[i] - ref(static_cast<Eigen::Index>(p - 1 - i))) <= 1e-10 * scale);
    }
    for (std::size_t i = 0; i + 1 < p; ++i) CHECK(mine.values[i] >= mine.values[i + 1]);
    // Residual ||C v - lambda v|| and orthonormality.
    for (std::size_t i = 0; i < p; ++i) {
      const auto v = mine.vectors.row(i);
      double residual = 0.0;
      for (std::size_t r = 0; r < p; ++r) {
        const double cv = dot(cov.row(r), v);
        residual += (cv - mine.values[i] * v[r]) * (cv - mine.values[i] * v[r]);
      }
      CHECK(std::sqrt(residual) <= 1e-8 * scale);
      for (std::size_t j = 0; j < p; ++j) {
        CHECK(std::abs(dot(v, mine.vectors.row(j)) - (i == j ? 1.0 : 0.0)) <= 1e-9);
      }
      const auto big = std::max_element(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
      CHECK(*big > 0.0);
    }
  }
}

TEST_CASE("covariance uses the m - 1 divisor") {
  const auto x = Matrix::from_rows({{1, 2}, {3, 6}, {5, 1}});
  Matrix centered = x;
  for (std::size_t c = 0; c < 2; ++c) {
    const double mean = (x(0, c) + x(1, c) + x(2, c)) / 3.0;
    for (std::size_t r = 0; r < 3; ++r) centered(r, c) -= mean;
  }
  const auto cov = covariance(centered);
  CHECK(cov(0, 0) == doctest::Approx(4.0));
  CHECK(cov(1, 1) == doctest::Approx((1.0 + 9.0 + 4.0) / 2.0));
  CHECK(cov(0, 1) == doctest::Approx((-2.0 * -1.0 + 0.0 * 3.0 + 2.0 * -2.0) / 2.0));
  CHECK(cov(0, 1) == cov(1, 0));
}

TEST_CASE("rank-one data yields a single component along (1,2)") {
  Matrix x(100, 2);
  for (std::size_t r = 0; r < 100; ++r) {
    x(r, 0) = static_cast<double>(r) * 0.1 - 3.0;
    x(r, 1) = 2.0 * x(r, 0);
  }
  const auto m = fit_pca(x, {0.95, false});
  CHECK(m.k == 1);
  CHECK(m.components(0, 0) == doctest::Approx(1.0 / std::sqrt(5.0)));
  CHECK(m.components(0, 1) == doctest::Approx(2.0 / std::sqrt(5.0)));
  CHECK(contribution_rates(m).rate[0] == doctest::Approx(1.0));
}

TEST_CASE("isotropic data spreads contribution evenly") {
  CounterRng rng(8, 0);
  const std::size_t p = 4;
  Matrix x(10000, p);
  for (auto& v : x.data()) v = rng.normal();
  const auto m = fit_pca(x, {0.95, false});
  for (double c : contribution_rates(m).rate) CHECK(std::abs(c - 1.0 / p) <= 0.05);
}

TEST_CASE("contribution_rates arithmetic") {
  const std::vector<double> two{3, 1};
  const auto c = contribution_rates(two);
  CHECK(c.rate[0] == 0.75);
  CHECK(c.rate[1] == 0.25);
  CHECK(c.cumulative[0] == 0.75);
  CHECK(c.cumulative[1] == 1.0);
  const std::vector<double> four{1, 1, 1, 1};
  for (double r : contribution_rates(four).rate) CHECK(r == 0.25);
  CHECK(retained_count(contribution_rates(four), 0.5) == 2);
  CHECK(retained_count(contribution_rates(four), 0.51) == 3);
  const std::vector<double> none{0, 0};
  CHECK(error_of([&] { contribution_rates(none); }) == ErrorCode::DegenerateInput);
}

TEST_CASE("fit_pca rejects bad input") {
  CHECK(error_of([] { fit_pca(Matrix(1, 3)); }) == ErrorCode::DegenerateInput);
  Matrix x(3, 2, 1.0);
  x(1, 1) = std::nan("");
  CHECK(error_of([&] { fit_pca(x); }) == ErrorCode::NonFinite);
}

TEST_CASE("transform is centered, affine, and matches a naive matvec") {
  const auto x = random_matrix(50, 6, 4);
  const auto m = fit_pca(x);
  const auto at_mean = transform(m, m.mean);
  for (double v : at_mean) CHECK(std::abs(v) <= 1e-12);

  CounterRng rng(1, 1);
  std::vector<double> f1(6), f2(6), mix(6);
  for (auto& v : f1) v = rng.normal() * 3;
  for (auto& v : f2) v = rng.normal() * 3;
  const double a = 0.3;
  for (std::size_t i = 0; i < 6; ++i) mix[i] = a * f1[i] + (1 - a) * f2[i];
  const auto t1 = transform(m, f1), t2 = transform(m, f2), tm = transform(m, mix);
  for (std::size_t i = 0; i < m.k; ++i) CHECK(tm[i] == doctest::Approx(a * t1[i] + (1 - a) * t2[i]).epsilon(1e-12));

  for (std::size_t i = 0; i < m.k; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 6; ++j) s += m.components(i, j) * ((f1[j] - m.mean[j]) / m.scale[j]);
    CHECK(std::abs(t1[i] - s) <= 1e-12 * std::max(1.0, std::abs(s)));
  }
  const std::vector<double> short_vec(5, 0.0);
  CHECK(error_of([&] { transform(m, short_vec); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("transform is invariant to training-row order") {
  const auto x = random_matrix(40, 5, 6);
  auto rows = x.to_rows();
  std::reverse(rows.begin(), rows.end());
  const auto a = fit_pca(x);
  const auto b = fit_pca(Matrix::from_rows(rows));
  REQUIRE(a.k == b.k);
  const std::vector<double> f{1, -2, 3, 0.5, 4};
  const auto ta = transform(a, f), tb = transform(b, f);
  for (std::size_t i = 0; i < a.k; ++i) CHECK(ta[i] == doctest::Approx(tb[i]).epsilon(1e-9));
}

TEST_CASE("reconstruction error equals the discarded eigenvalue mass") {
  for (double retention : {0.5, 0.8, 0.95}) {
    const auto x = random_matrix(80, 8, 9);
    const auto m = fit_pca(x, {retention, true});
    double sse = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const auto back = reconstruct(m, transform(m, x.row(r)));
      for (std::size_t c = 0; c < x.cols(); ++c) {
        const double d = (back[c] - x(r, c)) / m.scale[c];
        sse += d * d;
      }
    }
    const double avg = sse / static_cast<double>(x.rows() - 1);
    double discarded = 0.0;
    for (std::size_t i = m.k; i < m.eigenvalues.size(); ++i) discarded += m.eigenvalues[i];
    CHECK(std::abs(avg - discarded) <= 1e-6 * discarded);
  }
}

TEST_CASE("PCA on generated stroke features retains 95 percent") {
  GenConfig cfg;
  cfg.strokes_per_class = 20;
  const auto corpus = build_corpus(cfg);
  const auto x = extract_features(corpus.stroke_windows());
  const auto m = fit_pca(x);
  const auto c = contribution_rates(m);
  CHECK(c.cumulative[m.k - 1] >= 0.95);
  if (m.k > 1) CHECK(c.cumulative[m.k - 2] < 0.95);
  double total = 0.0;
  for (double r : c.rate) total += r;
  CHECK(std::abs(total - 1.0) <= 1e-12);

  // Independent eigensolve of the same standardized covariance gives the same k.
  Matrix z = x;
  for (std::size_t r = 0; r < z.rows(); ++r)
    for (std::size_t col = 0; col < z.cols(); ++col) z(r, col) = (x(r, col) - m.mean[col]) / m.scale[col];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(covariance(z)));
  std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(ev.rbegin(), ev.rend());
  for (auto& v : ev) v = std::max(v, 0.0);
  CHECK(retained_count(contribution_rates(ev), 0.95) == m.k);
}
