#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "ttskill/error.hpp"
#include "ttskill/ingest.hpp"
#include "ttskill/rng.hpp"

namespace ttskill::testing {

template <typename F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline double rel_err(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

inline SampleFrame frame_at(double t, double base = 0.0) {
  SampleFrame f;
  f.t = t;
  for (int i = 0; i < 3; ++i) {
    f.acc[i] = base + i;
    f.gyro[i] = base * 2 - i;
    f.angle[i] = base * 0.5 + 10 * i;
  }
  return f;
}

inline SensorSeries random_series(std::size_t n, std::uint64_t seed, double period = kDefaultSamplePeriod) {
  CounterRng rng(seed, 99);
  std::vector<SampleFrame> frames(n);
  for (std::size_t i = 0; i < n; ++i) {
    frames[i].t = static_cast<double>(i) * period;
    for (int a = 0; a < 3; ++a) {
      frames[i].acc[a] = rng.normal() * 5.0;
      frames[i].gyro[a] = rng.normal() * 100.0;
      frames[i].angle[a] = rng.normal() * 20.0;
    }
  }
  return SensorSeries(std::move(frames), period);
}

}  // namespace ttskill::testing
