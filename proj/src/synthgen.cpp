#include "ttskill/synthgen.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ttskill/error.hpp"
#include "ttskill/rng.hpp"

namespace ttskill {

namespace {

constexpr double kPi = std::numbers::pi;

// Per class: acc x/y/z (m/s^2), gyro x/y/z (deg/s), angle x/y/z (deg);
// each {amplitude, cycles per stroke, phase, offset}.
const std::array<StrokeTemplate, kNumStrokes> kTemplates{{
    // forehand attack
    {{{{18, 1, 0, 0}, {6, 2, 0.5, 0}, {8, 1, 1.0, 0},
       {150, 1, 0, 0}, {100, 2, 0, 0}, {400, 1, 0, 0},
       {10, 1, 0, 20}, {5, 1, 0, 10}, {15, 1, 0, -10}}}},
    // backhand attack
    {{{{16, 1, kPi, 0}, {8, 2, 1.5, 0}, {6, 1, 2.0, 0},
       {120, 1, kPi, 0}, {140, 2, 1, 0}, {380, 1, kPi, 0},
       {10, 1, kPi, -20}, {6, 1, 0, -5}, {12, 1, kPi, 15}}}},
    // forehand push
    {{{{7, 1, 0, 0}, {3, 1, 0.5, 0}, {4, 2, 0, 0},
       {60, 1, 0, 0}, {40, 1, 0.5, 0}, {120, 1, 0, 0},
       {6, 1, 0, 15}, {4, 1, 0, 25}, {6, 1, 0, 0}}}},
    // backhand push
    {{{{6, 1, kPi, 0}, {4, 1, 2.0, 0}, {3, 2, 1.0, 0},
       {50, 1, kPi, 0}, {60, 1, 2, 0}, {110, 1, kPi, 0},
       {6, 1, kPi, -15}, {4, 1, 0, 20}, {5, 1, kPi, 5}}}},
    // forehand chop
    {{{{10, 1, 0, 0}, {4, 1.5, 0, 0}, {12, 1, kPi, 0},
       {200, 1.5, 0, 0}, {80, 1, 0, 0}, {150, 1.5, 0, 0},
       {8, 1, 0, 10}, {10, 1, 0, -20}, {8, 1, 0, 20}}}},
    // backhand chop
    {{{{9, 1, kPi, 0}, {5, 1.5, 1, 0}, {11, 1, 0, 0},
       {180, 1.5, kPi, 0}, {90, 1, 1, 0}, {140, 1.5, kPi, 0},
       {8, 1, kPi, -10}, {10, 1, kPi, -25}, {8, 1, kPi, -20}}}},
}};

// Spike magnitudes are multiples of this fraction of the sensor scale.
constexpr double kSpikeUnit = 0.05;

enum Stream : std::uint64_t { kOrder = 1, kJitter = 2, kNoise = 10, kSpike = 20, kDropout = 30 };

double channel_value(const ChannelTemplate& ch, double phase01) {
  const double env = std::sin(kPi * phase01) * std::sin(kPi * phase01);
  return env * (ch.offset + ch.amplitude * std::sin(2.0 * kPi * ch.cycles * phase01 + ch.phase));
}

void set_channel(SampleFrame& f, std::size_t c, double value) {
  std::array<double*, 9> slots{&f.acc[0],  &f.acc[1],  &f.acc[2],   &f.gyro[0], &f.gyro[1],
                               &f.gyro[2], &f.angle[0], &f.angle[1], &f.angle[2]};
  *slots[c] = value;
}

double get_channel(const SampleFrame& f, std::size_t c) {
  const std::array<double, 9> v{f.acc[0],  f.acc[1],  f.acc[2],   f.gyro[0], f.gyro[1],
                                f.gyro[2], f.angle[0], f.angle[1], f.angle[2]};
  return v[c];
}

}  // namespace

const std::array<StrokeTemplate, kNumStrokes>& stroke_templates() noexcept { return kTemplates; }

void GenConfig::validate() const {
  auto rate_ok = [](double r) { return r >= 0.0 && r < 1.0; };
  if (!rate_ok(spike_rate) || !rate_ok(dropout_rate) || !rate_ok(idle_fraction)) {
    throw Error(ErrorCode::BadConfig, "rates and idle fraction must lie in [0, 1)");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw Error(ErrorCode::BadConfig, "noise sigma must be >= 0");
  if (!(period > 0.0) || !(sample_period > 0.0)) throw Error(ErrorCode::BadConfig, "periods must be positive");
  if (strokes_per_class == 0) throw Error(ErrorCode::BadConfig, "strokes_per_class must be positive");
  if (stroke_samples() < 2) throw Error(ErrorCode::BadConfig, "stroke period shorter than two samples");
}

std::size_t GenConfig::stroke_samples() const {
  return static_cast<std::size_t>(std::llround(period / sample_period));
}

std::size_t GenConfig::idle_samples() const {
  return static_cast<std::size_t>(
      std::llround(static_cast<double>(stroke_samples()) * idle_fraction / (1.0 - idle_fraction)));
}

SampleFrame idle_frame() noexcept {
  SampleFrame f;
  f.acc = {0.0, 0.0, kGravity};
  return f;
}

std::vector<SampleFrame> stroke_frames(StrokeLabel label, std::size_t samples, double amplitude_scale) {
  const auto& tpl = kTemplates[index(label)];
  std::vector<SampleFrame> frames(samples, idle_frame());
  for (std::size_t i = 0; i < samples; ++i) {
    const double phase01 = static_cast<double>(i) / static_cast<double>(samples);
    for (std::size_t c = 0; c < 9; ++c) {
      const double base = get_channel(frames[i], c);
      set_channel(frames[i], c, base + amplitude_scale * channel_value(tpl.channels[c], phase01));
    }
  }
  return frames;
}

GeneratedData generate(const GenConfig& cfg) {
  cfg.validate();
  const std::size_t stroke_len = cfg.stroke_samples();
  const std::size_t idle_len = cfg.idle_samples();

  std::vector<StrokeLabel> order;
  for (auto s : kAllStrokes)
    for (std::size_t i = 0; i < cfg.strokes_per_class; ++i) order.push_back(s);
  CounterRng order_rng(cfg.seed, kOrder);
  order_rng.shuffle(std::span(order));

  const std::size_t total = idle_len + order.size() * (stroke_len + idle_len);
  std::vector<SampleFrame> frames(total, idle_frame());
  GeneratedData out;

  std::size_t cursor = 0;
  auto push_idle = [&] {
    if (idle_len == 0) return;
    out.truth.push_back({cursor, cursor + idle_len, std::nullopt});
    cursor += idle_len;
  };
  push_idle();
  CounterRng jitter_rng(cfg.seed, kJitter);
  for (auto label : order) {
    const double scale = 1.0 + cfg.noise_sigma * jitter_rng.normal();
    const auto stroke = stroke_frames(label, stroke_len, scale);
    std::copy(stroke.begin(), stroke.end(), frames.begin() + static_cast<std::ptrdiff_t>(cursor));
    out.truth.push_back({cursor, cursor + stroke_len, label});
    cursor += stroke_len;
    push_idle();
  }

  for (std::size_t c = 0; c < 9; ++c) {
    const double sensor_scale = kSensorScale[c / 3];
    const double sigma = cfg.noise_sigma * sensor_scale;
    CounterRng noise_rng(cfg.seed, kNoise + c);
    CounterRng spike_rng(cfg.seed, kSpike + c);
    for (std::size_t i = 0; i < total; ++i) {
      double v = get_channel(frames[i], c);
      if (sigma > 0.0) v += sigma * noise_rng.normal();
      if (cfg.spike_rate > 0.0 && spike_rng.uniform() < cfg.spike_rate) {
        const double magnitude = spike_rng.uniform(10.0, 50.0) * kSpikeUnit * sensor_scale;
        v += spike_rng.uniform() < 0.5 ? -magnitude : magnitude;
      }
      set_channel(frames[i], c, v);
    }
  }

  std::vector<SampleFrame> kept;
  kept.reserve(total);
  CounterRng drop_rng(cfg.seed, kDropout);
  for (std::size_t i = 0; i < total; ++i) {
    frames[i].t = static_cast<double>(i) * cfg.sample_period;
    const bool drop = cfg.dropout_rate > 0.0 && drop_rng.uniform() < cfg.dropout_rate;
    if (i == 0 || !drop) kept.push_back(frames[i]);
  }
  out.series = SensorSeries(std::move(kept), cfg.sample_period);
  return out;
}

std::string serialize_truth(const std::vector<Segment>& truth) {
  std::ostringstream out;
  out << "start_index,end_index,label\n";
  for (const auto& s : truth) {
    out << s.start << ',' << s.end << ',' << (s.label ? stroke_name(*s.label) : std::string_view("idle")) << '\n';
  }
  return out.str();
}

std::vector<Segment> parse_truth(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Segment> out;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#' || line.rfind("start_index", 0) == 0) continue;
    std::istringstream row(line);
    std::string start, end, label;
    if (!std::getline(row, start, ',') || !std::getline(row, end, ',') || !std::getline(row, label)) {
      throw Error(ErrorCode::MalformedRow, "labels line " + std::to_string(line_no) + ": expected 3 fields");
    }
    Segment s;
    try {
      s.start = std::stoull(start);
      s.end = std::stoull(end);
    } catch (const std::exception&) {
      throw Error(ErrorCode::MalformedRow, "labels line " + std::to_string(line_no) + ": bad index");
    }
    if (s.end < s.start) throw Error(ErrorCode::MalformedRow, "labels line " + std::to_string(line_no) + ": end < start");
    if (label != "idle") {
      const auto parsed = stroke_from_name(label);
      if (!parsed) throw Error(ErrorCode::BadLabel, "labels line " + std::to_string(line_no) + ": unknown label " + label);
      s.label = *parsed;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace ttskill
