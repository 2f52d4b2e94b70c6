#include "ttskill/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ttskill/error.hpp"

namespace ttskill {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_number(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

bool all_finite(const SampleFrame& f) {
  auto finite3 = [](const Vec3& v) {
    return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
  };
  return std::isfinite(f.t) && finite3(f.acc) && finite3(f.gyro) && finite3(f.angle);
}

// `# period=<seconds>`; returns true when the comment carried a period.
bool parse_period_comment(std::string_view comment, double& period, std::size_t line_no) {
  comment.remove_prefix(1);
  comment = trim(comment);
  constexpr std::string_view key = "period";
  if (comment.substr(0, key.size()) != key) return false;
  auto rest = trim(comment.substr(key.size()));
  if (rest.empty() || rest.front() != '=') return false;
  double value = 0.0;
  if (!parse_number(rest.substr(1), value) || !(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::MalformedRow,
                "line " + std::to_string(line_no) + ": invalid period comment");
  }
  period = value;
  return true;
}

}  // namespace

SensorSeries::SensorSeries(std::vector<SampleFrame> frames, double sample_period)
    : frames_(std::move(frames)), sample_period_(sample_period) {
  if (!(sample_period_ > 0.0) || !std::isfinite(sample_period_)) {
    throw Error(ErrorCode::MalformedRow, "sample period must be positive and finite");
  }
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    if (!all_finite(frames_[i])) {
      throw Error(ErrorCode::MalformedRow, "frame " + std::to_string(i) + " has a non-finite value");
    }
    if (i > 0 && !(frames_[i].t > frames_[i - 1].t)) {
      throw Error(ErrorCode::NonMonotonicTime,
                  "frame " + std::to_string(i) + " does not advance time");
    }
  }
}

SensorSeries parse_series(std::istream& in) {
  std::vector<SampleFrame> frames;
  double period = kDefaultSamplePeriod;
  std::string line;
  std::size_t line_no = 0;
  bool seen_data = false;

  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      parse_period_comment(text, period, line_no);
      continue;
    }
    if (!seen_data && text == kSeriesHeader) continue;

    std::array<double, 10> fields{};
    std::size_t count = 0;
    std::size_t begin = 0;
    while (true) {
      const auto comma = text.find(',', begin);
      const auto field = text.substr(begin, comma == std::string_view::npos ? text.npos : comma - begin);
      if (count >= fields.size() || !parse_number(field, fields[count])) {
        throw Error(ErrorCode::MalformedRow,
                    "line " + std::to_string(line_no) + ": expected 10 numeric fields");
      }
      ++count;
      if (comma == std::string_view::npos) break;
      begin = comma + 1;
    }
    if (count != fields.size()) {
      throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": expected 10 fields, got " +
                                               std::to_string(count));
    }
    SampleFrame f;
    f.t = fields[0];
    f.acc = {fields[1], fields[2], fields[3]};
    f.gyro = {fields[4], fields[5], fields[6]};
    f.angle = {fields[7], fields[8], fields[9]};
    if (!all_finite(f)) {
      throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": non-finite value");
    }
    if (!frames.empty() && !(f.t > frames.back().t)) {
      throw Error(ErrorCode::NonMonotonicTime,
                  "line " + std::to_string(line_no) + ": time " + format_double(f.t) +
                      " does not exceed " + format_double(frames.back().t));
    }
    frames.push_back(f);
    seen_data = true;
  }
  if (frames.empty()) throw Error(ErrorCode::EmptyInput, "no data rows");
  return SensorSeries(std::move(frames), period);
}

SensorSeries parse_series(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_series(in);
}

SensorSeries read_series_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return parse_series(in);
}

std::vector<GapReport> validate_series(const SensorSeries& series) {
  std::vector<GapReport> gaps;
  const double period = series.sample_period();
  for (std::size_t i = 0; i + 1 < series.size(); ++i) {
    const double dt = series[i + 1].t - series[i].t;
    if (std::abs(dt - period) > 0.5 * period) {
      const double implied = std::round(dt / period) - 1.0;
      gaps.push_back({i, dt, implied > 0.0 ? static_cast<std::size_t>(implied) : 0});
    }
  }
  return gaps;
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string serialize_series(const SensorSeries& series) {
  std::string out;
  out.reserve(series.size() * 120 + 64);
  out += "# period=" + format_double(series.sample_period()) + "\n";
  out += kSeriesHeader;
  out += '\n';
  for (const auto& f : series.frames()) {
    out += format_double(f.t);
    for (const Vec3* v : {&f.acc, &f.gyro, &f.angle}) {
      for (double x : *v) {
        out += ',';
        out += format_double(x);
      }
    }
    out += '\n';
  }
  return out;
}

void write_series_file(const std::string& path, const SensorSeries& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << serialize_series(series);
}

}  // namespace ttskill
