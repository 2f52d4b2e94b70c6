#include "ttskill/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "ttskill/error.hpp"

namespace ttskill {

std::uint64_t ConfusionMatrix::true_positives(std::size_t cls) const noexcept { return counts[cls][cls]; }

std::uint64_t ConfusionMatrix::false_positives(std::size_t cls) const noexcept {
  std::uint64_t s = 0;
  for (std::size_t t = 0; t < kNumStrokes; ++t)
    if (t != cls) s += counts[t][cls];
  return s;
}

std::uint64_t ConfusionMatrix::false_negatives(std::size_t cls) const noexcept {
  std::uint64_t s = 0;
  for (std::size_t p = 0; p < kNumStrokes; ++p)
    if (p != cls) s += counts[cls][p];
  return s;
}

std::uint64_t ConfusionMatrix::total() const noexcept {
  std::uint64_t s = 0;
  for (const auto& row : counts)
    for (auto v : row) s += v;
  return s;
}

double ConfusionMatrix::accuracy() const noexcept {
  const auto n = total();
  if (n == 0) return 0.0;
  std::uint64_t diag = 0;
  for (std::size_t c = 0; c < kNumStrokes; ++c) diag += counts[c][c];
  return static_cast<double>(diag) / static_cast<double>(n);
}

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) throw Error(ErrorCode::LengthMismatch, "label sequences differ in length");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = index(stroke_from_code(truth[i]));
    const auto p = index(stroke_from_code(predicted[i]));
    ++m.counts[t][p];
  }
  return m;
}

ConfusionMatrix confusion(std::span<const StrokeLabel> truth, std::span<const StrokeLabel> predicted) {
  std::vector<int> t(truth.size()), p(predicted.size());
  std::transform(truth.begin(), truth.end(), t.begin(), [](StrokeLabel l) { return code(l); });
  std::transform(predicted.begin(), predicted.end(), p.begin(), [](StrokeLabel l) { return code(l); });
  return confusion(t, p);
}

PrecisionRecall precision_recall(const ConfusionMatrix& m, std::size_t cls) {
  if (cls >= kNumStrokes) throw Error(ErrorCode::BadLabel, "class index outside 0..5");
  const double tp = static_cast<double>(m.true_positives(cls));
  const double fp = static_cast<double>(m.false_positives(cls));
  const double fn = static_cast<double>(m.false_negatives(cls));
  return {tp + fp > 0.0 ? tp / (tp + fp) : 0.0, tp + fn > 0.0 ? tp / (tp + fn) : 0.0};
}

double f_measure(std::uint64_t tp, std::uint64_t fn, std::uint64_t fp, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::BadConfig, "alpha must lie in [0, 1]");
  const double t = static_cast<double>(tp);
  const double den = 2.0 * t + 2.0 * alpha * static_cast<double>(fn) + 2.0 * (1.0 - alpha) * static_cast<double>(fp);
  return den > 0.0 ? 2.0 * t / den : 0.0;
}

double f_measure(const ConfusionMatrix& m, std::size_t cls, const FMeasureConfig& cfg) {
  if (cls >= kNumStrokes) throw Error(ErrorCode::BadLabel, "class index outside 0..5");
  return f_measure(m.true_positives(cls), m.false_negatives(cls), m.false_positives(cls), cfg.alpha);
}

ClassificationReport classification_report(const ConfusionMatrix& m, const FMeasureConfig& cfg) {
  ClassificationReport r;
  r.matrix = m;
  r.alpha = cfg.alpha;
  for (std::size_t c = 0; c < kNumStrokes; ++c) {
    const auto pr = precision_recall(m, c);
    auto& cr = r.classes[c];
    cr.precision = pr.precision;
    cr.recall = pr.recall;
    cr.f = f_measure(m, c, cfg);
    cr.support = m.true_positives(c) + m.false_negatives(c);
    r.macro_precision += cr.precision / kNumStrokes;
    r.macro_recall += cr.recall / kNumStrokes;
    r.macro_f += cr.f / kNumStrokes;
  }
  r.accuracy = m.accuracy();
  return r;
}

std::string confusion_csv(const ConfusionMatrix& m) {
  std::ostringstream out;
  out << "true\\predicted";
  for (auto s : kAllStrokes) out << ',' << stroke_name(s);
  out << '\n';
  for (std::size_t t = 0; t < kNumStrokes; ++t) {
    out << stroke_name(kAllStrokes[t]);
    for (std::size_t p = 0; p < kNumStrokes; ++p) out << ',' << m.counts[t][p];
    out << '\n';
  }
  return out.str();
}

std::string confusion_svg(const ConfusionMatrix& m, const std::string& title) {
  constexpr int cell = 60;
  constexpr int left = 130;
  constexpr int top = 60;
  const int size = cell * static_cast<int>(kNumStrokes);
  std::uint64_t peak = 1;
  for (const auto& row : m.counts)
    for (auto v : row) peak = std::max(peak, v);

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << left + size + 20 << "\" height=\""
      << top + size + 130 << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<text x=\"" << left << "\" y=\"24\" font-size=\"14\">" << title << "</text>\n";
  for (std::size_t t = 0; t < kNumStrokes; ++t) {
    const int y = top + static_cast<int>(t) * cell;
    out << "<text x=\"4\" y=\"" << y + cell / 2 + 4 << "\">" << stroke_name(kAllStrokes[t]) << "</text>\n";
    for (std::size_t p = 0; p < kNumStrokes; ++p) {
      const int x = left + static_cast<int>(p) * cell;
      const double level = static_cast<double>(m.counts[t][p]) / static_cast<double>(peak);
      const int shade = 255 - static_cast<int>(level * 200.0);
      char color[16];
      std::snprintf(color, sizeof color, "#%02x%02xff", shade, shade);
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
          << "\" fill=\"" << color << "\" stroke=\"#888\"/>\n";
      out << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4 << "\" text-anchor=\"middle\">"
          << m.counts[t][p] << "</text>\n";
    }
  }
  for (std::size_t p = 0; p < kNumStrokes; ++p) {
    const int x = left + static_cast<int>(p) * cell + cell / 2;
    const int y = top + size + 10;
    out << "<text x=\"" << x << "\" y=\"" << y << "\" transform=\"rotate(60 " << x << ' ' << y << ")\">"
        << stroke_name(kAllStrokes[p]) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace ttskill
