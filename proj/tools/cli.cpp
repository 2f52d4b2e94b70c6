#include "cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <filesystem>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ttskill/classify.hpp"
#include "ttskill/corpus.hpp"
#include "ttskill/error.hpp"
#include "ttskill/evaluate.hpp"
#include "ttskill/features.hpp"
#include "ttskill/ingest.hpp"
#include "ttskill/metrics.hpp"
#include "ttskill/persist.hpp"
#include "ttskill/preprocess.hpp"
#include "ttskill/reduce.hpp"
#include "ttskill/segment.hpp"
#include "ttskill/synthgen.hpp"

namespace ttskill::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "ttskill 1.0.0";
constexpr const char* kIdleName = "idle";

struct WindowRow {
  std::size_t start = 0;
  std::size_t width = 0;
  std::string label;
};

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

std::size_t parse_index(std::string_view s, const std::string& where) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw Error(ErrorCode::MalformedRow, where + ": bad index");
  return v;
}

template <typename F>
void for_each_row(const std::string& text, const char* header, const std::string& what, F&& f) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#' || line.rfind(header, 0) == 0) continue;
    f(split_fields(line), what + " line " + std::to_string(line_no));
  }
}

std::string serialize_windows(const std::vector<WindowRow>& rows) {
  std::string out = "start_index,width,label\n";
  for (const auto& r : rows) out += std::to_string(r.start) + ',' + std::to_string(r.width) + ',' + r.label + '\n';
  return out;
}

std::vector<WindowRow> parse_windows(const std::string& text) {
  std::vector<WindowRow> rows;
  for_each_row(text, "start_index", "windows", [&](const auto& f, const std::string& where) {
    if (f.size() != 3) throw Error(ErrorCode::MalformedRow, where + ": expected 3 fields");
    rows.push_back({parse_index(f[0], where), parse_index(f[1], where), std::string(f[2])});
  });
  return rows;
}

std::optional<StrokeLabel> stroke_of(const std::string& label) {
  if (label.empty() || label == kIdleName) return std::nullopt;
  auto s = stroke_from_name(label);
  if (!s) throw Error(ErrorCode::BadLabel, "unknown label " + label);
  return s;
}

std::string label_text(const WindowLabel& l) {
  switch (l.kind) {
    case WindowTruth::Stroke: return std::string(stroke_name(*l.stroke));
    case WindowTruth::Idle: return kIdleName;
    case WindowTruth::Ambiguous: break;
  }
  return {};
}

struct Prediction {
  std::size_t start = 0;
  std::optional<StrokeLabel> truth;
  StrokeLabel predicted = StrokeLabel::ForehandAttack;
};

std::string serialize_predictions(const std::vector<Prediction>& rows) {
  std::string out = "start_index,true_label,predicted_label\n";
  for (const auto& p : rows) {
    out += std::to_string(p.start) + ',';
    if (p.truth) out += stroke_name(*p.truth);
    out += ',';
    out += stroke_name(p.predicted);
    out += '\n';
  }
  return out;
}

std::vector<Prediction> parse_predictions(const std::string& text) {
  std::vector<Prediction> rows;
  for_each_row(text, "start_index", "predictions", [&](const auto& f, const std::string& where) {
    if (f.size() != 3) throw Error(ErrorCode::MalformedRow, where + ": expected 3 fields");
    Prediction p;
    p.start = parse_index(f[0], where);
    p.truth = stroke_of(std::string(f[1]));
    const auto predicted = stroke_of(std::string(f[2]));
    if (!predicted) throw Error(ErrorCode::MalformedRow, where + ": missing predicted label");
    p.predicted = *predicted;
    rows.push_back(p);
  });
  return rows;
}

void ensure_parent(const std::string& path) {
  const auto parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

void write_file(const std::string& path, const std::string& text) {
  ensure_parent(path);
  write_text_file(path, text);
}

void write_json(const std::string& path, const Json& j) {
  ensure_parent(path);
  write_json_file(path, j);
}

SensorSeries load_series(const std::string& path) { return read_series_file(path); }

// --- synth ------------------------------------------------------------------

struct SynthArgs {
  GenConfig cfg;
  std::string out;
};

Json run_synth(const SynthArgs& a) {
  const auto data = generate(a.cfg);
  fs::create_directories(a.out);
  const auto series_path = (fs::path(a.out) / "series.csv").string();
  const auto labels_path = (fs::path(a.out) / "labels.csv").string();
  write_series_file(series_path, data.series);
  write_text_file(labels_path, serialize_truth(data.truth));
  std::size_t strokes = 0;
  for (const auto& s : data.truth) strokes += s.label ? 1 : 0;
  return {{"rows", data.series.size()}, {"strokes", strokes}, {"series", series_path}, {"labels", labels_path}};
}

// --- preprocess ---------------------------------------------------------------

struct PreprocessArgs {
  std::string in;
  std::string out;
  double k0 = 0.3;
  std::optional<double> delta_a;
  std::size_t calibration_samples = 100;
  bool no_filter = false;
  bool no_outlier = false;
};

Json run_preprocess(const PreprocessArgs& a) {
  if (!(a.k0 > 0.0 && a.k0 <= 1.0)) throw Error(ErrorCode::BadConfig, "k0 must lie in (0, 1]");
  if (a.delta_a && !(*a.delta_a > 0.0)) throw Error(ErrorCode::BadConfig, "delta-a must be positive");
  const auto series = load_series(a.in);
  PreprocessOptions opts;
  opts.k0 = a.k0;
  opts.delta_a = a.delta_a;
  opts.calibration_samples = a.calibration_samples;
  opts.filter = !a.no_filter;
  opts.remove_outliers = !a.no_outlier;
  const auto clean = preprocess_series(series, opts);
  write_file(a.out, serialize_series(clean));
  return {{"rows_in", series.size()}, {"rows_out", clean.size()}, {"out", a.out}};
}

// --- segment ------------------------------------------------------------------

struct SegmentArgs {
  std::string in;
  std::string out;
  std::string labels;
  std::string gate;
  std::string train_gate;
  std::size_t window = kDefaultWindow;
  double overlap = kDefaultOverlap;
  double svm_c = 1.0;
};

Json run_segment(const SegmentArgs& a) {
  if (!a.gate.empty() && !a.train_gate.empty()) throw Error(ErrorCode::BadConfig, "--gate and --train-gate are exclusive");
  if (!a.train_gate.empty() && a.labels.empty()) throw Error(ErrorCode::BadConfig, "--train-gate needs --labels");
  if (!(a.svm_c > 0.0)) throw Error(ErrorCode::BadConfig, "svm-c must be positive");
  const auto series = load_series(a.in);
  auto windows = slide_windows(series, a.window, a.overlap);
  std::vector<WindowLabel> truth;
  if (!a.labels.empty()) truth = attach_labels(windows, parse_truth(read_text_file(a.labels)));

  Json summary{{"windows", windows.size()}};
  std::vector<bool> keep(windows.size(), true);
  if (!a.train_gate.empty()) {
    std::vector<std::pair<MotionWindow, bool>> labeled;
    for (std::size_t i = 0; i < windows.size(); ++i) {
      if (truth[i].kind != WindowTruth::Ambiguous) labeled.emplace_back(windows[i], truth[i].kind == WindowTruth::Stroke);
    }
    SmoOptions smo;
    smo.c = a.svm_c;
    const auto model = train_activation(labeled, smo);
    write_json(a.train_gate, to_json(model));
    summary["gate_model"] = a.train_gate;
  }
  if (!a.gate.empty()) {
    const auto model = linear_svm_from_json(read_json_file(a.gate));
    std::size_t agree = 0;
    std::size_t judged = 0;
    for (std::size_t i = 0; i < windows.size(); ++i) {
      keep[i] = is_active(windows[i], model);
      if (!truth.empty() && truth[i].kind != WindowTruth::Ambiguous) {
        ++judged;
        agree += keep[i] == (truth[i].kind == WindowTruth::Stroke) ? 1 : 0;
      }
    }
    summary["active"] = std::count(keep.begin(), keep.end(), true);
    if (judged > 0) summary["gate_accuracy"] = static_cast<double>(agree) / static_cast<double>(judged);
  }

  std::vector<WindowRow> rows;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (!keep[i]) continue;
    rows.push_back({windows[i].start_index, windows[i].size(), truth.empty() ? std::string{} : label_text(truth[i])});
  }
  write_file(a.out, serialize_windows(rows));
  summary["written"] = rows.size();
  summary["out"] = a.out;
  return summary;
}

// --- extract ------------------------------------------------------------------

struct ExtractArgs {
  std::string series;
  std::string windows;
  std::string out;
};

Json run_extract(const ExtractArgs& a) {
  const auto series = load_series(a.series);
  const auto rows = parse_windows(read_text_file(a.windows));
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "no windows listed in " + a.windows);
  std::vector<MotionWindow> windows;
  FeatureTable table;
  for (const auto& r : rows) {
    windows.push_back(cut_window(series, r.start, r.width));
    table.start_index.push_back(r.start);
    table.labels.push_back(stroke_of(r.label));
  }
  table.features = extract_features(windows);
  write_file(a.out, serialize_feature_table(table));
  return {{"rows", windows.size()}, {"features", table.features.cols()}, {"out", a.out}};
}

// --- fit-pca ------------------------------------------------------------------

struct PcaArgs {
  std::string features;
  std::string out;
  double retention = 0.95;
  bool no_standardize = false;
};

Json run_fit_pca(const PcaArgs& a) {
  if (!(a.retention > 0.0 && a.retention <= 1.0)) throw Error(ErrorCode::BadConfig, "retention must lie in (0, 1]");
  const auto table = parse_feature_table(read_text_file(a.features));
  const auto model = fit_pca(table.features, {a.retention, !a.no_standardize});
  write_json(a.out, to_json(model));
  const auto c = contribution_rates(model);
  return {{"k", model.k}, {"cumulative", c.cumulative[model.k - 1]}, {"out", a.out}};
}

// --- train / predict ------------------------------------------------------------

struct TrainArgs {
  std::string features;
  std::string pca;
  std::string out;
  std::string model = "dagsvm";
  double lr = 0.01;
  std::size_t epochs = 200;
  double gamma = 0.0;
  double svm_c = 1.0;
  std::uint64_t seed = 7;
  double test_fraction = 0.2;
};

struct LabeledRows {
  std::vector<std::size_t> start;
  std::vector<StrokeLabel> labels;
  Matrix x;
};

Matrix project(const Json& model, const Matrix& x) {
  if (!model.contains("pca") || model.at("pca").is_null()) return x;
  return transform_rows(pca_from_json(model.at("pca")), x);
}

StrokeLabel classify_row(const DagSvmModel* dag, const MlpModel* mlp, std::span<const double> x) {
  return dag != nullptr ? dag_predict(*dag, x) : mlp_predict(*mlp, x);
}

Json run_train(const TrainArgs& a) {
  if (a.model != "dagsvm" && a.model != "mlp") throw Error(ErrorCode::BadConfig, "model must be dagsvm or mlp");
  if (!(a.test_fraction >= 0.0 && a.test_fraction < 1.0)) throw Error(ErrorCode::BadConfig, "test fraction must lie in [0, 1)");
  const auto table = parse_feature_table(read_text_file(a.features));
  LabeledRows labeled;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < table.labels.size(); ++i) {
    if (!table.labels[i]) continue;
    rows.push_back(i);
    labeled.start.push_back(table.start_index[i]);
    labeled.labels.push_back(*table.labels[i]);
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "feature table has no labeled rows");

  Json model;
  model["type"] = "classifier";
  model["pca"] = a.pca.empty() ? Json(nullptr) : read_json_file(a.pca);
  const auto x = project(model, select_rows(table.features, rows));

  const auto split = stratified_split(labeled.labels, a.test_fraction, a.seed);
  const auto xtr = select_rows(x, split.train);
  const auto ytr = select<StrokeLabel>(labeled.labels, split.train);
  Json summary{{"model", a.model}, {"train_rows", split.train.size()}, {"test_rows", split.test.size()}};

  DagSvmModel dag;
  MlpModel mlp;
  const bool use_dag = a.model == "dagsvm";
  if (use_dag) {
    DagSvmOptions opts;
    opts.smo.c = a.svm_c;
    opts.gamma = a.gamma;
    dag = train_dag(xtr, ytr, opts);
    model["classifier"] = to_json(dag);
  } else {
    MlpTrainOptions opts;
    opts.learning_rate = a.lr;
    opts.epochs = a.epochs;
    opts.seed = a.seed;
    auto result = mlp_train(mlp_init(x.cols(), a.seed), xtr, ytr, opts);
    mlp = std::move(result.model);
    model["classifier"] = to_json(mlp);
    summary["epochs_run"] = result.epoch_loss.size();
    summary["final_loss"] = result.epoch_loss.empty() ? 0.0 : result.epoch_loss.back();
  }

  std::vector<std::size_t> test_start;
  std::vector<StrokeLabel> truth;
  std::vector<StrokeLabel> predicted;
  for (auto r : split.test) {
    test_start.push_back(labeled.start[r]);
    truth.push_back(labeled.labels[r]);
    predicted.push_back(classify_row(use_dag ? &dag : nullptr, &mlp, x.row(r)));
  }
  std::sort(test_start.begin(), test_start.end());
  model["split"] = {{"seed", a.seed}, {"test_fraction", a.test_fraction}, {"test_start_index", test_start}};
  write_json(a.out, model);
  if (!truth.empty()) summary["test_accuracy"] = confusion(truth, predicted).accuracy();
  summary["out"] = a.out;
  return summary;
}

struct PredictArgs {
  std::string features;
  std::string model;
  std::string out;
  bool held_out = false;
};

Json run_predict(const PredictArgs& a) {
  const auto model = read_json_file(a.model);
  if (model.value("type", std::string{}) != "classifier" || !model.contains("classifier")) {
    throw Error(ErrorCode::BadModel, a.model + " is not a trained classifier");
  }
  const auto& cj = model.at("classifier");
  const bool use_dag = cj.value("type", std::string{}) == "dagsvm";
  DagSvmModel dag;
  MlpModel mlp;
  if (use_dag) {
    dag = dag_from_json(cj);
  } else {
    mlp = mlp_from_json(cj);
  }
  const auto table = parse_feature_table(read_text_file(a.features));
  const auto x = project(model, table.features);
  const std::size_t expected = use_dag ? dag.models.front().support_vectors.cols() : mlp.input_dim();
  if (x.cols() != expected) throw Error(ErrorCode::DimensionMismatch, "feature width does not match the model");

  std::vector<std::size_t> held;
  if (a.held_out) {
    held = model.at("split").at("test_start_index").get<std::vector<std::size_t>>();
  }
  std::vector<Prediction> out;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    if (a.held_out && !std::binary_search(held.begin(), held.end(), table.start_index[i])) continue;
    out.push_back({table.start_index[i], table.labels[i], classify_row(use_dag ? &dag : nullptr, &mlp, x.row(i))});
  }
  write_file(a.out, serialize_predictions(out));
  Json summary{{"rows", out.size()}};
  std::vector<StrokeLabel> truth;
  std::vector<StrokeLabel> predicted;
  for (const auto& p : out) {
    if (!p.truth) continue;
    truth.push_back(*p.truth);
    predicted.push_back(p.predicted);
  }
  if (!truth.empty()) summary["accuracy"] = confusion(truth, predicted).accuracy();
  summary["out"] = a.out;
  return summary;
}

// --- evaluate ------------------------------------------------------------------

struct EvaluateArgs {
  std::string series;
  std::string windows;
  std::string predictions;
  std::string build_profile;
  std::string profile;
  std::string out;
  std::string csv;
  std::string weights = "ahp";
  bool literal_interval = false;
};

LevelVector level_weights(const std::string& mode) {
  if (mode == "ahp") return ahp_weights(standard_ahp_matrix()).weights;
  if (mode == "eigenvector") return ahp_weights(standard_ahp_matrix(), AhpMethod::Eigenvector).weights;
  if (mode == "published") return published_level_weights();
  throw Error(ErrorCode::BadConfig, "weights must be ahp, eigenvector or published");
}

Json run_evaluate(const EvaluateArgs& a) {
  if (a.build_profile.empty() == a.profile.empty()) {
    throw Error(ErrorCode::BadConfig, "give exactly one of --build-profile and --profile");
  }
  const auto series = load_series(a.series);
  const auto rows = parse_windows(read_text_file(a.windows));
  std::map<std::size_t, StrokeLabel> predicted;
  if (!a.predictions.empty()) {
    for (const auto& p : parse_predictions(read_text_file(a.predictions))) predicted[p.start] = p.predicted;
  }
  std::vector<MotionWindow> windows;
  std::vector<StrokeLabel> strokes;
  for (const auto& r : rows) {
    std::optional<StrokeLabel> s;
    if (!a.predictions.empty()) {
      if (auto it = predicted.find(r.start); it != predicted.end()) s = it->second;
    } else {
      s = stroke_of(r.label);
    }
    if (!s) continue;
    windows.push_back(cut_window(series, r.start, r.width));
    strokes.push_back(*s);
  }
  if (windows.empty()) throw Error(ErrorCode::EmptyInput, "no stroke windows to evaluate");

  if (!a.build_profile.empty()) {
    std::vector<StandardProfile> profiles;
    for (auto s : kAllStrokes) {
      std::vector<MotionWindow> ref;
      for (std::size_t i = 0; i < windows.size(); ++i)
        if (strokes[i] == s) ref.push_back(windows[i]);
      if (ref.size() >= 2) profiles.push_back(build_profile(ref, s));
    }
    if (profiles.empty()) throw Error(ErrorCode::TooFew, "every stroke has fewer than 2 reference windows");
    write_json(a.build_profile, profiles_to_json(profiles));
    return {{"profiles", profiles.size()}, {"reference_windows", windows.size()}, {"out", a.build_profile}};
  }

  const auto loaded = profiles_from_json(read_json_file(a.profile));
  std::vector<bool> have(kNumStrokes, false);
  for (const auto& p : loaded) have[index(p.stroke)] = true;
  std::vector<MotionWindow> scored;
  std::vector<StrokeLabel> scored_strokes;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (!have[index(strokes[i])]) {
      ++skipped;
      continue;
    }
    scored.push_back(windows[i]);
    scored_strokes.push_back(strokes[i]);
  }
  const auto weights = level_weights(a.weights);
  const auto reports = score_windows(scored, scored_strokes, loaded, weights, a.literal_interval);

  Json items = Json::array();
  std::string csv = "stroke,Q1,Q2,Q3,Q4,Q5,Q\n";
  double sum = 0.0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    auto j = to_json(reports[i]);
    Json item{{"start_index", scored[i].start_index}, {"stroke", stroke_name(scored_strokes[i])}};
    item.update(j);
    items.push_back(item);
    csv += stroke_name(scored_strokes[i]);
    for (double q : reports[i].q) csv += ',' + format_double(q);
    csv += ',' + format_double(reports[i].total) + '\n';
    sum += reports[i].total;
  }
  const double mean = reports.empty() ? 0.0 : sum / static_cast<double>(reports.size());
  if (!a.out.empty()) {
    write_json(a.out, Json{{"weights", std::vector<double>(weights.begin(), weights.end())},
                           {"literal_interval", a.literal_interval},
                           {"mean_total", mean},
                           {"windows", items}});
  }
  if (!a.csv.empty()) write_file(a.csv, csv);
  return {{"scored", reports.size()}, {"skipped", skipped}, {"mean_total", mean}};
}

// --- report ------------------------------------------------------------------

struct ReportArgs {
  std::string predictions;
  std::string out;
  double alpha = kDefaultAlpha;
  bool svg = false;
};

Json run_report(const ReportArgs& a) {
  if (!(a.alpha >= 0.0 && a.alpha <= 1.0)) throw Error(ErrorCode::BadConfig, "alpha must lie in [0, 1]");
  std::vector<StrokeLabel> truth;
  std::vector<StrokeLabel> predicted;
  for (const auto& p : parse_predictions(read_text_file(a.predictions))) {
    if (!p.truth) continue;
    truth.push_back(*p.truth);
    predicted.push_back(p.predicted);
  }
  if (truth.empty()) throw Error(ErrorCode::EmptyInput, "no labeled predictions to report");
  const auto m = confusion(truth, predicted);
  const auto report = classification_report(m, {a.alpha});
  fs::create_directories(a.out);
  const auto dir = fs::path(a.out);
  write_json_file((dir / "report.json").string(), to_json(report));
  write_text_file((dir / "confusion.csv").string(), confusion_csv(m));
  if (a.svg) write_text_file((dir / "confusion.svg").string(), confusion_svg(m, "confusion matrix"));
  return {{"rows", truth.size()}, {"accuracy", report.accuracy}, {"macro_f", report.macro_f}, {"out", a.out}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Table-tennis IMU stroke pipeline", "ttskill"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "TOML/INI file of option values; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Cap on OpenMP threads")->check(CLI::PositiveNumber);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a labeled synthetic stroke stream");
  s->add_option("--seed", synth.cfg.seed);
  s->add_option("--strokes-per-class", synth.cfg.strokes_per_class);
  s->add_option("--noise", synth.cfg.noise_sigma);
  s->add_option("--spike-rate", synth.cfg.spike_rate);
  s->add_option("--dropout-rate", synth.cfg.dropout_rate);
  s->add_option("--idle-fraction", synth.cfg.idle_fraction);
  s->add_option("--period", synth.cfg.period, "Stroke duration in seconds");
  s->add_option("--out", synth.out, "Output directory")->required();

  PreprocessArgs pre;
  auto* p = app.add_subcommand("preprocess", "Remove outliers, fill gaps and smooth");
  p->add_option("--in", pre.in)->required()->check(CLI::ExistingFile);
  p->add_option("--out", pre.out)->required();
  p->add_option("--k0", pre.k0);
  p->add_option("--delta-a", pre.delta_a);
  p->add_option("--calibration-samples", pre.calibration_samples, "Leading rest samples that set the default delta-a; 0 uses the whole channel");
  p->add_flag("--no-filter", pre.no_filter);
  p->add_flag("--no-outlier", pre.no_outlier);

  SegmentArgs seg;
  auto* g = app.add_subcommand("segment", "Cut sliding windows, optionally gated");
  g->add_option("--in", seg.in)->required()->check(CLI::ExistingFile);
  g->add_option("--out", seg.out)->required();
  g->add_option("--labels", seg.labels)->check(CLI::ExistingFile);
  g->add_option("--gate", seg.gate, "Activation model to filter windows")->check(CLI::ExistingFile);
  g->add_option("--train-gate", seg.train_gate, "Train an activation model and write it here");
  g->add_option("--window", seg.window)->check(CLI::PositiveNumber);
  g->add_option("--overlap", seg.overlap);
  g->add_option("--svm-c", seg.svm_c);

  ExtractArgs ext;
  auto* e = app.add_subcommand("extract", "Compute the 180 window features");
  e->add_option("--series", ext.series)->required()->check(CLI::ExistingFile);
  e->add_option("--windows", ext.windows)->required()->check(CLI::ExistingFile);
  e->add_option("--out", ext.out)->required();

  PcaArgs pca;
  auto* f = app.add_subcommand("fit-pca", "Fit the feature-space PCA");
  f->add_option("--features", pca.features)->required()->check(CLI::ExistingFile);
  f->add_option("--out", pca.out)->required();
  f->add_option("--retention", pca.retention);
  f->add_flag("--no-standardize", pca.no_standardize);

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train a stroke classifier on a stratified split");
  t->add_option("--features", train.features)->required()->check(CLI::ExistingFile);
  t->add_option("--pca", train.pca)->check(CLI::ExistingFile);
  t->add_option("--out", train.out)->required();
  t->add_option("--model", train.model)->check(CLI::IsMember({"dagsvm", "mlp"}));
  t->add_option("--lr", train.lr);
  t->add_option("--epochs", train.epochs);
  t->add_option("--gamma", train.gamma, "Kernel width; <= 0 picks 1 / (k * var)");
  t->add_option("--svm-c", train.svm_c);
  t->add_option("--seed", train.seed);
  t->add_option("--test-fraction", train.test_fraction);

  PredictArgs pred;
  auto* r = app.add_subcommand("predict", "Classify feature rows");
  r->add_option("--features", pred.features)->required()->check(CLI::ExistingFile);
  r->add_option("--model", pred.model)->required()->check(CLI::ExistingFile);
  r->add_option("--out", pred.out)->required();
  r->add_flag("--held-out", pred.held_out, "Only rows held out during training");

  EvaluateArgs ev;
  auto* v = app.add_subcommand("evaluate", "Build standard profiles or score windows");
  v->add_option("--series", ev.series)->required()->check(CLI::ExistingFile);
  v->add_option("--windows", ev.windows)->required()->check(CLI::ExistingFile);
  v->add_option("--predictions", ev.predictions, "Take each window's stroke from predictions")->check(CLI::ExistingFile);
  v->add_option("--build-profile", ev.build_profile);
  v->add_option("--profile", ev.profile)->check(CLI::ExistingFile);
  v->add_option("--out", ev.out);
  v->add_option("--csv", ev.csv);
  v->add_option("--weights", ev.weights)->check(CLI::IsMember({"ahp", "eigenvector", "published"}));
  v->add_flag("--paper-literal", ev.literal_interval, "Score outside an interval as 1 - exp(-d/k) instead of exp(-d/k)");

  ReportArgs rep;
  auto* o = app.add_subcommand("report", "Confusion matrix and weighted F report");
  o->add_option("--predictions", rep.predictions)->required()->check(CLI::ExistingFile);
  o->add_option("--out", rep.out)->required();
  o->add_option("--alpha", rep.alpha);
  o->add_flag("--svg", rep.svg);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (threads > 0) omp_set_num_threads(threads);
  const auto* sub = app.get_subcommands().front();
  try {
    Json summary;
    const auto name = sub->get_name();
    if (name == "synth") {
      summary = run_synth(synth);
    } else if (name == "preprocess") {
      summary = run_preprocess(pre);
    } else if (name == "segment") {
      summary = run_segment(seg);
    } else if (name == "extract") {
      summary = run_extract(ext);
    } else if (name == "fit-pca") {
      summary = run_fit_pca(pca);
    } else if (name == "train") {
      summary = run_train(train);
    } else if (name == "predict") {
      summary = run_predict(pred);
    } else if (name == "evaluate") {
      summary = run_evaluate(ev);
    } else {
      summary = run_report(rep);
    }
    Json line{{"command", name}, {"status", "ok"}};
    line.update(summary);
    out << line.dump() << '\n';
    return kExitOk;
  } catch (const Error& ex) {
    err << "ttskill " << sub->get_name() << ": " << ex.what() << '\n';
    return kExitData;
  } catch (const std::exception& ex) {
    err << "ttskill " << sub->get_name() << ": " << ex.what() << '\n';
    return kExitData;
  }
}

}  // namespace ttskill::cli
