#include "ttskill/persist.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ttskill/error.hpp"
#include "ttskill/ingest.hpp"

namespace ttskill {

namespace {

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadModel, std::string(what) + ": " + e.what());
  }
}

Json matrix_json(const Matrix& m) { return m.to_rows(); }

Matrix matrix_from(const Json& j, std::size_t cols_if_empty = 0) {
  auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.empty()) return Matrix(0, cols_if_empty);
  const auto cols = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != cols) throw Error(ErrorCode::BadModel, "ragged matrix");
  }
  return Matrix::from_rows(rows);
}

StrokeLabel label_from(const Json& j) {
  const auto name = j.get<std::string>();
  const auto s = stroke_from_name(name);
  if (!s) throw Error(ErrorCode::BadLabel, "unknown stroke " + name);
  return *s;
}

const char* kind_name(IndicatorKind k) { return k == IndicatorKind::Maximal ? "maximal" : "interval"; }

Json level_json(const LevelVector& v) { return std::vector<double>(v.begin(), v.end()); }

}  // namespace

Json to_json(const LinearSvmModel& model) {
  Json j;
  j["type"] = "linear_svm";
  j["feature_names"] = model.feature_names;
  j["w"] = model.w;
  j["b"] = model.b;
  j["c"] = model.c;
  return j;
}

LinearSvmModel linear_svm_from_json(const Json& j) {
  return guarded("linear svm", [&] {
    LinearSvmModel m;
    m.w = j.at("w").get<std::vector<double>>();
    m.b = j.at("b").get<double>();
    m.c = j.value("c", 1.0);
    m.feature_names = j.value("feature_names", std::vector<std::string>{});
    if (!m.feature_names.empty() && m.feature_names.size() != m.w.size()) {
      throw Error(ErrorCode::BadModel, "linear svm: feature name count mismatch");
    }
    return m;
  });
}

Json to_json(const PcaModel& model) {
  Json j;
  j["type"] = "pca";
  j["retention"] = model.retention;
  j["k"] = model.k;
  j["mean"] = model.mean;
  j["scale"] = model.scale;
  j["eigenvalues"] = model.eigenvalues;
  j["components"] = matrix_json(model.components);
  return j;
}

PcaModel pca_from_json(const Json& j) {
  return guarded("pca", [&] {
    PcaModel m;
    m.retention = j.at("retention").get<double>();
    m.k = j.at("k").get<std::size_t>();
    m.mean = j.at("mean").get<std::vector<double>>();
    m.scale = j.at("scale").get<std::vector<double>>();
    m.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    m.components = matrix_from(j.at("components"), m.mean.size());
    if (m.scale.size() != m.mean.size() || m.components.rows() != m.k ||
        (m.k > 0 && m.components.cols() != m.mean.size())) {
      throw Error(ErrorCode::BadModel, "pca: inconsistent dimensions");
    }
    return m;
  });
}

Json to_json(const KernelSvmModel& model) {
  Json j;
  j["pair"] = {stroke_name(model.class_pair.first), stroke_name(model.class_pair.second)};
  j["gamma"] = model.gamma;
  j["c"] = model.c;
  j["b"] = model.b;
  j["degenerate"] = model.degenerate;
  j["coef"] = model.coef;
  j["support_vectors"] = matrix_json(model.support_vectors);
  return j;
}

KernelSvmModel kernel_svm_from_json(const Json& j) {
  return guarded("kernel svm", [&] {
    KernelSvmModel m;
    const auto& pair = j.at("pair");
    m.class_pair = {label_from(pair.at(0)), label_from(pair.at(1))};
    m.gamma = j.at("gamma").get<double>();
    m.c = j.at("c").get<double>();
    m.b = j.at("b").get<double>();
    m.degenerate = j.value("degenerate", false);
    m.coef = j.at("coef").get<std::vector<double>>();
    m.support_vectors = matrix_from(j.at("support_vectors"));
    if (m.support_vectors.rows() != m.coef.size()) {
      throw Error(ErrorCode::BadModel, "kernel svm: coefficient count mismatch");
    }
    return m;
  });
}

Json to_json(const DagSvmModel& model) {
  Json j;
  j["type"] = "dagsvm";
  Json order = Json::array();
  for (auto s : model.class_order) order.push_back(stroke_name(s));
  j["class_order"] = order;
  Json models = Json::array();
  for (const auto& m : model.models) models.push_back(to_json(m));
  j["models"] = models;
  return j;
}

DagSvmModel dag_from_json(const Json& j) {
  return guarded("dag svm", [&] {
    if (j.value("type", std::string{}) != "dagsvm") throw Error(ErrorCode::BadModel, "not a dagsvm model");
    DagSvmModel m;
    const auto& order = j.at("class_order");
    if (order.size() != kNumStrokes) throw Error(ErrorCode::BadModel, "dag svm: class order must list 6 strokes");
    for (std::size_t i = 0; i < kNumStrokes; ++i) m.class_order[i] = label_from(order.at(i));
    for (const auto& mj : j.at("models")) m.models.push_back(kernel_svm_from_json(mj));
    if (m.models.size() != kNumStrokes * (kNumStrokes - 1) / 2) {
      throw Error(ErrorCode::BadModel, "dag svm: expected 15 pairwise models");
    }
    return m;
  });
}

Json to_json(const MlpModel& model) {
  Json j;
  j["type"] = "mlp";
  j["hidden_activation"] = model.hidden_activation;
  j["layer_sizes"] = model.layer_sizes();
  Json layers = Json::array();
  for (const auto& l : model.layers) {
    Json lj;
    lj["weights"] = matrix_json(l.weights);
    lj["bias"] = l.bias;
    layers.push_back(lj);
  }
  j["layers"] = layers;
  return j;
}

MlpModel mlp_from_json(const Json& j) {
  return guarded("mlp", [&] {
    if (j.value("type", std::string{}) != "mlp") throw Error(ErrorCode::BadModel, "not an mlp model");
    MlpModel m;
    m.hidden_activation = j.value("hidden_activation", std::string("tanh"));
    if (m.hidden_activation != "tanh") throw Error(ErrorCode::BadModel, "unsupported activation " + m.hidden_activation);
    for (const auto& lj : j.at("layers")) {
      DenseLayer l;
      l.weights = matrix_from(lj.at("weights"));
      l.bias = lj.at("bias").get<std::vector<double>>();
      if (l.bias.size() != l.weights.rows()) throw Error(ErrorCode::BadModel, "mlp: bias size mismatch");
      if (!m.layers.empty() && m.layers.back().weights.rows() != l.weights.cols()) {
        throw Error(ErrorCode::BadModel, "mlp: layer shapes do not chain");
      }
      m.layers.push_back(std::move(l));
    }
    if (m.layers.empty() || m.layers.back().weights.rows() != kNumStrokes) {
      throw Error(ErrorCode::BadModel, "mlp: output layer must have 6 units");
    }
    return m;
  });
}

Json to_json(const StandardProfile& profile) {
  Json j;
  j["stroke"] = stroke_name(profile.stroke);
  j["reference_count"] = profile.reference_count;
  Json ind = Json::array();
  for (const auto& s : profile.indicators) {
    Json sj;
    sj["kind"] = kind_name(s.kind);
    if (s.kind == IndicatorKind::Maximal) {
      sj["center"] = s.center;
      sj["up"] = s.up;
      sj["down"] = s.down;
    } else {
      sj["lo"] = s.lo;
      sj["hi"] = s.hi;
      sj["k1"] = s.k1;
      sj["k2"] = s.k2;
    }
    ind.push_back(sj);
  }
  j["indicators"] = ind;
  return j;
}

StandardProfile profile_from_json(const Json& j) {
  return guarded("profile", [&] {
    StandardProfile p;
    p.stroke = label_from(j.at("stroke"));
    p.reference_count = j.value("reference_count", std::size_t{0});
    const auto& ind = j.at("indicators");
    if (ind.size() != kNumIndicators) throw Error(ErrorCode::BadModel, "profile: expected 15 indicators");
    for (std::size_t i = 0; i < kNumIndicators; ++i) {
      const auto& sj = ind.at(i);
      auto& s = p.indicators[i];
      const auto kind = sj.at("kind").get<std::string>();
      if (kind == "maximal") {
        s.kind = IndicatorKind::Maximal;
        s.center = sj.at("center").get<double>();
        s.up = sj.at("up").get<double>();
        s.down = sj.at("down").get<double>();
      } else if (kind == "interval") {
        s.kind = IndicatorKind::Interval;
        s.lo = sj.at("lo").get<double>();
        s.hi = sj.at("hi").get<double>();
        s.k1 = sj.at("k1").get<double>();
        s.k2 = sj.at("k2").get<double>();
      } else {
        throw Error(ErrorCode::BadModel, "profile: unknown indicator kind " + kind);
      }
    }
    return p;
  });
}

Json profiles_to_json(const std::vector<StandardProfile>& profiles) {
  Json j;
  j["type"] = "profiles";
  Json by_stroke = Json::object();
  for (const auto& p : profiles) by_stroke[std::string(stroke_name(p.stroke))] = to_json(p);
  j["profiles"] = by_stroke;
  return j;
}

std::vector<StandardProfile> profiles_from_json(const Json& j) {
  return guarded("profiles", [&] {
    std::vector<StandardProfile> out;
    for (const auto& [name, pj] : j.at("profiles").items()) {
      auto p = profile_from_json(pj);
      if (stroke_name(p.stroke) != name) throw Error(ErrorCode::BadModel, "profiles: key/stroke mismatch for " + name);
      out.push_back(std::move(p));
    }
    return out;
  });
}

Json to_json(const ScoreReport& report) {
  Json j;
  j["q"] = level_json(report.q);
  j["total"] = report.total;
  j["weights"] = level_json(report.weights);
  return j;
}

Json to_json(const ClassificationReport& report) {
  Json j;
  j["accuracy"] = report.accuracy;
  j["alpha"] = report.alpha;
  j["macro_precision"] = report.macro_precision;
  j["macro_recall"] = report.macro_recall;
  j["macro_f"] = report.macro_f;
  Json classes = Json::object();
  for (auto s : kAllStrokes) {
    const auto& c = report.classes[index(s)];
    classes[std::string(stroke_name(s))] = {
        {"precision", c.precision}, {"recall", c.recall}, {"f", c.f}, {"support", c.support}};
  }
  j["classes"] = classes;
  Json counts = Json::array();
  for (const auto& row : report.matrix.counts) counts.push_back(std::vector<std::uint64_t>(row.begin(), row.end()));
  j["confusion"] = counts;
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

Json read_json_file(const std::string& path) {
  const auto text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::BadModel, path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

std::string serialize_feature_table(const FeatureTable& table) {
  const auto n = table.features.rows();
  if (table.start_index.size() != n || table.labels.size() != n) {
    throw Error(ErrorCode::LengthMismatch, "feature table columns differ in length");
  }
  std::string out = "start_index,label";
  for (const auto& name : feature_names()) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (std::size_t r = 0; r < n; ++r) {
    out += std::to_string(table.start_index[r]);
    out += ',';
    if (table.labels[r]) out += stroke_name(*table.labels[r]);
    for (double v : table.features.row(r)) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

FeatureTable parse_feature_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  FeatureTable table;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (line.rfind("start_index", 0) == 0) {
      width = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) - 1;
      continue;
    }
    const auto where = "features line " + std::to_string(line_no);
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() < 3) throw Error(ErrorCode::MalformedRow, where + ": too few fields");
    std::size_t start = 0;
    auto [p, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), start);
    if (ec != std::errc{} || p != fields[0].data() + fields[0].size()) {
      throw Error(ErrorCode::MalformedRow, where + ": bad start_index");
    }
    std::optional<StrokeLabel> label;
    if (!fields[1].empty()) {
      label = stroke_from_name(fields[1]);
      if (!label) throw Error(ErrorCode::BadLabel, where + ": unknown label " + std::string(fields[1]));
    }
    std::vector<double> values;
    for (std::size_t i = 2; i < fields.size(); ++i) {
      double v = 0.0;
      const auto f = fields[i];
      auto [q, e] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (e != std::errc{} || q != f.data() + f.size()) throw Error(ErrorCode::MalformedRow, where + ": bad number");
      values.push_back(v);
    }
    if (width != 0 && values.size() != width) throw Error(ErrorCode::DimensionMismatch, where + ": wrong column count");
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw Error(ErrorCode::DimensionMismatch, where + ": wrong column count");
    }
    table.start_index.push_back(start);
    table.labels.push_back(label);
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "feature table has no rows");
  table.features = Matrix::from_rows(rows);
  return table;
}

}  // namespace ttskill
