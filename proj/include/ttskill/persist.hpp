#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttskill/classify.hpp"
#include "ttskill/evaluate.hpp"
#include "ttskill/features.hpp"
#include "ttskill/metrics.hpp"
#include "ttskill/reduce.hpp"
#include "ttskill/segment.hpp"

namespace ttskill {

using Json = nlohmann::ordered_json;

Json to_json(const LinearSvmModel& model);
LinearSvmModel linear_svm_from_json(const Json& j);

Json to_json(const PcaModel& model);
PcaModel pca_from_json(const Json& j);

Json to_json(const KernelSvmModel& model);
KernelSvmModel kernel_svm_from_json(const Json& j);

Json to_json(const DagSvmModel& model);
DagSvmModel dag_from_json(const Json& j);

Json to_json(const MlpModel& model);
MlpModel mlp_from_json(const Json& j);

Json to_json(const StandardProfile& profile);
StandardProfile profile_from_json(const Json& j);

/// Profiles keyed by stroke name.
Json profiles_to_json(const std::vector<StandardProfile>& profiles);
std::vector<StandardProfile> profiles_from_json(const Json& j);

Json to_json(const ScoreReport& report);
Json to_json(const ClassificationReport& report);

/// Reads a whole file; throws Error(Io).
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

/// Feature table: `start_index,label,<180 feature names>`; label is a stroke
/// name or empty when unknown.
struct FeatureTable {
  std::vector<std::size_t> start_index;
  std::vector<std::optional<StrokeLabel>> labels;
  Matrix features;
};

std::string serialize_feature_table(const FeatureTable& table);
FeatureTable parse_feature_table(const std::string& text);

}  // namespace ttskill
