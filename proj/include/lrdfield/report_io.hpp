#pragma once

#include <string>

#include <json.hpp>

#include "lrdfield/conditions.hpp"
#include "lrdfield/experiment.hpp"
#include "lrdfield/normalizer.hpp"

namespace lrdfield {

using json = nlohmann::json;

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Strict config parsing: unknown keys anywhere are rejected.
CovarianceModel parse_model(const json& j);
Subordinator parse_subordinator(const json& j);
GridSpec parse_window(const json& j);
NormalizationMethod parse_normalization_method(const std::string& name);

// Full experiment config schema: top-level keys model, subordinator, level,
// windows, replicates, seed, normalization, rank.
ExperimentConfig parse_experiment_config(const json& j);

json model_to_json(const CovarianceModel& m);
json subordinator_to_json(const Subordinator& f);

// Canonical form: sorted keys, no whitespace.
std::string canonical_json(const json& j);

// FNV-1a 64-bit over the canonical form, hex string.
std::string config_hash(const json& j);

json report_to_json(const ExperimentReport& rep);
json condition_report_to_json(const ConditionReport& rep);
json normalization_plan_to_json(const NormalizationPlan& plan);

// RFC-4180 CSV, header row, CRLF, 17 significant digits:
// window_index,replicate,raw,standardized
std::string replicates_csv(const ExperimentReport& rep);
std::string condition_csv(const ConditionReport& rep);

// Self-contained SVG histogram with a standard normal overlay, plus a QQ
// plot against N(0,1).
std::string histogram_svg(const std::vector<double>& samples, const std::string& title);
std::string qq_plot_svg(const std::vector<double>& samples, const std::string& title);

struct RunManifest {
  std::string config_hash;
  std::string tool_version;
  std::uint64_t seed = 0;
  std::string started_utc;
  std::string finished_utc;
  std::vector<std::string> outputs;

  json to_json() const;
};

std::string current_utc_timestamp();

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace lrdfield
