#pragma once

#include <json.hpp>
#include <string>

#include "hetsel/experiments.hpp"
#include "hetsel/model.hpp"

namespace hetsel {

struct Instance {
  MeasurementModel model = MeasurementModel::linear(CMatrix::Identity(1, 1));
  NoisePartition noise;
  SelectionConstraints constraints;
};

/// Instance schema (1-based sensor indices):
///   {"matrix": [[re,im],...] row-major | "dct": {"n":..,"columns":[..]} |
///    "doa": {"wavelength":..,"positions":[..],"theta":[..],"alpha":[..]},
///    "sets": [[..],..], "sigmas": [..], "keep": [..]}
Instance parse_instance(const nlohmann::json& j);
Instance load_instance(const std::string& path);

nlohmann::json selection_to_json(const SelectionResult& result);

ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);

nlohmann::json trial_record_to_json(const TrialRecord& record);
TrialRecord trial_record_from_json(const nlohmann::json& j);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace hetsel
