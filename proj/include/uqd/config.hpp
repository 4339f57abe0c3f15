// Copyright 2026 The uqdbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UQDBENCH_CONFIG_HPP
#define UQDBENCH_CONFIG_HPP

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "uqd/algorithms.hpp"
#include "uqd/metrics.hpp"
#include "uqd/tasks.hpp"

namespace uqd {

struct TaskConfig {
    std::string name = "arm"; // "arm" or "het_sphere"
    int genotype_dim = 8;
    NoiseModel noise;
};

struct AlgorithmEntry {
    Variant variant = Variant::MapElites;
    int samples_per_offspring = 0; // 0 = variant default
    int depth = 0;                 // 0 = variant default
};

struct CvtConfig {
    int samples = 50000;
    int iterations = 100;
};

struct ExperimentConfig {
    TaskConfig task;
    std::vector<AlgorithmEntry> algorithms;
    std::vector<int> sampling_sizes{256, 1024, 4096, 16384};
    int generations = 500;
    int replications = 5;
    int niches = 1024;
    int metric_cadence = 50;
    int m_reevals = 512;
    CorrectionMode correction_mode = CorrectionMode::InCellSelector;
    std::uint64_t seed = 1;
    CvtConfig cvt;
    VariationParams variation;
};

std::unique_ptr<Task> make_task(const TaskConfig& config);

// Parses and validates; errors name the offending field.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);
nlohmann::json experiment_config_to_json(const ExperimentConfig& config);

AlgorithmConfig resolve_algorithm(const AlgorithmEntry& entry, int sampling_size,
                                  const VariationParams& variation);

std::string correction_mode_name(CorrectionMode mode);
CorrectionMode parse_correction_mode(const std::string& name);

} // namespace uqd

#endif
