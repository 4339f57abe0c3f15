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

#include "uqd/config.hpp"

#include <nlohmann/json.hpp>

#include "uqd/io.hpp"

namespace uqd {

using nlohmann::json;

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback)
{
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigurationError(std::string("config field '") + key + "' has the wrong type");
    }
}

void require_positive(int value, const char* field)
{
    if (value < 1)
        throw ConfigurationError(std::string("config field '") + field + "' must be >= 1");
}

} // namespace

std::unique_ptr<Task> make_task(const TaskConfig& config)
{
    if (config.name == "arm") return std::make_unique<ArmTask>(config.genotype_dim, config.noise);
    if (config.name == "het_sphere")
        return std::make_unique<HetSphereTask>(config.genotype_dim, config.noise);
    throw ConfigurationError("config field 'task.name' must be 'arm' or 'het_sphere', got '" +
                             config.name + "'");
}

std::string correction_mode_name(CorrectionMode mode)
{
    return mode == CorrectionMode::InCellSelector ? "in-cell-selector" : "best-of-cell";
}

CorrectionMode parse_correction_mode(const std::string& name)
{
    if (name == "in-cell-selector") return CorrectionMode::InCellSelector;
    if (name == "best-of-cell") return CorrectionMode::BestOfCell;
    throw ConfigurationError(
        "config field 'correction_mode' must be 'in-cell-selector' or 'best-of-cell', got '" +
        name + "'");
}

ExperimentConfig parse_experiment_config(const json& j)
{
    ExperimentConfig cfg;
    if (!j.is_object()) throw ConfigurationError("config root must be a JSON object");

    if (!j.contains("task") || !j.at("task").is_object())
        throw ConfigurationError("config field 'task' must be an object");
    const json& jt = j.at("task");
    cfg.task.name = get_or<std::string>(jt, "name", "arm");
    cfg.task.genotype_dim = get_or<int>(jt, "genotype_dim", 8);
    cfg.task.noise.fitness_std = get_or<double>(jt, "fitness_std", 0.0);
    cfg.task.noise.descriptor_std = get_or<double>(jt, "descriptor_std", 0.0);
    cfg.task.noise.heteroscedastic_gain = get_or<double>(jt, "heteroscedastic_gain", 0.0);
    if (cfg.task.noise.fitness_std < 0 || cfg.task.noise.descriptor_std < 0 ||
        cfg.task.noise.heteroscedastic_gain < 0)
        throw ConfigurationError("config fields 'task.*_std'/'task.heteroscedastic_gain' must be >= 0");
    require_positive(cfg.task.genotype_dim, "task.genotype_dim");

    if (!j.contains("algorithms") || !j.at("algorithms").is_array() || j.at("algorithms").empty())
        throw ConfigurationError("config field 'algorithms' must be a non-empty array");
    for (const json& ja : j.at("algorithms")) {
        AlgorithmEntry entry;
        if (!ja.contains("variant"))
            throw ConfigurationError("config field 'algorithms[].variant' is required");
        entry.variant = parse_variant(ja.at("variant").get<std::string>());
        entry.samples_per_offspring = get_or<int>(ja, "samples", 0);
        entry.depth = get_or<int>(ja, "depth", 0);
        if (entry.samples_per_offspring < 0)
            throw ConfigurationError("config field 'algorithms[].samples' must be >= 1");
        if (entry.depth < 0)
            throw ConfigurationError("config field 'algorithms[].depth' must be >= 1");
        cfg.algorithms.push_back(entry);
    }

    cfg.sampling_sizes = get_or<std::vector<int>>(j, "sampling_sizes", cfg.sampling_sizes);
    if (cfg.sampling_sizes.empty())
        throw ConfigurationError("config field 'sampling_sizes' must be non-empty");
    for (int s : cfg.sampling_sizes) require_positive(s, "sampling_sizes[]");

    cfg.generations = get_or<int>(j, "generations", cfg.generations);
    require_positive(cfg.generations, "generations");
    cfg.replications = get_or<int>(j, "replications", cfg.replications);
    require_positive(cfg.replications, "replications");
    cfg.niches = get_or<int>(j, "niches", cfg.niches);
    require_positive(cfg.niches, "niches");
    cfg.metric_cadence = get_or<int>(j, "metric_cadence", cfg.metric_cadence);
    require_positive(cfg.metric_cadence, "metric_cadence");
    cfg.m_reevals = get_or<int>(j, "m_reevals", cfg.m_reevals);
    if (cfg.m_reevals < 2) throw ConfigurationError("config field 'm_reevals' must be >= 2");
    cfg.correction_mode = parse_correction_mode(
        get_or<std::string>(j, "correction_mode", "in-cell-selector"));
    cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);

    if (j.contains("cvt")) {
        const json& jc = j.at("cvt");
        cfg.cvt.samples = get_or<int>(jc, "samples", cfg.cvt.samples);
        cfg.cvt.iterations = get_or<int>(jc, "iterations", cfg.cvt.iterations);
        require_positive(cfg.cvt.samples, "cvt.samples");
        require_positive(cfg.cvt.iterations, "cvt.iterations");
    }
    if (cfg.cvt.samples < cfg.niches)
        throw ConfigurationError("config field 'cvt.samples' must be >= 'niches'");

    if (j.contains("variation")) {
        const json& jv = j.at("variation");
        cfg.variation.sigma1 = get_or<double>(jv, "sigma1", cfg.variation.sigma1);
        cfg.variation.sigma2 = get_or<double>(jv, "sigma2", cfg.variation.sigma2);
        cfg.variation.line_per_gene = get_or<bool>(jv, "line_per_gene", false);
        if (cfg.variation.sigma1 < 0 || cfg.variation.sigma2 < 0)
            throw ConfigurationError("config fields 'variation.sigma1/sigma2' must be >= 0");
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path)
{
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw ConfigurationError("config file " + path + " is not valid JSON: " + e.what());
    }
    return parse_experiment_config(j);
}

json experiment_config_to_json(const ExperimentConfig& config)
{
    json j;
    j["task"] = {{"name", config.task.name},
                 {"genotype_dim", config.task.genotype_dim},
                 {"fitness_std", config.task.noise.fitness_std},
                 {"descriptor_std", config.task.noise.descriptor_std},
                 {"heteroscedastic_gain", config.task.noise.heteroscedastic_gain}};
    j["algorithms"] = json::array();
    for (const auto& a : config.algorithms) {
        json ja = {{"variant", variant_name(a.variant)}};
        if (a.samples_per_offspring > 0) ja["samples"] = a.samples_per_offspring;
        if (a.depth > 0) ja["depth"] = a.depth;
        j["algorithms"].push_back(ja);
    }
    j["sampling_sizes"] = config.sampling_sizes;
    j["generations"] = config.generations;
    j["replications"] = config.replications;
    j["niches"] = config.niches;
    j["metric_cadence"] = config.metric_cadence;
    j["m_reevals"] = config.m_reevals;
    j["correction_mode"] = correction_mode_name(config.correction_mode);
    j["seed"] = config.seed;
    j["cvt"] = {{"samples", config.cvt.samples}, {"iterations", config.cvt.iterations}};
    j["variation"] = {{"sigma1", config.variation.sigma1},
                      {"sigma2", config.variation.sigma2},
                      {"line_per_gene", config.variation.line_per_gene}};
    return j;
}

AlgorithmConfig resolve_algorithm(const AlgorithmEntry& entry, int sampling_size,
                                  const VariationParams& variation)
{
    AlgorithmConfig cfg = default_config(entry.variant, sampling_size);
    if (entry.samples_per_offspring > 0) cfg.samples_per_offspring = entry.samples_per_offspring;
    if (entry.depth > 0) cfg.depth = entry.depth;
    cfg.variation = variation;
    return cfg;
}

} // namespace uqd
