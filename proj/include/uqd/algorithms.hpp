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

#ifndef UQDBENCH_ALGORITHMS_HPP
#define UQDBENCH_ALGORITHMS_HPP

#include <cstdint>
#include <string>

#include "uqd/archive.hpp"
#include "uqd/tasks.hpp"
#include "uqd/variation.hpp"

namespace uqd {

enum class Variant {
    MapElites,
    MapElitesRandom,
    MapElitesSampling,
    DeepGrid,
    DeepGridSampling,
    ArchiveSampling,
    ParallelAdaptiveSampling
};

std::string variant_name(Variant v);
Variant parse_variant(const std::string& name);

// Stream-id tags. Every random decision of a generation derives its stream
// from (tag, generation, index...), so results do not depend on evaluation
// order or thread count. Exposed so tests can replay the exact draws.
namespace streams {
inline constexpr std::uint64_t kCvt = 1;
inline constexpr std::uint64_t kInitGenotype = 2;
inline constexpr std::uint64_t kSelect = 3;
inline constexpr std::uint64_t kEval = 4;
inline constexpr std::uint64_t kAdd = 5;
inline constexpr std::uint64_t kReeval = 6;
inline constexpr std::uint64_t kReevalAdd = 7;
inline constexpr std::uint64_t kCorrection = 8;
inline constexpr std::uint64_t kStudy = 9;
} // namespace streams

struct AlgorithmConfig {
    Variant variant = Variant::MapElites;
    int sampling_size = 1024;     // S, per-generation evaluation budget
    int samples_per_offspring = 1; // N, used by the *-sampling variants
    int depth = 1;                 // D
    VariationParams variation;
};

// Fills N and D with the per-variant defaults (N=32 for MAP-Elites-sampling,
// N=8/D=32 for Deep-Grid-sampling, D=32 for Deep-Grid, D=2 for
// Archive-Sampling and Parallel-Adaptive-Sampling).
AlgorithmConfig default_config(Variant variant, int sampling_size);

AdditionRule addition_rule_for(Variant v);
InCellSelector selector_for(Variant v);

struct BudgetPlan {
    int n_offspring = 0;
    int evals_per_offspring = 1;
    int reeval_budget_reserved = 0;
};

// Splits the sampling budget S. Flat single-eval variants spend (S, 1, 0);
// the *-sampling variants (floor(S/N), N, 0); Archive-Sampling and
// Parallel-Adaptive-Sampling reserve k*D evaluations for the archive
// reevaluation and spend the rest on offspring (n_evals each for PAS).
BudgetPlan plan_budget(const AlgorithmConfig& config, int num_cells, int n_evals = 1);

// Lower median of eval_count over all stored records; 1 for an empty archive.
std::int64_t median_evals_number(const Archive& archive);

struct GenerationReport {
    int generation = 0;
    std::int64_t evals_used = 0;
    int added = 0;    // Added or Replaced outcomes
    int rejected = 0;
    double qd_score = 0.0;
    double coverage = 0.0;
    double max_fitness = 0.0; // NaN while the archive is empty
    std::int64_t n_evals = 1; // per-offspring samples this generation
};

Archive make_archive(const AlgorithmConfig& config, std::shared_ptr<const Centroids> centroids);

// Generation 0: a sampling-size worth of uniform-random genotypes, evaluated
// with the variant's per-offspring sample count and added under its rule.
std::pair<Archive, GenerationReport> initialize(const AlgorithmConfig& config, const Task& task,
                                                std::shared_ptr<const Centroids> centroids,
                                                const RngStream& run_stream, int n_threads = 1);

GenerationReport step_map_elites(Archive& archive, const AlgorithmConfig& config, const Task& task,
                                 int generation, const RngStream& run_stream, int n_threads = 1);
GenerationReport step_me_random(Archive& archive, const AlgorithmConfig& config, const Task& task,
                                int generation, const RngStream& run_stream, int n_threads = 1);
GenerationReport step_me_sampling(Archive& archive, const AlgorithmConfig& config, const Task& task,
                                  int generation, const RngStream& run_stream, int n_threads = 1);
GenerationReport step_deep_grid(Archive& archive, const AlgorithmConfig& config, const Task& task,
                                int generation, const RngStream& run_stream, int n_threads = 1);
GenerationReport step_dg_sampling(Archive& archive, const AlgorithmConfig& config, const Task& task,
                                  int generation, const RngStream& run_stream, int n_threads = 1);
GenerationReport step_archive_sampling(Archive& archive, const AlgorithmConfig& config,
                                       const Task& task, int generation,
                                       const RngStream& run_stream, int n_threads = 1);
GenerationReport step_pas(Archive& archive, const AlgorithmConfig& config, const Task& task,
                          int generation, const RngStream& run_stream, int n_threads = 1);

GenerationReport step(Archive& archive, const AlgorithmConfig& config, const Task& task,
                      int generation, const RngStream& run_stream, int n_threads = 1);

} // namespace uqd

#endif
