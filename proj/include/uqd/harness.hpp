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

#ifndef UQDBENCH_HARNESS_HPP
#define UQDBENCH_HARNESS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uqd/config.hpp"
#include "uqd/metrics.hpp"
#include "uqd/stats.hpp"

namespace uqd {

enum class RunStatus { Ok, Skipped, Failed };

struct RunRecord {
    std::string task;
    std::string algorithm;
    int sampling_size = 0;
    int replication = 0;
    std::uint64_t run_seed = 0;
    RunStatus status = RunStatus::Ok;
    std::string note; // skip or failure reason

    std::int64_t total_evals = 0;
    std::int64_t total_metric_evals = 0;
    double final_qd_score = 0;            // training, offset
    double final_corrected_qd_score = 0;  // offset
    double final_corrected_qd_score_raw = 0;
    double final_corrected_coverage = 0;
    double qd_score_loss = 0;
    double reproducibility_score = 0;         // cross-run normalizers
    double fitness_reproducibility_score = 0; // cross-run normalizers
    double tt_conv_s = 0;
    double tt_conv_evals = 0;
    double wall_s = 0;
    std::string dir;
};

struct ExperimentResult {
    std::vector<RunRecord> runs;
    std::vector<std::string> notices;
    std::string out_dir;
};

struct RunOutput {
    RunRecord record;
    std::map<int, ReevalResult> final_reevals;
};

// One (task, algorithm, sampling-size, replication) run: initialize, step
// through every generation, log metrics at the configured cadence, write
// the per-run artifacts under out_dir. Metric reevaluations never touch the
// algorithm's budget counters.
RunOutput run_single(const ExperimentConfig& config, const Task& task,
                     const AlgorithmEntry& entry, int sampling_size, int replication,
                     std::shared_ptr<const Centroids> centroids, const std::string& out_dir,
                     int n_threads);

// The full grid of runs. Archive-Sampling and Parallel-Adaptive-Sampling
// entries are skipped with a notice when the sampling-size does not exceed
// niches * depth. A tessellation is shared per replication so algorithms and
// sampling-sizes stay comparable. Writes runs/<key>/..., summary.csv,
// significance.csv and pareto.svg under out_dir.
ExperimentResult run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                                int n_threads);

// Derived seeds, exposed for tools that re-run pieces of an experiment.
std::uint64_t tessellation_stream_id(const ExperimentConfig& config, int replication);
std::uint64_t run_stream_id(const ExperimentConfig& config, const std::string& algorithm,
                            int sampling_size, int replication);

std::string run_dir_name(const std::string& task, const std::string& algorithm, int sampling_size,
                         int replication);

void write_summary_csv(const std::string& path, const std::vector<RunRecord>& runs);
void write_significance_csv(const std::string& path, const std::vector<RunRecord>& runs);
void write_pareto_svg(const std::string& path, const std::vector<RunRecord>& runs);

} // namespace uqd

#endif
