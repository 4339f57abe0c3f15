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

#ifndef UQDBENCH_METRICS_HPP
#define UQDBENCH_METRICS_HPP

#include <map>
#include <span>
#include <vector>

#include "uqd/algorithms.hpp"
#include "uqd/archive.hpp"
#include "uqd/tasks.hpp"

namespace uqd {

// Medians and sample variances of M reevaluations of one archive cell.
struct ReevalResult {
    int cell = -1;
    int m = 0;
    double median_fitness = 0.0;
    Descriptor median_descriptor;
    double fitness_variance = 0.0;
    std::vector<double> descriptor_variance; // per dimension, sample variance

    // Mean of the per-dimension variances.
    double scalar_descriptor_variance() const;
};

double median_of(std::vector<double> values); // even count: mean of middle two
Descriptor median_per_dimension(std::span<const Descriptor> samples);

enum class CorrectionMode {
    InCellSelector, // sample each cell M times with the archive's selector
    BestOfCell      // always reevaluate the best record of the cell
};

struct CorrectedArchive {
    Archive archive; // flat elitist archive of phantom records on the same centroids
    std::map<int, ReevalResult> reevals; // keyed by the training-archive cell
    std::int64_t evals_used = 0;         // excluded from algorithm budgets
};

// Rebuilds an archive from medians of M reevaluations per occupied cell.
// Collisions caused by descriptor drift resolve through elitist addition.
CorrectedArchive corrected_archive(const Archive& archive, const Task& task, int m_reevals,
                                   CorrectionMode mode, const RngStream& stream,
                                   int n_threads = 1);

// (training - corrected) / training; NaN when training == 0.
double qd_score_loss(double training_qd, double corrected_qd);

struct VarianceNormalizers {
    std::map<int, double> descriptor; // per cell, max scalar descriptor variance
    std::map<int, double> fitness;    // per cell, max fitness variance
};

// Per-cell maxima across every result set of a comparison.
VarianceNormalizers collect_max_variance(
    std::span<const std::map<int, ReevalResult>* const> result_sets);

// Sum over occupied cells of 1 - variance / normalizer; cells whose
// normalizer is zero contribute 1.
double reproducibility_score(const std::map<int, ReevalResult>& results,
                             const std::map<int, double>& normalizer_per_cell,
                             bool fitness_variant = false);

// Smallest x whose value reaches 95% of the final series value, measured
// from 0 (so >= 0.95 * final for positive finals, <= 0.95 * final for
// negative ones).
double time_to_convergence(std::span<const std::pair<double, double>> series);

struct EstimatorStudyRow {
    int m = 0;
    // Median and quartiles over solutions of |estimate - ground truth|
    // for the mean and median estimators, in fitness and descriptor space.
    double fitness_mean_err_q25 = 0, fitness_mean_err_med = 0, fitness_mean_err_q75 = 0;
    double fitness_median_err_q25 = 0, fitness_median_err_med = 0, fitness_median_err_q75 = 0;
    double descriptor_mean_err_q25 = 0, descriptor_mean_err_med = 0, descriptor_mean_err_q75 = 0;
    double descriptor_median_err_q25 = 0, descriptor_median_err_med = 0,
           descriptor_median_err_q75 = 0;
};

// Ground truth from m_max fresh draws per stored solution, then estimation
// errors from m fresh draws for every candidate m.
std::vector<EstimatorStudyRow> estimator_study(const Archive& archive, const Task& task, int m_max,
                                               std::span<const int> candidate_ms,
                                               const RngStream& stream, int n_threads = 1);

// Per-cell fitness offset that keeps reported QD-Scores positive; derived
// from the lower end of the task's fitness range.
double qd_score_offset(const Task& task);

// raw QD-Score plus offset * occupied cells.
double offset_qd_score(double raw_qd, int occupied_cells, double offset);

// One row of the per-generation metrics log. QD-Scores are reported both
// raw and offset; loss and convergence use the offset values, whose sign is
// stable. Reproducibility in per-run rows is self-normalized; the summary
// recomputes it with normalizers shared across the whole comparison.
struct MetricsReport {
    int generation = 0;
    std::int64_t evals_cumulative = 0;
    std::int64_t metric_evals_cumulative = 0;
    int added = 0;
    int rejected = 0;
    std::int64_t n_evals = 1;
    double qd_score_raw = 0, qd_score = 0, coverage = 0, max_fitness = 0;
    double corrected_qd_score_raw = 0, corrected_qd_score = 0;
    double corrected_coverage = 0, corrected_max_fitness = 0;
    double qd_score_loss = 0;
    double reproducibility_score = 0;
    double fitness_reproducibility_score = 0;
    double wall_clock_s = 0; // logged separately from the deterministic CSV
};

} // namespace uqd

#endif
