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

#include "uqd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uqd/parallel.hpp"

namespace uqd {

namespace {

double sample_variance(const std::vector<double>& values)
{
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    // identical draws have exactly zero variance; keeps deterministic tasks
    // out of the rounding noise
    if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; }))
        return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double acc = 0.0;
    for (double v : values) acc += (v - mean) * (v - mean);
    return acc / static_cast<double>(n - 1);
}

double quantile_sorted(const std::vector<double>& sorted, double p)
{
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

} // namespace

double ReevalResult::scalar_descriptor_variance() const
{
    if (descriptor_variance.empty()) return 0.0;
    double acc = 0.0;
    for (double v : descriptor_variance) acc += v;
    return acc / static_cast<double>(descriptor_variance.size());
}

double median_of(std::vector<double> values)
{
    if (values.empty()) throw ContractViolation("median_of: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Descriptor median_per_dimension(std::span<const Descriptor> samples)
{
    if (samples.empty()) throw ContractViolation("median_per_dimension: empty input");
    const std::size_t dim = samples[0].size();
    for (const auto& s : samples)
        if (s.size() != dim)
            throw ContractViolation("median_per_dimension: ragged sample lengths");
    Descriptor out(dim);
    std::vector<double> column(samples.size());
    for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t i = 0; i < samples.size(); ++i) column[i] = samples[i][j];
        out[j] = median_of(column);
    }
    return out;
}

CorrectedArchive corrected_archive(const Archive& archive, const Task& task, int m_reevals,
                                   CorrectionMode mode, const RngStream& stream, int n_threads)
{
    if (m_reevals < 2) throw ConfigurationError("corrected_archive: m_reevals must be >= 2");
    const auto occupied = archive.occupied_cell_indices();
    if (occupied.empty()) throw ContractViolation("corrected_archive: empty archive");

    struct CellOutput {
        ReevalResult result;
        Genotype genotype; // genotype of the cell's best record, kept on the phantom
    };
    std::vector<CellOutput> outputs(occupied.size());

    parallel_for(occupied.size(), n_threads, [&](std::size_t ci) {
        const int c = occupied[ci];
        const auto cidx = static_cast<std::uint64_t>(c);
        const auto& cell = archive.cell(c);
        std::vector<double> fitnesses(static_cast<std::size_t>(m_reevals));
        std::vector<Descriptor> descriptors(static_cast<std::size_t>(m_reevals));
        for (int m = 0; m < m_reevals; ++m) {
            const auto midx = static_cast<std::uint64_t>(m);
            const SolutionRecord* rec;
            if (mode == CorrectionMode::BestOfCell) {
                rec = &archive.best_of(c);
            } else {
                RngStream sel = stream.substream(cidx, midx, 0);
                rec = &select_from_cell(cell, archive.selector(), sel);
            }
            RngStream ev = stream.substream(cidx, midx, 1);
            Evaluation e = task.evaluate(rec->genotype, ev);
            fitnesses[m] = e.fitness;
            descriptors[m] = std::move(e.descriptor);
        }
        CellOutput& out = outputs[ci];
        out.result.cell = c;
        out.result.m = m_reevals;
        out.result.median_fitness = median_of(fitnesses);
        out.result.median_descriptor = median_per_dimension(descriptors);
        out.result.fitness_variance = sample_variance(fitnesses);
        const std::size_t dim = descriptors[0].size();
        out.result.descriptor_variance.resize(dim);
        std::vector<double> column(descriptors.size());
        for (std::size_t j = 0; j < dim; ++j) {
            for (std::size_t i = 0; i < descriptors.size(); ++i) column[i] = descriptors[i][j];
            out.result.descriptor_variance[j] = sample_variance(column);
        }
        out.genotype = archive.best_of(c).genotype;
    });

    CorrectedArchive corrected{
        Archive(archive.centroids_ptr(), 1, AdditionRule::ElitistFlat, InCellSelector::Best),
        {},
        static_cast<std::int64_t>(occupied.size()) * m_reevals};
    RngStream add_stream = stream.substream(streams::kAdd);
    for (std::size_t ci = 0; ci < outputs.size(); ++ci) {
        auto& out = outputs[ci];
        SolutionRecord phantom;
        phantom.genotype = std::move(out.genotype);
        phantom.eval_count = m_reevals;
        phantom.mean_fitness = out.result.median_fitness;
        phantom.mean_descriptor = out.result.median_descriptor;
        corrected.archive.try_add(phantom, add_stream);
        corrected.reevals.emplace(out.result.cell, std::move(out.result));
    }
    return corrected;
}

double qd_score_loss(double training_qd, double corrected_qd)
{
    if (training_qd == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (training_qd - corrected_qd) / training_qd;
}

VarianceNormalizers collect_max_variance(
    std::span<const std::map<int, ReevalResult>* const> result_sets)
{
    VarianceNormalizers norm;
    for (const auto* set : result_sets) {
        for (const auto& [cell, r] : *set) {
            const double dv = r.scalar_descriptor_variance();
            auto [it, inserted] = norm.descriptor.emplace(cell, dv);
            if (!inserted) it->second = std::max(it->second, dv);
            auto [fit, finserted] = norm.fitness.emplace(cell, r.fitness_variance);
            if (!finserted) fit->second = std::max(fit->second, r.fitness_variance);
        }
    }
    return norm;
}

double reproducibility_score(const std::map<int, ReevalResult>& results,
                             const std::map<int, double>& normalizer_per_cell,
                             bool fitness_variant)
{
    double score = 0.0;
    for (const auto& [cell, r] : results) {
        const double v = fitness_variant ? r.fitness_variance : r.scalar_descriptor_variance();
        const auto it = normalizer_per_cell.find(cell);
        const double max_v = it == normalizer_per_cell.end() ? 0.0 : it->second;
        if (max_v <= 0.0) score += 1.0;
        else score += 1.0 - v / max_v;
    }
    return score;
}

double time_to_convergence(std::span<const std::pair<double, double>> series)
{
    if (series.empty()) throw ContractViolation("time_to_convergence: empty series");
    const double final_value = series.back().second;
    const double threshold = 0.95 * final_value;
    for (const auto& [x, value] : series) {
        if (final_value >= 0.0 ? value >= threshold : value <= threshold) return x;
    }
    return series.back().first;
}

std::vector<EstimatorStudyRow> estimator_study(const Archive& archive, const Task& task, int m_max,
                                               std::span<const int> candidate_ms,
                                               const RngStream& stream, int n_threads)
{
    for (int m : candidate_ms)
        if (m < 1 || m > m_max)
            throw ConfigurationError("estimator_study: candidate M out of [1, m_max]");

    struct Solution {
        const Genotype* genotype;
    };
    std::vector<Solution> solutions;
    for (int c = 0; c < archive.num_cells(); ++c)
        for (const auto& r : archive.cell(c)) solutions.push_back({&r.genotype});
    if (solutions.empty()) throw ContractViolation("estimator_study: empty archive");

    const std::size_t n_sol = solutions.size();
    const std::size_t n_cand = candidate_ms.size();
    // err[k][s]: per candidate, per solution
    std::vector<std::vector<double>> err_fit_mean(n_cand, std::vector<double>(n_sol));
    std::vector<std::vector<double>> err_fit_med(n_cand, std::vector<double>(n_sol));
    std::vector<std::vector<double>> err_desc_mean(n_cand, std::vector<double>(n_sol));
    std::vector<std::vector<double>> err_desc_med(n_cand, std::vector<double>(n_sol));

    parallel_for(n_sol, n_threads, [&](std::size_t s) {
        const auto sidx = static_cast<std::uint64_t>(s);
        auto draw = [&](std::uint64_t batch, int count, std::vector<double>& fit,
                        std::vector<Descriptor>& desc) {
            fit.resize(static_cast<std::size_t>(count));
            desc.resize(static_cast<std::size_t>(count));
            for (int j = 0; j < count; ++j) {
                RngStream rs = stream.substream(sidx, batch, static_cast<std::uint64_t>(j));
                Evaluation e = task.evaluate(*solutions[s].genotype, rs);
                fit[j] = e.fitness;
                desc[j] = std::move(e.descriptor);
            }
        };
        auto mean_fit = [](const std::vector<double>& v) {
            double acc = 0.0;
            for (double x : v) acc += x;
            return acc / static_cast<double>(v.size());
        };
        auto mean_desc = [](const std::vector<Descriptor>& v) {
            Descriptor acc(v[0].size(), 0.0);
            for (const auto& d : v)
                for (std::size_t j = 0; j < d.size(); ++j) acc[j] += d[j];
            for (double& x : acc) x /= static_cast<double>(v.size());
            return acc;
        };
        auto dist = [](const Descriptor& a, const Descriptor& b) {
            double acc = 0.0;
            for (std::size_t j = 0; j < a.size(); ++j) acc += (a[j] - b[j]) * (a[j] - b[j]);
            return std::sqrt(acc);
        };

        std::vector<double> gt_fit;
        std::vector<Descriptor> gt_desc;
        draw(0, m_max, gt_fit, gt_desc);
        const double gt_fit_mean = mean_fit(gt_fit);
        const double gt_fit_med = median_of(gt_fit);
        const Descriptor gt_desc_mean = mean_desc(gt_desc);
        const Descriptor gt_desc_med = median_per_dimension(gt_desc);

        for (std::size_t k = 0; k < n_cand; ++k) {
            std::vector<double> fit;
            std::vector<Descriptor> desc;
            draw(k + 1, candidate_ms[k], fit, desc);
            err_fit_mean[k][s] = std::abs(mean_fit(fit) - gt_fit_mean);
            err_fit_med[k][s] = std::abs(median_of(fit) - gt_fit_med);
            err_desc_mean[k][s] = dist(mean_desc(desc), gt_desc_mean);
            err_desc_med[k][s] = dist(median_per_dimension(desc), gt_desc_med);
        }
    });

    std::vector<EstimatorStudyRow> rows(n_cand);
    for (std::size_t k = 0; k < n_cand; ++k) {
        rows[k].m = candidate_ms[k];
        auto fill = [](std::vector<double>& errs, double& q25, double& med, double& q75) {
            std::sort(errs.begin(), errs.end());
            q25 = quantile_sorted(errs, 0.25);
            med = quantile_sorted(errs, 0.5);
            q75 = quantile_sorted(errs, 0.75);
        };
        fill(err_fit_mean[k], rows[k].fitness_mean_err_q25, rows[k].fitness_mean_err_med,
             rows[k].fitness_mean_err_q75);
        fill(err_fit_med[k], rows[k].fitness_median_err_q25, rows[k].fitness_median_err_med,
             rows[k].fitness_median_err_q75);
        fill(err_desc_mean[k], rows[k].descriptor_mean_err_q25, rows[k].descriptor_mean_err_med,
             rows[k].descriptor_mean_err_q75);
        fill(err_desc_med[k], rows[k].descriptor_median_err_q25, rows[k].descriptor_median_err_med,
             rows[k].descriptor_median_err_q75);
    }
    return rows;
}

double qd_score_offset(const Task& task)
{
    return std::max(0.0, -task.spec().fitness_range.first);
}

double offset_qd_score(double raw_qd, int occupied_cells, double offset)
{
    return raw_qd + offset * static_cast<double>(occupied_cells);
}

} // namespace uqd
