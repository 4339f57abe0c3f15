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

#include "uqd/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "uqd/io.hpp"
#include "uqd/parallel.hpp"
#include "uqd/svg.hpp"

namespace uqd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kRunTag = 10;

std::string algo_label(const AlgorithmEntry& entry)
{
    std::string label = variant_name(entry.variant);
    if (entry.samples_per_offspring > 0)
        label += "-N" + std::to_string(entry.samples_per_offspring);
    if (entry.depth > 0) label += "-D" + std::to_string(entry.depth);
    return label;
}

double median_doubles(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string metrics_csv_header()
{
    return "generation,evals_cumulative,metric_evals_cumulative,added,rejected,n_evals,"
           "qd_score_raw,qd_score,coverage,max_fitness,"
           "corrected_qd_score_raw,corrected_qd_score,corrected_coverage,corrected_max_fitness,"
           "qd_score_loss,reproducibility_score,fitness_reproducibility_score\n";
}

void append_metrics_row(std::string& csv, const MetricsReport& r)
{
    std::ostringstream row;
    row << r.generation << ',' << r.evals_cumulative << ',' << r.metric_evals_cumulative << ','
        << r.added << ',' << r.rejected << ',' << r.n_evals << ',' << fmt17(r.qd_score_raw) << ','
        << fmt17(r.qd_score) << ',' << fmt17(r.coverage) << ',' << fmt17(r.max_fitness) << ','
        << fmt17(r.corrected_qd_score_raw) << ',' << fmt17(r.corrected_qd_score) << ','
        << fmt17(r.corrected_coverage) << ',' << fmt17(r.corrected_max_fitness) << ','
        << fmt17(r.qd_score_loss) << ',' << fmt17(r.reproducibility_score) << ','
        << fmt17(r.fitness_reproducibility_score) << '\n';
    csv += row.str();
}

void write_reevals_csv(const std::string& path, const std::map<int, ReevalResult>& reevals,
                       int descriptor_dim)
{
    std::string csv = "cell,m,median_fitness,fitness_variance,scalar_descriptor_variance";
    for (int j = 0; j < descriptor_dim; ++j) csv += ",median_desc_" + std::to_string(j);
    for (int j = 0; j < descriptor_dim; ++j) csv += ",desc_variance_" + std::to_string(j);
    csv += "\n";
    for (const auto& [cell, r] : reevals) {
        csv += std::to_string(cell) + "," + std::to_string(r.m) + "," + fmt17(r.median_fitness) +
               "," + fmt17(r.fitness_variance) + "," + fmt17(r.scalar_descriptor_variance());
        for (double v : r.median_descriptor) csv += "," + fmt17(v);
        for (double v : r.descriptor_variance) csv += "," + fmt17(v);
        csv += "\n";
    }
    write_text_file(path, csv);
}

std::map<int, double> best_of_cell_values(const Archive& archive)
{
    std::map<int, double> values;
    for (int c : archive.occupied_cell_indices()) values[c] = archive.best_of(c).mean_fitness;
    return values;
}

std::mutex g_log_mutex;

void log_line(const std::string& line)
{
    std::lock_guard<std::mutex> lock(g_log_mutex);
    std::cout << line << "\n";
}

} // namespace

std::uint64_t tessellation_stream_id(const ExperimentConfig& config, int replication)
{
    return RngStream(config.seed, 0)
        .substream(streams::kCvt, fnv1a64(config.task.name),
                   static_cast<std::uint64_t>(replication))
        .id();
}

std::uint64_t run_stream_id(const ExperimentConfig& config, const std::string& algorithm,
                            int sampling_size, int replication)
{
    return RngStream(config.seed, 0)
        .substream(kRunTag, fnv1a64(config.task.name), fnv1a64(algorithm),
                   static_cast<std::uint64_t>(sampling_size),
                   static_cast<std::uint64_t>(replication))
        .id();
}

std::string run_dir_name(const std::string& task, const std::string& algorithm, int sampling_size,
                         int replication)
{
    return task + "_" + algorithm + "_S" + std::to_string(sampling_size) + "_r" +
           std::to_string(replication);
}

RunOutput run_single(const ExperimentConfig& config, const Task& task,
                     const AlgorithmEntry& entry, int sampling_size, int replication,
                     std::shared_ptr<const Centroids> centroids, const std::string& out_dir,
                     int n_threads)
{
    const std::string label = algo_label(entry);
    const AlgorithmConfig algo = resolve_algorithm(entry, sampling_size, config.variation);
    const RngStream run_stream(config.seed, run_stream_id(config, label, sampling_size, replication));
    const double offset = qd_score_offset(task);

    RunOutput out;
    out.record.task = config.task.name;
    out.record.algorithm = label;
    out.record.sampling_size = sampling_size;
    out.record.replication = replication;
    out.record.run_seed = run_stream.id();
    out.record.dir = out_dir;

    fs::create_directories(out_dir);
    save_centroids_csv(*centroids, out_dir + "/centroids.csv");

    std::string metrics_csv = metrics_csv_header();
    std::string timings_csv = "generation,algo_wall_s_cumulative,evals_cumulative\n";

    std::int64_t evals = 0;
    std::int64_t metric_evals = 0;
    double algo_wall_s = 0.0;
    std::vector<std::pair<double, double>> qd_by_seconds;
    std::vector<std::pair<double, double>> qd_by_evals;
    std::map<int, ReevalResult> final_reevals;
    std::optional<Archive> corrected_final;

    const auto t_start = std::chrono::steady_clock::now();

    auto timed = [&algo_wall_s](auto&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        auto result = fn();
        algo_wall_s += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return result;
    };

    auto [archive, init_report] = timed([&] {
        return initialize(algo, task, centroids, run_stream, n_threads);
    });
    evals += init_report.evals_used;

    auto log_metrics = [&](const GenerationReport& report, int gen) {
        MetricsReport row;
        row.generation = gen;
        row.evals_cumulative = evals;
        row.added = report.added;
        row.rejected = report.rejected;
        row.n_evals = report.n_evals;
        row.qd_score_raw = archive.qd_score();
        row.qd_score = offset_qd_score(row.qd_score_raw, archive.occupied_cells(), offset);
        row.coverage = archive.coverage();
        row.max_fitness = report.max_fitness;
        if (archive.occupied_cells() > 0) {
            const auto corrected =
                corrected_archive(archive, task, config.m_reevals, config.correction_mode,
                                  run_stream.substream(streams::kCorrection,
                                                       static_cast<std::uint64_t>(gen)),
                                  n_threads);
            metric_evals += corrected.evals_used;
            row.corrected_qd_score_raw = corrected.archive.qd_score();
            row.corrected_qd_score = offset_qd_score(row.corrected_qd_score_raw,
                                                     corrected.archive.occupied_cells(), offset);
            row.corrected_coverage = corrected.archive.coverage();
            row.corrected_max_fitness = corrected.archive.occupied_cells() > 0
                                            ? corrected.archive.max_fitness()
                                            : std::numeric_limits<double>::quiet_NaN();
            row.qd_score_loss = qd_score_loss(row.qd_score, row.corrected_qd_score);
            // Self-normalized within this run; the experiment summary applies
            // normalizers shared across every run of the comparison.
            const std::map<int, ReevalResult>* sets[] = {&corrected.reevals};
            const auto norm = collect_max_variance(sets);
            row.reproducibility_score = reproducibility_score(corrected.reevals, norm.descriptor);
            row.fitness_reproducibility_score =
                reproducibility_score(corrected.reevals, norm.fitness, true);
            if (gen == config.generations) {
                final_reevals = corrected.reevals;
                corrected_final.emplace(corrected.archive);
            }
        } else {
            row.corrected_qd_score_raw = std::numeric_limits<double>::quiet_NaN();
            row.corrected_qd_score = std::numeric_limits<double>::quiet_NaN();
            row.corrected_coverage = 0.0;
            row.corrected_max_fitness = std::numeric_limits<double>::quiet_NaN();
            row.qd_score_loss = std::numeric_limits<double>::quiet_NaN();
        }
        row.metric_evals_cumulative = metric_evals;
        append_metrics_row(metrics_csv, row);
        qd_by_seconds.emplace_back(algo_wall_s, row.corrected_qd_score);
        qd_by_evals.emplace_back(static_cast<double>(evals), row.corrected_qd_score);
        return row;
    };

    timings_csv += "0," + fmt17(algo_wall_s) + ",0\n";
    MetricsReport last_row = log_metrics(init_report, 0);

    for (int gen = 1; gen <= config.generations; ++gen) {
        const GenerationReport report = timed([&] {
            return step(archive, algo, task, gen, run_stream, n_threads);
        });
        evals += report.evals_used;
        timings_csv += std::to_string(gen) + "," + fmt17(algo_wall_s) + "," +
                       std::to_string(evals) + "\n";
        if (gen % config.metric_cadence == 0 || gen == config.generations)
            last_row = log_metrics(report, gen);
    }

    write_text_file(out_dir + "/metrics.csv", metrics_csv);
    write_text_file(out_dir + "/timings.csv", timings_csv);
    archive.save_csv(out_dir + "/archive.csv");
    if (corrected_final) corrected_final->save_csv(out_dir + "/corrected_archive.csv");
    write_reevals_csv(out_dir + "/reevals.csv", final_reevals, task.spec().descriptor_dim);

    json manifest;
    manifest["task"] = {{"name", config.task.name},
                        {"genotype_dim", config.task.genotype_dim},
                        {"fitness_std", config.task.noise.fitness_std},
                        {"descriptor_std", config.task.noise.descriptor_std},
                        {"heteroscedastic_gain", config.task.noise.heteroscedastic_gain}};
    manifest["algorithm"] = {{"variant", variant_name(algo.variant)},
                             {"label", label},
                             {"samples_per_offspring", algo.samples_per_offspring},
                             {"depth", algo.depth}};
    manifest["sampling_size"] = sampling_size;
    manifest["replication"] = replication;
    manifest["niches"] = config.niches;
    manifest["generations"] = config.generations;
    manifest["m_reevals"] = config.m_reevals;
    manifest["correction_mode"] = correction_mode_name(config.correction_mode);
    manifest["seed"] = config.seed;
    manifest["run_stream_id"] = run_stream.id();
    manifest["variation"] = {{"sigma1", algo.variation.sigma1}, {"sigma2", algo.variation.sigma2}};
    write_text_file(out_dir + "/run.json", manifest.dump(2) + "\n");

    if (task.spec().descriptor_dim == 2) {
        const auto range = task.spec().fitness_range;
        render_cell_heatmap(out_dir + "/archive_fitness.svg", *centroids,
                            best_of_cell_values(archive), range.first, range.second,
                            label + " archive, best-of-cell mean fitness");
        if (corrected_final)
            render_cell_heatmap(out_dir + "/corrected_fitness.svg", *centroids,
                                best_of_cell_values(*corrected_final), range.first, range.second,
                                label + " corrected archive, median fitness");
        std::map<int, double> variances;
        double max_var = 0.0;
        for (const auto& [cell, r] : final_reevals) {
            variances[cell] = r.scalar_descriptor_variance();
            max_var = std::max(max_var, variances[cell]);
        }
        if (!variances.empty())
            render_cell_heatmap(out_dir + "/descriptor_variance.svg", *centroids, variances, 0.0,
                                max_var > 0 ? max_var : 1.0,
                                label + " descriptor variance of reevaluations");
    }

    out.record.total_evals = evals;
    out.record.total_metric_evals = metric_evals;
    out.record.final_qd_score = last_row.qd_score;
    out.record.final_corrected_qd_score = last_row.corrected_qd_score;
    out.record.final_corrected_qd_score_raw = last_row.corrected_qd_score_raw;
    out.record.final_corrected_coverage = last_row.corrected_coverage;
    out.record.qd_score_loss = last_row.qd_score_loss;
    out.record.tt_conv_s = time_to_convergence(qd_by_seconds);
    out.record.tt_conv_evals = time_to_convergence(qd_by_evals);
    out.record.wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    out.final_reevals = std::move(final_reevals);
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                                int n_threads)
{
    ExperimentResult result;
    result.out_dir = out_dir;
    fs::create_directories(out_dir + "/runs");

    // Reject colliding labels up front; run keys must be unique.
    {
        std::vector<std::string> labels;
        for (const auto& entry : config.algorithms) labels.push_back(algo_label(entry));
        auto sorted = labels;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ConfigurationError("config field 'algorithms' contains duplicate entries");
    }

    const auto task = make_task(config.task);

    // One tessellation per replication, shared by every algorithm and
    // sampling-size of that replication.
    std::vector<std::shared_ptr<const Centroids>> tessellations(config.replications);
    for (int rep = 0; rep < config.replications; ++rep) {
        RngStream cvt_stream(config.seed, tessellation_stream_id(config, rep));
        tessellations[rep] = std::make_shared<const Centroids>(
            generate_cvt(config.niches, task->spec().descriptor_dim, config.cvt.samples,
                         config.cvt.iterations, cvt_stream, n_threads));
    }

    struct PlannedRun {
        AlgorithmEntry entry;
        int sampling_size;
        int replication;
        bool skipped;
        std::string note;
    };
    std::vector<PlannedRun> planned;
    for (const auto& entry : config.algorithms) {
        for (int s : config.sampling_sizes) {
            const AlgorithmConfig algo = resolve_algorithm(entry, s, config.variation);
            const bool needs_reserve = entry.variant == Variant::ArchiveSampling ||
                                       entry.variant == Variant::ParallelAdaptiveSampling;
            std::string note;
            bool skip = false;
            if (needs_reserve && s <= config.niches * algo.depth) {
                skip = true;
                note = algo_label(entry) + " undefined for sampling_size " + std::to_string(s) +
                       " <= niches*depth = " + std::to_string(config.niches * algo.depth);
            }
            for (int rep = 0; rep < config.replications; ++rep)
                planned.push_back({entry, s, rep, skip, note});
        }
    }

    std::vector<RunOutput> outputs(planned.size());
    const int n_real = static_cast<int>(
        std::count_if(planned.begin(), planned.end(), [](const PlannedRun& p) { return !p.skipped; }));
    const int outer = std::max(1, std::min(n_threads, n_real));
    const int inner = std::max(1, n_threads / outer);

    parallel_for(planned.size(), outer, [&](std::size_t i) {
        const PlannedRun& plan = planned[i];
        const std::string label = algo_label(plan.entry);
        RunOutput& out = outputs[i];
        if (plan.skipped) {
            out.record.task = config.task.name;
            out.record.algorithm = label;
            out.record.sampling_size = plan.sampling_size;
            out.record.replication = plan.replication;
            out.record.status = RunStatus::Skipped;
            out.record.note = plan.note;
            return;
        }
        const std::string dir =
            out_dir + "/runs/" +
            run_dir_name(config.task.name, label, plan.sampling_size, plan.replication);
        try {
            out = run_single(config, *task, plan.entry, plan.sampling_size, plan.replication,
                             tessellations[plan.replication], dir, inner);
            log_line("[run] " + config.task.name + " " + label + " S=" +
                     std::to_string(plan.sampling_size) + " rep=" +
                     std::to_string(plan.replication) + " done in " +
                     fmt17(out.record.wall_s).substr(0, 6) + "s");
        } catch (const std::exception& e) {
            out.record.task = config.task.name;
            out.record.algorithm = label;
            out.record.sampling_size = plan.sampling_size;
            out.record.replication = plan.replication;
            out.record.status = RunStatus::Failed;
            out.record.note = e.what();
            out.record.dir = dir;
            log_line("[run] " + config.task.name + " " + label + " S=" +
                     std::to_string(plan.sampling_size) + " rep=" +
                     std::to_string(plan.replication) + " FAILED: " + e.what());
        }
    });

    // Reproducibility scores need per-cell normalizers shared across the
    // whole comparison, so they are computed after every run finished.
    std::vector<const std::map<int, ReevalResult>*> sets;
    for (const auto& out : outputs)
        if (out.record.status == RunStatus::Ok) sets.push_back(&out.final_reevals);
    const VarianceNormalizers norm = collect_max_variance(sets);
    for (auto& out : outputs) {
        if (out.record.status != RunStatus::Ok) continue;
        out.record.reproducibility_score = reproducibility_score(out.final_reevals, norm.descriptor);
        out.record.fitness_reproducibility_score =
            reproducibility_score(out.final_reevals, norm.fitness, true);
        if (task->spec().descriptor_dim == 2 && !out.final_reevals.empty()) {
            std::map<int, double> values;
            for (const auto& [cell, r] : out.final_reevals) {
                const auto it = norm.descriptor.find(cell);
                const double max_v = it == norm.descriptor.end() ? 0.0 : it->second;
                values[cell] =
                    max_v <= 0.0 ? 1.0 : 1.0 - r.scalar_descriptor_variance() / max_v;
            }
            render_cell_heatmap(out.record.dir + "/reproducibility.svg",
                                *tessellations[out.record.replication], values, 0.0, 1.0,
                                out.record.algorithm + " per-cell 1 - normalized variance");
        }
    }

    for (auto& out : outputs) {
        if (out.record.status == RunStatus::Skipped)
            result.notices.push_back("skipped: " + out.record.note);
        result.runs.push_back(std::move(out.record));
    }
    for (const auto& notice : result.notices) log_line("[notice] " + notice);

    write_summary_csv(out_dir + "/summary.csv", result.runs);
    write_significance_csv(out_dir + "/significance.csv", result.runs);
    write_pareto_svg(out_dir + "/pareto.svg", result.runs);
    return result;
}

void write_summary_csv(const std::string& path, const std::vector<RunRecord>& runs)
{
    std::string csv =
        "task,algorithm,sampling_size,replication,run_seed,status,note,total_evals,"
        "total_metric_evals,final_qd_score,final_corrected_qd_score,"
        "final_corrected_qd_score_raw,final_corrected_coverage,qd_score_loss,"
        "reproducibility_score,fitness_reproducibility_score,tt_conv_s,tt_conv_evals,wall_s,dir\n";
    for (const auto& r : runs) {
        const char* status = r.status == RunStatus::Ok ? "ok"
                             : r.status == RunStatus::Skipped ? "skipped" : "failed";
        std::string note = r.note;
        std::replace(note.begin(), note.end(), ',', ';');
        csv += r.task + "," + r.algorithm + "," + std::to_string(r.sampling_size) + "," +
               std::to_string(r.replication) + "," + std::to_string(r.run_seed) + "," + status +
               "," + note + "," + std::to_string(r.total_evals) + "," +
               std::to_string(r.total_metric_evals) + "," + fmt17(r.final_qd_score) + "," +
               fmt17(r.final_corrected_qd_score) + "," + fmt17(r.final_corrected_qd_score_raw) +
               "," + fmt17(r.final_corrected_coverage) + "," + fmt17(r.qd_score_loss) + "," +
               fmt17(r.reproducibility_score) + "," + fmt17(r.fitness_reproducibility_score) +
               "," + fmt17(r.tt_conv_s) + "," + fmt17(r.tt_conv_evals) + "," + fmt17(r.wall_s) +
               "," + r.dir + "\n";
    }
    write_text_file(path, csv);
}

void write_significance_csv(const std::string& path, const std::vector<RunRecord>& runs)
{
    // Pairwise two-sided rank-sum tests on the final corrected QD-Score,
    // Bonferroni-corrected by the total number of comparisons.
    std::vector<int> sizes;
    std::vector<std::string> algos;
    for (const auto& r : runs) {
        if (r.status != RunStatus::Ok) continue;
        if (std::find(sizes.begin(), sizes.end(), r.sampling_size) == sizes.end())
            sizes.push_back(r.sampling_size);
        if (std::find(algos.begin(), algos.end(), r.algorithm) == algos.end())
            algos.push_back(r.algorithm);
    }
    struct Row {
        int s;
        std::string a, b;
        std::size_t na, nb;
        double p;
    };
    std::vector<Row> rows;
    auto values_of = [&runs](const std::string& algo, int s) {
        std::vector<double> v;
        for (const auto& r : runs)
            if (r.status == RunStatus::Ok && r.algorithm == algo && r.sampling_size == s)
                v.push_back(r.final_corrected_qd_score);
        return v;
    };
    for (int s : sizes) {
        for (std::size_t i = 0; i < algos.size(); ++i) {
            for (std::size_t j = i + 1; j < algos.size(); ++j) {
                const auto a = values_of(algos[i], s);
                const auto b = values_of(algos[j], s);
                if (a.size() < 3 || b.size() < 3) continue;
                rows.push_back({s, algos[i], algos[j], a.size(), b.size(), rank_sum_test(a, b)});
            }
        }
    }
    const int m = std::max<std::size_t>(1, rows.size());
    std::string csv = "sampling_size,algorithm_a,algorithm_b,n_a,n_b,p_value,p_bonferroni,m\n";
    for (const auto& row : rows)
        csv += std::to_string(row.s) + "," + row.a + "," + row.b + "," + std::to_string(row.na) +
               "," + std::to_string(row.nb) + "," + fmt17(row.p) + "," +
               fmt17(bonferroni(row.p, m)) + "," + std::to_string(m) + "\n";
    write_text_file(path, csv);
}

void write_pareto_svg(const std::string& path, const std::vector<RunRecord>& runs)
{
    // Coordinate-wise medians over replications per (algorithm, sampling-size).
    struct Key {
        std::string algo;
        int s;
        bool operator<(const Key& other) const
        {
            return std::tie(algo, s) < std::tie(other.algo, other.s);
        }
    };
    std::map<Key, std::vector<std::pair<double, double>>> groups;
    for (const auto& r : runs)
        if (r.status == RunStatus::Ok)
            groups[{r.algorithm, r.sampling_size}].emplace_back(r.final_corrected_qd_score,
                                                                r.tt_conv_s);
    if (groups.empty()) return;
    std::vector<ParetoPlotPoint> points;
    for (const auto& [key, values] : groups) {
        std::vector<double> qd, ts;
        for (const auto& [q, t] : values) {
            qd.push_back(q);
            ts.push_back(t);
        }
        points.push_back({key.algo, key.s, median_doubles(qd), median_doubles(ts)});
    }
    render_pareto_plot(path, points);
}

} // namespace uqd
