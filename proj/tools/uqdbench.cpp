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

#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "uqd/harness.hpp"
#include "uqd/io.hpp"
#include "uqd/svg.hpp"

namespace {

using nlohmann::json;

struct LoadedRun {
    uqd::TaskConfig task_config;
    std::unique_ptr<uqd::Task> task;
    uqd::AlgorithmConfig algo;
    std::string label;
    std::shared_ptr<const uqd::Centroids> centroids;
    uqd::Archive archive;
    std::uint64_t seed = 0;
    std::uint64_t run_stream_id = 0;
    int m_reevals = 512;
    uqd::CorrectionMode mode = uqd::CorrectionMode::InCellSelector;
};

LoadedRun load_run_dir(const std::string& dir)
{
    const json manifest = json::parse(uqd::read_text_file(dir + "/run.json"));
    uqd::TaskConfig tc;
    tc.name = manifest.at("task").at("name").get<std::string>();
    tc.genotype_dim = manifest.at("task").at("genotype_dim").get<int>();
    tc.noise.fitness_std = manifest.at("task").at("fitness_std").get<double>();
    tc.noise.descriptor_std = manifest.at("task").at("descriptor_std").get<double>();
    tc.noise.heteroscedastic_gain = manifest.at("task").at("heteroscedastic_gain").get<double>();

    uqd::AlgorithmConfig algo;
    algo.variant = uqd::parse_variant(manifest.at("algorithm").at("variant").get<std::string>());
    algo.samples_per_offspring = manifest.at("algorithm").at("samples_per_offspring").get<int>();
    algo.depth = manifest.at("algorithm").at("depth").get<int>();
    algo.sampling_size = manifest.at("sampling_size").get<int>();

    auto centroids = std::make_shared<const uqd::Centroids>(
        uqd::load_centroids_csv(dir + "/centroids.csv"));
    const int depth = uqd::addition_rule_for(algo.variant) == uqd::AdditionRule::ElitistFlat
                          ? 1
                          : algo.depth;
    uqd::Archive archive =
        uqd::load_archive_csv(dir + "/archive.csv", centroids, depth,
                              uqd::addition_rule_for(algo.variant),
                              uqd::selector_for(algo.variant));
    LoadedRun run{std::move(tc),
                  nullptr,
                  algo,
                  manifest.at("algorithm").at("label").get<std::string>(),
                  centroids,
                  std::move(archive),
                  manifest.at("seed").get<std::uint64_t>(),
                  manifest.at("run_stream_id").get<std::uint64_t>(),
                  manifest.at("m_reevals").get<int>(),
                  uqd::parse_correction_mode(
                      manifest.at("correction_mode").get<std::string>())};
    run.task = uqd::make_task(run.task_config);
    return run;
}

int default_threads()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Quality-Diversity benchmark harness for uncertain domains"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "run the experiment grid from a config file");
    std::string config_path, out_dir = "out";
    std::uint64_t seed_override = 0;
    bool has_seed_override = false;
    int threads = default_threads();
    int m_override = 0;
    bool validate_only = false;
    run_cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_option("--seed", seed_override, "override the config master seed")
        ->each([&](const std::string&) { has_seed_override = true; });
    run_cmd->add_option("--threads", threads, "worker threads");
    run_cmd->add_option("--m-reevals", m_override, "override the number of metric reevaluations");
    run_cmd->add_flag("--validate", validate_only, "parse and validate the config, then exit");

    // metrics
    auto* metrics_cmd =
        app.add_subcommand("metrics", "recompute corrected metrics from a saved run");
    std::string run_dir, mode_name;
    int metrics_m = 0;
    metrics_cmd->add_option("--run-dir", run_dir, "run directory written by 'run'")->required();
    metrics_cmd->add_option("--m-reevals", metrics_m, "number of reevaluations (default: run's)");
    metrics_cmd->add_option("--mode", mode_name, "in-cell-selector or best-of-cell");
    metrics_cmd->add_option("--threads", threads, "worker threads");

    // estimator-study
    auto* study_cmd = app.add_subcommand(
        "estimator-study", "mean/median estimation error versus number of reevaluations");
    int m_max = 4096;
    std::string candidates_str = "16,32,64,128,256,512,1024";
    double study_fstd = -1, study_dstd = -1, study_gain = -1;
    study_cmd->add_option("--run-dir", run_dir, "run directory written by 'run'")->required();
    study_cmd->add_option("--m-max", m_max, "ground-truth number of reevaluations");
    study_cmd->add_option("--candidates", candidates_str, "comma-separated candidate Ms");
    study_cmd->add_option("--fitness-std", study_fstd, "override task fitness noise std");
    study_cmd->add_option("--descriptor-std", study_dstd, "override task descriptor noise std");
    study_cmd->add_option("--het-gain", study_gain, "override heteroscedastic gain");
    study_cmd->add_option("--threads", threads, "worker threads");

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "regenerate SVG plots");
    std::string summary_path;
    plot_cmd->add_option("--run-dir", run_dir, "regenerate a run's archive heatmap");
    plot_cmd->add_option("--summary", summary_path, "summary.csv to plot a Pareto front from");

    // compare
    auto* compare_cmd =
        app.add_subcommand("compare", "Pareto front and rank-sum table from summary.csv");
    compare_cmd->add_option("--summary", summary_path, "summary.csv written by 'run'")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            uqd::ExperimentConfig config = uqd::load_experiment_config(config_path);
            if (has_seed_override) config.seed = seed_override;
            if (m_override > 0) config.m_reevals = m_override;
            if (validate_only) {
                std::cout << "config ok\n"
                          << uqd::experiment_config_to_json(config).dump(2) << "\n";
                std::cout << "runs: "
                          << config.algorithms.size() * config.sampling_sizes.size() *
                                 static_cast<std::size_t>(config.replications)
                          << "\n";
                return 0;
            }
            const auto result = uqd::run_experiment(config, out_dir, threads);
            int ok = 0, skipped = 0, failed = 0;
            for (const auto& r : result.runs) {
                ok += r.status == uqd::RunStatus::Ok;
                skipped += r.status == uqd::RunStatus::Skipped;
                failed += r.status == uqd::RunStatus::Failed;
            }
            std::cout << "experiment finished: " << ok << " ok, " << skipped << " skipped, "
                      << failed << " failed\n"
                      << "summary: " << out_dir << "/summary.csv\n";
            return failed == 0 ? 0 : 1;
        }

        if (*metrics_cmd) {
            LoadedRun run = load_run_dir(run_dir);
            const int m = metrics_m > 0 ? metrics_m : run.m_reevals;
            const uqd::CorrectionMode mode =
                mode_name.empty() ? run.mode : uqd::parse_correction_mode(mode_name);
            uqd::RngStream stream(run.seed, run.run_stream_id);
            const auto corrected = uqd::corrected_archive(
                run.archive, *run.task, m, mode,
                stream.substream(uqd::streams::kCorrection, 0xFFFFFFFFULL), threads);
            const double offset = uqd::qd_score_offset(*run.task);
            const double raw = corrected.archive.qd_score();
            std::cout << "corrected_qd_score_raw=" << uqd::fmt17(raw) << "\n"
                      << "corrected_qd_score="
                      << uqd::fmt17(uqd::offset_qd_score(raw, corrected.archive.occupied_cells(),
                                                         offset))
                      << "\n"
                      << "corrected_coverage=" << uqd::fmt17(corrected.archive.coverage()) << "\n"
                      << "metric_evals=" << corrected.evals_used << "\n";
            corrected.archive.save_csv(run_dir + "/corrected_archive_recomputed.csv");
            return 0;
        }

        if (*study_cmd) {
            LoadedRun run = load_run_dir(run_dir);
            if (study_fstd >= 0) run.task_config.noise.fitness_std = study_fstd;
            if (study_dstd >= 0) run.task_config.noise.descriptor_std = study_dstd;
            if (study_gain >= 0) run.task_config.noise.heteroscedastic_gain = study_gain;
            run.task = uqd::make_task(run.task_config);
            std::vector<int> candidates;
            std::stringstream ss(candidates_str);
            std::string field;
            while (std::getline(ss, field, ',')) candidates.push_back(std::stoi(field));
            uqd::RngStream stream(run.seed, run.run_stream_id);
            const auto rows = uqd::estimator_study(run.archive, *run.task, m_max, candidates,
                                                   stream.substream(uqd::streams::kStudy), threads);
            std::string csv =
                "m,fitness_mean_err_q25,fitness_mean_err_med,fitness_mean_err_q75,"
                "fitness_median_err_q25,fitness_median_err_med,fitness_median_err_q75,"
                "descriptor_mean_err_q25,descriptor_mean_err_med,descriptor_mean_err_q75,"
                "descriptor_median_err_q25,descriptor_median_err_med,descriptor_median_err_q75\n";
            std::cout << "m\tfitness_mean_err_med\tfitness_median_err_med\n";
            for (const auto& r : rows) {
                csv += std::to_string(r.m) + "," + uqd::fmt17(r.fitness_mean_err_q25) + "," +
                       uqd::fmt17(r.fitness_mean_err_med) + "," +
                       uqd::fmt17(r.fitness_mean_err_q75) + "," +
                       uqd::fmt17(r.fitness_median_err_q25) + "," +
                       uqd::fmt17(r.fitness_median_err_med) + "," +
                       uqd::fmt17(r.fitness_median_err_q75) + "," +
                       uqd::fmt17(r.descriptor_mean_err_q25) + "," +
                       uqd::fmt17(r.descriptor_mean_err_med) + "," +
                       uqd::fmt17(r.descriptor_mean_err_q75) + "," +
                       uqd::fmt17(r.descriptor_median_err_q25) + "," +
                       uqd::fmt17(r.descriptor_median_err_med) + "," +
                       uqd::fmt17(r.descriptor_median_err_q75) + "\n";
                std::cout << r.m << "\t" << uqd::fmt17(r.fitness_mean_err_med) << "\t"
                          << uqd::fmt17(r.fitness_median_err_med) << "\n";
            }
            uqd::write_text_file(run_dir + "/estimator_study.csv", csv);
            std::cout << "written: " << run_dir << "/estimator_study.csv\n";
            return 0;
        }

        if (*plot_cmd || *compare_cmd) {
            if (*plot_cmd && !run_dir.empty()) {
                LoadedRun run = load_run_dir(run_dir);
                std::map<int, double> values;
                for (int c : run.archive.occupied_cell_indices())
                    values[c] = run.archive.best_of(c).mean_fitness;
                const auto range = run.task->spec().fitness_range;
                uqd::render_cell_heatmap(run_dir + "/archive_fitness.svg", *run.centroids, values,
                                         range.first, range.second,
                                         run.label + " archive, best-of-cell mean fitness");
                std::cout << "written: " << run_dir << "/archive_fitness.svg\n";
            }
            if (!summary_path.empty()) {
                // Reload the summary rows that matter for the front.
                std::ifstream in(summary_path);
                if (!in) throw std::runtime_error("cannot open " + summary_path);
                std::string line;
                std::getline(in, line); // header
                std::vector<uqd::RunRecord> runs;
                while (std::getline(in, line)) {
                    std::stringstream row(line);
                    std::vector<std::string> f;
                    std::string field2;
                    while (std::getline(row, field2, ',')) f.push_back(field2);
                    if (f.size() < 19) continue;
                    uqd::RunRecord r;
                    r.task = f[0];
                    r.algorithm = f[1];
                    r.sampling_size = std::stoi(f[2]);
                    r.replication = std::stoi(f[3]);
                    r.status = f[5] == "ok" ? uqd::RunStatus::Ok : uqd::RunStatus::Skipped;
                    r.final_corrected_qd_score = std::stod(f[10]);
                    r.tt_conv_s = std::stod(f[16]);
                    runs.push_back(std::move(r));
                }
                const auto dir = std::filesystem::path(summary_path).parent_path().string();
                const std::string pareto_path =
                    (dir.empty() ? std::string(".") : dir) + "/pareto.svg";
                uqd::write_pareto_svg(pareto_path, runs);
                std::cout << "written: " << pareto_path << "\n";
                if (*compare_cmd) {
                    const std::string sig_path =
                        (dir.empty() ? std::string(".") : dir) + "/significance.csv";
                    uqd::write_significance_csv(sig_path, runs);
                    std::cout << "written: " << sig_path << "\n";
                }
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
