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

#include "uqd/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uqd {

std::string variant_name(Variant v)
{
    switch (v) {
    case Variant::MapElites: return "map-elites";
    case Variant::MapElitesRandom: return "map-elites-random";
    case Variant::MapElitesSampling: return "map-elites-sampling";
    case Variant::DeepGrid: return "deep-grid";
    case Variant::DeepGridSampling: return "deep-grid-sampling";
    case Variant::ArchiveSampling: return "archive-sampling";
    case Variant::ParallelAdaptiveSampling: return "parallel-adaptive-sampling";
    }
    return "unknown";
}

Variant parse_variant(const std::string& name)
{
    for (Variant v : {Variant::MapElites, Variant::MapElitesRandom, Variant::MapElitesSampling,
                      Variant::DeepGrid, Variant::DeepGridSampling, Variant::ArchiveSampling,
                      Variant::ParallelAdaptiveSampling})
        if (variant_name(v) == name) return v;
    throw ConfigurationError("unknown algorithm variant: " + name);
}

AlgorithmConfig default_config(Variant variant, int sampling_size)
{
    AlgorithmConfig cfg;
    cfg.variant = variant;
    cfg.sampling_size = sampling_size;
    switch (variant) {
    case Variant::MapElites:
    case Variant::MapElitesRandom:
        break;
    case Variant::MapElitesSampling:
        cfg.samples_per_offspring = 32;
        break;
    case Variant::DeepGrid:
        cfg.depth = 32;
        break;
    case Variant::DeepGridSampling:
        cfg.samples_per_offspring = 8;
        cfg.depth = 32;
        break;
    case Variant::ArchiveSampling:
    case Variant::ParallelAdaptiveSampling:
        cfg.depth = 2;
        break;
    }
    return cfg;
}

AdditionRule addition_rule_for(Variant v)
{
    switch (v) {
    case Variant::DeepGrid:
    case Variant::DeepGridSampling: return AdditionRule::DeepReplaceRandom;
    case Variant::ArchiveSampling:
    case Variant::ParallelAdaptiveSampling: return AdditionRule::DeepElitist;
    default: return AdditionRule::ElitistFlat;
    }
}

InCellSelector selector_for(Variant v)
{
    switch (v) {
    case Variant::DeepGrid:
    case Variant::DeepGridSampling: return InCellSelector::Roulette;
    default: return InCellSelector::Best;
    }
}

BudgetPlan plan_budget(const AlgorithmConfig& config, int num_cells, int n_evals)
{
    if (config.sampling_size < 1)
        throw ConfigurationError("plan_budget: sampling_size must be >= 1");
    BudgetPlan plan;
    switch (config.variant) {
    case Variant::MapElites:
    case Variant::MapElitesRandom:
    case Variant::DeepGrid:
        plan = {config.sampling_size, 1, 0};
        break;
    case Variant::MapElitesSampling:
    case Variant::DeepGridSampling: {
        const int n = config.samples_per_offspring;
        if (n < 1) throw ConfigurationError("plan_budget: samples_per_offspring must be >= 1");
        plan = {config.sampling_size / n, n, 0};
        break;
    }
    case Variant::ArchiveSampling: {
        const int reserved = num_cells * config.depth;
        plan = {config.sampling_size - reserved, 1, reserved};
        break;
    }
    case Variant::ParallelAdaptiveSampling: {
        const int reserved = num_cells * config.depth;
        if (n_evals < 1) throw ConfigurationError("plan_budget: n_evals must be >= 1");
        plan = {(config.sampling_size - reserved) / n_evals, static_cast<int>(n_evals), reserved};
        break;
    }
    }
    if (plan.n_offspring < 1)
        throw ConfigurationError("plan_budget: budget leaves no offspring (sampling_size too small)");
    return plan;
}

std::int64_t median_evals_number(const Archive& archive)
{
    auto counts = archive.all_eval_counts();
    if (counts.empty()) return 1;
    std::sort(counts.begin(), counts.end());
    const std::size_t n = counts.size();
    return (n % 2 == 1) ? counts[n / 2] : counts[n / 2 - 1]; // lower median
}

namespace {

void check_archive_matches(const Archive& archive, const AlgorithmConfig& config)
{
    if (archive.rule() != addition_rule_for(config.variant) ||
        archive.selector() != selector_for(config.variant) ||
        archive.depth() != (addition_rule_for(config.variant) == AdditionRule::ElitistFlat
                                ? 1
                                : config.depth))
        throw ContractViolation("step: archive configuration does not match the variant");
}

// Produces plan.n_offspring records, each folding plan.evals_per_offspring
// evaluations into its running means. Parent selection and variation draw
// from per-offspring streams; evaluation runs as one batch.
std::vector<SolutionRecord> make_offspring(const Archive& archive, const AlgorithmConfig& config,
                                           const Task& task, const BudgetPlan& plan,
                                           int generation, const RngStream& run_stream,
                                           int n_threads, bool random_genotypes,
                                           std::int64_t* evals_used)
{
    const auto gen = static_cast<std::uint64_t>(generation);
    std::vector<EvalRequest> requests(static_cast<std::size_t>(plan.n_offspring));
    for (int i = 0; i < plan.n_offspring; ++i) {
        const auto idx = static_cast<std::uint64_t>(i);
        Genotype child;
        if (random_genotypes) {
            RngStream rs = run_stream.substream(streams::kInitGenotype, gen, idx);
            child = random_genotype(task.spec().genotype_dim, rs);
        } else {
            RngStream rs = run_stream.substream(streams::kSelect, gen, idx);
            const SolutionRecord& x = select_parent_uniform(archive, rs);
            const SolutionRecord& y = select_parent_uniform(archive, rs);
            child = iso_line_mutation(x.genotype, y.genotype, config.variation, rs);
        }
        requests[i].genotype = std::move(child);
        requests[i].n_samples = plan.evals_per_offspring;
        requests[i].stream = run_stream.substream(streams::kEval, gen, idx);
    }

    const auto evals = evaluate_batch(task, requests, n_threads);
    std::vector<SolutionRecord> records;
    records.reserve(requests.size());
    for (std::size_t i = 0; i < requests.size(); ++i) {
        SolutionRecord rec = fresh_record(std::move(requests[i].genotype), evals[i][0]);
        for (std::size_t j = 1; j < evals[i].size(); ++j)
            rec = update_running_mean(std::move(rec), evals[i][j]);
        records.push_back(std::move(rec));
    }
    *evals_used += static_cast<std::int64_t>(plan.n_offspring) * plan.evals_per_offspring;
    return records;
}

std::pair<int, int> add_all(Archive& archive, std::vector<SolutionRecord>& records, int generation,
                            const RngStream& run_stream)
{
    const auto gen = static_cast<std::uint64_t>(generation);
    int added = 0;
    int rejected = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        RngStream rs = run_stream.substream(streams::kAdd, gen, static_cast<std::uint64_t>(i));
        const AddOutcome outcome = archive.try_add(records[i], rs);
        if (outcome.result == AddResult::Rejected) ++rejected;
        else ++added;
    }
    return {added, rejected};
}

// Drains the archive, reevaluates every record once, folds the draw into its
// running means and re-adds it at its (possibly new) cell.
std::int64_t reevaluate_archive(Archive& archive, const Task& task, int generation,
                                const RngStream& run_stream, int n_threads)
{
    const auto gen = static_cast<std::uint64_t>(generation);
    std::vector<SolutionRecord> records = archive.drain();
    if (records.empty()) return 0;
    std::vector<EvalRequest> requests(records.size());
    for (std::size_t j = 0; j < records.size(); ++j) {
        requests[j].genotype = records[j].genotype;
        requests[j].n_samples = 1;
        requests[j].stream = run_stream.substream(streams::kReeval, gen, static_cast<std::uint64_t>(j));
    }
    const auto evals = evaluate_batch(task, requests, n_threads);
    for (std::size_t j = 0; j < records.size(); ++j) {
        SolutionRecord rec = update_running_mean(std::move(records[j]), evals[j][0]);
        RngStream rs = run_stream.substream(streams::kReevalAdd, gen, static_cast<std::uint64_t>(j));
        archive.try_add(rec, rs);
    }
    return static_cast<std::int64_t>(records.size());
}

GenerationReport finish_report(const Archive& archive, int generation, std::int64_t evals_used,
                               int added, int rejected, std::int64_t n_evals)
{
    GenerationReport report;
    report.generation = generation;
    report.evals_used = evals_used;
    report.added = added;
    report.rejected = rejected;
    report.qd_score = archive.qd_score();
    report.coverage = archive.coverage();
    report.max_fitness = archive.occupied_cells() > 0
                             ? archive.max_fitness()
                             : std::numeric_limits<double>::quiet_NaN();
    report.n_evals = n_evals;
    return report;
}

GenerationReport step_offspring_only(Archive& archive, const AlgorithmConfig& config,
                                     const Task& task, int generation,
                                     const RngStream& run_stream, int n_threads,
                                     bool random_genotypes)
{
    check_archive_matches(archive, config);
    const BudgetPlan plan = plan_budget(config, archive.num_cells());
    std::int64_t evals = 0;
    auto records = make_offspring(archive, config, task, plan, generation, run_stream, n_threads,
                                  random_genotypes, &evals);
    const auto [added, rejected] = add_all(archive, records, generation, run_stream);
    return finish_report(archive, generation, evals, added, rejected, plan.evals_per_offspring);
}

} // namespace

Archive make_archive(const AlgorithmConfig& config, std::shared_ptr<const Centroids> centroids)
{
    const AdditionRule rule = addition_rule_for(config.variant);
    const int depth = rule == AdditionRule::ElitistFlat ? 1 : config.depth;
    return Archive(std::move(centroids), depth, rule, selector_for(config.variant));
}

std::pair<Archive, GenerationReport> initialize(const AlgorithmConfig& config, const Task& task,
                                                std::shared_ptr<const Centroids> centroids,
                                                const RngStream& run_stream, int n_threads)
{
    Archive archive = make_archive(config, std::move(centroids));
    // PAS starts from an empty archive, whose median evaluation count is 1.
    const BudgetPlan plan = plan_budget(config, archive.num_cells(), 1);
    std::int64_t evals = 0;
    auto records = make_offspring(archive, config, task, plan, 0, run_stream, n_threads,
                                  /*random_genotypes=*/true, &evals);
    const auto [added, rejected] = add_all(archive, records, 0, run_stream);
    GenerationReport report =
        finish_report(archive, 0, evals, added, rejected, plan.evals_per_offspring);
    return {std::move(archive), std::move(report)};
}

GenerationReport step_map_elites(Archive& archive, const AlgorithmConfig& config, const Task& task,
                                 int generation, const RngStream& run_stream, int n_threads)
{
    return step_offspring_only(archive, config, task, generation, run_stream, n_threads, false);
}

GenerationReport step_me_random(Archive& archive, const AlgorithmConfig& config, const Task& task,
                                int generation, const RngStream& run_stream, int n_threads)
{
    return step_offspring_only(archive, config, task, generation, run_stream, n_threads, true);
}

GenerationReport step_me_sampling(Archive& archive, const AlgorithmConfig& config, const Task& task,
                                  int generation, const RngStream& run_stream, int n_threads)
{
    return step_offspring_only(archive, config, task, generation, run_stream, n_threads, false);
}

GenerationReport step_deep_grid(Archive& archive, const AlgorithmConfig& config, const Task& task,
                                int generation, const RngStream& run_stream, int n_threads)
{
    return step_offspring_only(archive, config, task, generation, run_stream, n_threads, false);
}

GenerationReport step_dg_sampling(Archive& archive, const AlgorithmConfig& config, const Task& task,
                                  int generation, const RngStream& run_stream, int n_threads)
{
    return step_offspring_only(archive, config, task, generation, run_stream, n_threads, false);
}

GenerationReport step_archive_sampling(Archive& archive, const AlgorithmConfig& config,
                                       const Task& task, int generation,
                                       const RngStream& run_stream, int n_threads)
{
    check_archive_matches(archive, config);
    const BudgetPlan plan = plan_budget(config, archive.num_cells());
    std::int64_t evals = reevaluate_archive(archive, task, generation, run_stream, n_threads);
    auto records = make_offspring(archive, config, task, plan, generation, run_stream, n_threads,
                                  false, &evals);
    const auto [added, rejected] = add_all(archive, records, generation, run_stream);
    return finish_report(archive, generation, evals, added, rejected, 1);
}

GenerationReport step_pas(Archive& archive, const AlgorithmConfig& config, const Task& task,
                          int generation, const RngStream& run_stream, int n_threads)
{
    check_archive_matches(archive, config);
    // Evaluation-number choice precedes the archive reevaluation. The median
    // is capped at the offspring budget so at least one offspring is produced.
    const int offspring_budget = config.sampling_size - archive.num_cells() * config.depth;
    if (offspring_budget < 1)
        throw ConfigurationError("step_pas: sampling_size must exceed num_cells * depth");
    const std::int64_t n_evals =
        std::min<std::int64_t>(median_evals_number(archive), offspring_budget);
    const BudgetPlan plan = plan_budget(config, archive.num_cells(), static_cast<int>(n_evals));
    std::int64_t evals = reevaluate_archive(archive, task, generation, run_stream, n_threads);
    auto records = make_offspring(archive, config, task, plan, generation, run_stream, n_threads,
                                  false, &evals);
    const auto [added, rejected] = add_all(archive, records, generation, run_stream);
    return finish_report(archive, generation, evals, added, rejected, n_evals);
}

GenerationReport step(Archive& archive, const AlgorithmConfig& config, const Task& task,
                      int generation, const RngStream& run_stream, int n_threads)
{
    switch (config.variant) {
    case Variant::MapElites:
        return step_map_elites(archive, config, task, generation, run_stream, n_threads);
    case Variant::MapElitesRandom:
        return step_me_random(archive, config, task, generation, run_stream, n_threads);
    case Variant::MapElitesSampling:
        return step_me_sampling(archive, config, task, generation, run_stream, n_threads);
    case Variant::DeepGrid:
        return step_deep_grid(archive, config, task, generation, run_stream, n_threads);
    case Variant::DeepGridSampling:
        return step_dg_sampling(archive, config, task, generation, run_stream, n_threads);
    case Variant::ArchiveSampling:
        return step_archive_sampling(archive, config, task, generation, run_stream, n_threads);
    case Variant::ParallelAdaptiveSampling:
        return step_pas(archive, config, task, generation, run_stream, n_threads);
    }
    throw ConfigurationError("step: unknown variant");
}

} // namespace uqd
