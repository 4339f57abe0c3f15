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

#include "uqd/archive.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace uqd {

namespace {
constexpr double kRouletteEps = 1e-3;
constexpr double kRouletteDelta = 1e-12;
} // namespace

const SolutionRecord& select_from_cell(std::span<const SolutionRecord> cell,
                                       InCellSelector selector, RngStream& rng)
{
    if (cell.empty()) throw ContractViolation("select_from_cell: empty cell");
    if (cell.size() == 1) return cell[0];
    if (selector == InCellSelector::Best) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < cell.size(); ++i)
            if (cell[i].mean_fitness > cell[best].mean_fitness) best = i;
        return cell[best];
    }
    double min_f = cell[0].mean_fitness;
    double max_f = cell[0].mean_fitness;
    for (const auto& r : cell) {
        min_f = std::min(min_f, r.mean_fitness);
        max_f = std::max(max_f, r.mean_fitness);
    }
    const double floor = kRouletteEps * (max_f - min_f + kRouletteDelta);
    double total = 0.0;
    for (const auto& r : cell) total += (r.mean_fitness - min_f) + floor;
    const double target = rng.uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < cell.size(); ++i) {
        acc += (cell[i].mean_fitness - min_f) + floor;
        if (target < acc) return cell[i];
    }
    return cell.back();
}

Archive::Archive(std::shared_ptr<const Centroids> centroids, int depth, AdditionRule rule,
                 InCellSelector selector)
    : centroids_(std::move(centroids)), depth_(depth), rule_(rule), selector_(selector)
{
    if (!centroids_ || centroids_->k < 1)
        throw ConfigurationError("Archive: missing or empty centroids");
    if (depth_ < 1) throw ConfigurationError("Archive: depth must be >= 1");
    if (rule_ == AdditionRule::ElitistFlat && depth_ != 1)
        throw ConfigurationError("Archive: elitist-flat requires depth 1");
    cells_.resize(static_cast<std::size_t>(centroids_->k));
}

AddOutcome Archive::try_add(const SolutionRecord& record, RngStream& rng)
{
    if (static_cast<int>(record.mean_descriptor.size()) != centroids_->dim)
        throw ContractViolation("Archive::try_add: descriptor dimension mismatch");
    if (record.eval_count < 1)
        throw ContractViolation("Archive::try_add: record has eval_count < 1");

    const int c = nearest_centroid(record.mean_descriptor, *centroids_);
    auto& cell = cells_[c];
    AddOutcome outcome;
    outcome.cell = c;

    switch (rule_) {
    case AdditionRule::ElitistFlat:
        if (cell.empty()) {
            cell.push_back(record);
            outcome.result = AddResult::Added;
        } else if (record.mean_fitness > cell[0].mean_fitness) {
            outcome.victim = std::move(cell[0]);
            cell[0] = record;
            outcome.result = AddResult::Replaced;
        }
        break;
    case AdditionRule::DeepReplaceRandom:
        if (static_cast<int>(cell.size()) < depth_) {
            cell.push_back(record);
            outcome.result = AddResult::Added;
        } else {
            const std::size_t slot = static_cast<std::size_t>(rng.below(cell.size()));
            outcome.victim = std::move(cell[slot]);
            cell[slot] = record;
            outcome.result = AddResult::Replaced;
        }
        break;
    case AdditionRule::DeepElitist: {
        auto sorted_insert = [&cell](const SolutionRecord& r) {
            auto pos = std::upper_bound(cell.begin(), cell.end(), r,
                                        [](const SolutionRecord& a, const SolutionRecord& b) {
                                            return a.mean_fitness > b.mean_fitness;
                                        });
            cell.insert(pos, r);
        };
        if (static_cast<int>(cell.size()) < depth_) {
            sorted_insert(record);
            outcome.result = AddResult::Added;
        } else if (record.mean_fitness > cell.back().mean_fitness) {
            outcome.victim = std::move(cell.back());
            cell.pop_back();
            sorted_insert(record);
            outcome.result = AddResult::Replaced;
        }
        break;
    }
    }
    return outcome;
}

const SolutionRecord& Archive::in_cell_select(int cell_index, RngStream& rng) const
{
    return select_from_cell(cells_[cell_index], selector_, rng);
}

const SolutionRecord& Archive::best_of(int cell_index) const
{
    const auto& cell = cells_[cell_index];
    if (cell.empty()) throw ContractViolation("Archive::best_of: empty cell");
    std::size_t best = 0;
    for (std::size_t i = 1; i < cell.size(); ++i)
        if (cell[i].mean_fitness > cell[best].mean_fitness) best = i;
    return cell[best];
}

int Archive::occupied_cells() const
{
    int n = 0;
    for (const auto& cell : cells_)
        if (!cell.empty()) ++n;
    return n;
}

std::vector<int> Archive::occupied_cell_indices() const
{
    std::vector<int> idx;
    idx.reserve(cells_.size());
    for (int i = 0; i < static_cast<int>(cells_.size()); ++i)
        if (!cells_[i].empty()) idx.push_back(i);
    return idx;
}

std::int64_t Archive::total_records() const
{
    std::int64_t n = 0;
    for (const auto& cell : cells_) n += static_cast<std::int64_t>(cell.size());
    return n;
}

std::vector<std::int64_t> Archive::all_eval_counts() const
{
    std::vector<std::int64_t> counts;
    counts.reserve(static_cast<std::size_t>(total_records()));
    for (const auto& cell : cells_)
        for (const auto& r : cell) counts.push_back(r.eval_count);
    return counts;
}

double Archive::qd_score() const
{
    double score = 0.0;
    for (int i = 0; i < static_cast<int>(cells_.size()); ++i)
        if (!cells_[i].empty()) score += best_of(i).mean_fitness;
    return score;
}

double Archive::coverage() const
{
    return static_cast<double>(occupied_cells()) / static_cast<double>(num_cells());
}

double Archive::max_fitness() const
{
    bool any = false;
    double best = 0.0;
    for (int i = 0; i < static_cast<int>(cells_.size()); ++i) {
        if (cells_[i].empty()) continue;
        const double f = best_of(i).mean_fitness;
        if (!any || f > best) best = f;
        any = true;
    }
    if (!any) throw EmptyArchiveError("Archive::max_fitness: empty archive");
    return best;
}

std::vector<SolutionRecord> Archive::drain()
{
    std::vector<SolutionRecord> all;
    all.reserve(static_cast<std::size_t>(total_records()));
    for (auto& cell : cells_) {
        for (auto& r : cell) all.push_back(std::move(r));
        cell.clear();
    }
    return all;
}

void Archive::restore_record(int cell_index, SolutionRecord record)
{
    if (cell_index < 0 || cell_index >= num_cells())
        throw ContractViolation("Archive::restore_record: cell index out of range");
    if (static_cast<int>(cells_[cell_index].size()) >= depth_)
        throw ContractViolation("Archive::restore_record: cell already at depth");
    cells_[cell_index].push_back(std::move(record));
}

void Archive::save_csv(const std::string& path) const
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("Archive::save_csv: cannot open " + path);
    out << "cell,slot,eval_count,mean_fitness";
    for (int j = 0; j < centroids_->dim; ++j) out << ",desc_" << j;
    int genes = 0;
    for (const auto& cell : cells_)
        if (!cell.empty()) {
            genes = static_cast<int>(cell[0].genotype.size());
            break;
        }
    for (int j = 0; j < genes; ++j) out << ",gene_" << j;
    out << "\n";
    char buf[64];
    auto put = [&out, &buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << "," << buf;
    };
    for (int c = 0; c < static_cast<int>(cells_.size()); ++c) {
        for (std::size_t s = 0; s < cells_[c].size(); ++s) {
            const auto& r = cells_[c][s];
            out << c << "," << s << "," << r.eval_count;
            std::snprintf(buf, sizeof(buf), "%.17g", r.mean_fitness);
            out << "," << buf;
            for (double v : r.mean_descriptor) put(v);
            for (double v : r.genotype) put(v);
            out << "\n";
        }
    }
}

Archive load_archive_csv(const std::string& path, std::shared_ptr<const Centroids> centroids,
                         int depth, AdditionRule rule, InCellSelector selector)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_archive_csv: cannot open " + path);
    Archive archive(std::move(centroids), depth, rule, selector);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_archive_csv: empty file " + path);
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) header.push_back(f);
    }
    const int dim = archive.descriptor_dim();
    const int genes = static_cast<int>(header.size()) - 4 - dim;
    if (genes < 0) throw std::runtime_error("load_archive_csv: malformed header in " + path);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string f;
        std::vector<double> vals;
        while (std::getline(ss, f, ',')) vals.push_back(std::stod(f));
        if (static_cast<int>(vals.size()) != 4 + dim + genes)
            throw std::runtime_error("load_archive_csv: ragged row in " + path);
        SolutionRecord rec;
        rec.eval_count = static_cast<std::int64_t>(vals[2]);
        rec.mean_fitness = vals[3];
        rec.mean_descriptor.assign(vals.begin() + 4, vals.begin() + 4 + dim);
        rec.genotype.assign(vals.begin() + 4 + dim, vals.end());
        archive.restore_record(static_cast<int>(vals[0]), std::move(rec));
    }
    return archive;
}

} // namespace uqd
