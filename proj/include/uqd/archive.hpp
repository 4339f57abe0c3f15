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

#ifndef UQDBENCH_ARCHIVE_HPP
#define UQDBENCH_ARCHIVE_HPP

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uqd/core.hpp"
#include "uqd/rng.hpp"
#include "uqd/tessellation.hpp"

namespace uqd {

enum class AdditionRule {
    ElitistFlat,       // depth 1; a newcomer must strictly beat the incumbent
    DeepReplaceRandom, // fill to depth, then overwrite a uniformly random slot
    DeepElitist        // fill to depth, then replace the worst if strictly better
};

enum class InCellSelector {
    Best,    // max mean_fitness, ties to the lowest slot
    Roulette // fitness-proportional with a floor so the worst stays selectable
};

enum class AddResult { Added, Replaced, Rejected };

struct AddOutcome {
    AddResult result = AddResult::Rejected;
    int cell = -1;
    std::optional<SolutionRecord> victim;
};

// Fitness-proportional selection from one cell. Weights are shifted by the
// cell minimum and floored at eps * (spread + delta) so degenerate cells
// stay well defined.
const SolutionRecord& select_from_cell(std::span<const SolutionRecord> cell,
                                       InCellSelector selector, RngStream& rng);

// CVT-tessellated container of SolutionRecords, depth slots per cell.
// Cells kept by DeepElitist (and trivially ElitistFlat) are sorted by
// mean_fitness descending at all times.
class Archive {
public:
    Archive(std::shared_ptr<const Centroids> centroids, int depth, AdditionRule rule,
            InCellSelector selector);

    int num_cells() const { return centroids_->k; }
    int descriptor_dim() const { return centroids_->dim; }
    int depth() const { return depth_; }
    AdditionRule rule() const { return rule_; }
    InCellSelector selector() const { return selector_; }
    const Centroids& centroids() const { return *centroids_; }
    std::shared_ptr<const Centroids> centroids_ptr() const { return centroids_; }

    const std::vector<SolutionRecord>& cell(int i) const { return cells_[i]; }

    // Routes the record to nearest_centroid(mean_descriptor) and applies the
    // addition rule. rng is consumed only by DeepReplaceRandom.
    AddOutcome try_add(const SolutionRecord& record, RngStream& rng);

    const SolutionRecord& in_cell_select(int cell_index, RngStream& rng) const;
    const SolutionRecord& best_of(int cell_index) const;

    int occupied_cells() const;
    std::vector<int> occupied_cell_indices() const;
    std::int64_t total_records() const;
    std::vector<std::int64_t> all_eval_counts() const;

    // Sum over occupied cells of the best-of-cell mean fitness.
    double qd_score() const;
    // Occupied-cell fraction in [0, 1].
    double coverage() const;
    // Max best-of-cell mean fitness; throws EmptyArchiveError when empty.
    double max_fitness() const;

    Archive snapshot() const { return *this; }

    // Removes and returns every stored record in (cell, slot) order,
    // leaving all cells empty.
    std::vector<SolutionRecord> drain();

    // Places a record into an explicit cell, bypassing the addition rule.
    // Used for deserialization, where slot order must match the file.
    void restore_record(int cell_index, SolutionRecord record);

    void save_csv(const std::string& path) const;

private:
    std::shared_ptr<const Centroids> centroids_;
    int depth_;
    AdditionRule rule_;
    InCellSelector selector_;
    std::vector<std::vector<SolutionRecord>> cells_;
};

// Reload from CSV written by save_csv; records are placed in their stored
// cells verbatim.
Archive load_archive_csv(const std::string& path, std::shared_ptr<const Centroids> centroids,
                         int depth, AdditionRule rule, InCellSelector selector);

} // namespace uqd

#endif
