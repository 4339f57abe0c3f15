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

#ifndef UQDBENCH_VARIATION_HPP
#define UQDBENCH_VARIATION_HPP

#include "uqd/archive.hpp"
#include "uqd/core.hpp"
#include "uqd/rng.hpp"

namespace uqd {

struct VariationParams {
    double sigma1 = 0.005;      // isotropic scale
    double sigma2 = 0.05;       // line scale
    bool line_per_gene = false; // draw the line coefficient per gene instead of shared
};

Genotype random_genotype(int dim, RngStream& rng);

// Uniform cell choice among occupied cells, then the archive's in-cell
// selector picks the record. Draw order: cell index, then selector draws.
const SolutionRecord& select_parent_uniform(const Archive& archive, RngStream& rng);

// child_j = clip(x_j + sigma1 * eps_j + sigma2 * zeta * (y_j - x_j), 0, 1)
// with eps_j iid standard normal per gene and zeta shared across genes
// (per gene when line_per_gene is set). Draw order: zeta first, then
// eps_0..eps_{n-1}; in per-gene mode, (eps_j, zeta_j) per gene.
Genotype iso_line_mutation(const Genotype& x, const Genotype& y, const VariationParams& params,
                           RngStream& rng);

} // namespace uqd

#endif
