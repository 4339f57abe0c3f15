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

#include "uqd/variation.hpp"

#include <algorithm>

namespace uqd {

Genotype random_genotype(int dim, RngStream& rng)
{
    Genotype g(static_cast<std::size_t>(dim));
    for (double& v : g) v = rng.uniform();
    return g;
}

const SolutionRecord& select_parent_uniform(const Archive& archive, RngStream& rng)
{
    const auto occupied = archive.occupied_cell_indices();
    if (occupied.empty()) throw EmptyArchiveError("select_parent_uniform: empty archive");
    const int cell = occupied[rng.below(occupied.size())];
    return archive.in_cell_select(cell, rng);
}

Genotype iso_line_mutation(const Genotype& x, const Genotype& y, const VariationParams& params,
                           RngStream& rng)
{
    if (x.size() != y.size())
        throw ContractViolation("iso_line_mutation: parent length mismatch");
    const double shared_zeta = params.line_per_gene ? 0.0 : rng.normal();
    Genotype child(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double eps = rng.normal();
        const double zeta = params.line_per_gene ? rng.normal() : shared_zeta;
        child[j] = std::clamp(x[j] + params.sigma1 * eps + params.sigma2 * zeta * (y[j] - x[j]),
                              0.0, 1.0);
    }
    return child;
}

} // namespace uqd
