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

#ifndef UQDBENCH_SVG_HPP
#define UQDBENCH_SVG_HPP

#include <map>
#include <string>
#include <vector>

#include "uqd/stats.hpp"
#include "uqd/tessellation.hpp"

namespace uqd {

// Pixel -> owning cell on a res x res lattice over [0,1]^2, row-major from
// the bottom-left (y grows upward).
std::vector<int> rasterize_cells(const Centroids& centroids, int res);

// Voronoi-cell heatmap over a 2-D descriptor space: one coloured region per
// cell present in cell_values, colour-mapped over [lo, hi]. Requires
// centroids.dim == 2.
void render_cell_heatmap(const std::string& path, const Centroids& centroids,
                         const std::map<int, double>& cell_values, double lo, double hi,
                         const std::string& title, int res = 256);

struct ParetoPlotPoint {
    std::string label;    // algorithm name
    int sampling_size = 0;
    double quality = 0.0; // corrected QD-Score, median over replications
    double time_s = 0.0;  // time to convergence, median over replications
};

// Scatter of per-(algorithm, sampling-size) medians with the non-dominated
// front drawn dashed; marker size grows with sampling-size.
void render_pareto_plot(const std::string& path, const std::vector<ParetoPlotPoint>& points);

} // namespace uqd

#endif
