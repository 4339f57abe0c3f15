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

#ifndef UQDBENCH_TESSELLATION_HPP
#define UQDBENCH_TESSELLATION_HPP

#include <span>
#include <string>
#include <vector>

#include "uqd/core.hpp"
#include "uqd/rng.hpp"

namespace uqd {

// Centroidal Voronoi tessellation of [0,1]^dim into k niches.
// Immutable after construction; lookups are safe to run concurrently.
struct Centroids {
    int k = 0;
    int dim = 0;
    std::vector<double> data; // row-major, k * dim

    std::span<const double> row(int i) const
    {
        return std::span<const double>(data.data() + static_cast<std::size_t>(i) * dim,
                                       static_cast<std::size_t>(dim));
    }
};

// Lloyd's k-means over the given samples (row-major n x dim), initialised
// from the first k samples, run for at most `iters` iterations (stops early
// only once assignments are exactly stable, which leaves the result
// unchanged). Centroids that own no sample keep their position.
Centroids lloyd_kmeans(const std::vector<double>& samples, int n, int dim, int k, int iters,
                       int n_threads = 1);

// CVT construction: Lloyd's k-means over n_init_samples uniform points in
// [0,1]^d drawn from rng. Deterministic for fixed inputs.
Centroids generate_cvt(int k, int d, int n_init_samples, int iters, RngStream rng,
                       int n_threads = 1);

// Index of the centroid with minimal squared Euclidean distance; ties break
// toward the lowest index. Accepts any finite vector, in or out of [0,1]^d.
int nearest_centroid(std::span<const double> descriptor, const Centroids& centroids);

void save_centroids_csv(const Centroids& centroids, const std::string& path);
Centroids load_centroids_csv(const std::string& path);

} // namespace uqd

#endif
