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

#include "uqd/tessellation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "uqd/parallel.hpp"

namespace uqd {

namespace {

int nearest_index(const double* point, const std::vector<double>& centers, int k, int dim)
{
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
        const double* row = centers.data() + static_cast<std::size_t>(c) * dim;
        double dist = 0.0;
        for (int j = 0; j < dim; ++j) {
            const double diff = point[j] - row[j];
            dist += diff * diff;
        }
        if (dist < best_dist) {
            best_dist = dist;
            best = c;
        }
    }
    return best;
}

} // namespace

Centroids lloyd_kmeans(const std::vector<double>& samples, int n, int dim, int k, int iters,
                       int n_threads)
{
    if (k < 1 || dim < 1) throw ConfigurationError("lloyd_kmeans: k and dim must be >= 1");
    if (n < k) throw ConfigurationError("lloyd_kmeans: fewer samples than centroids");

    Centroids out;
    out.k = k;
    out.dim = dim;
    out.data.assign(samples.begin(), samples.begin() + static_cast<std::size_t>(k) * dim);

    std::vector<int> assign(n, -1);
    std::vector<int> prev_assign(n, -1);
    std::vector<double> sums(static_cast<std::size_t>(k) * dim);
    std::vector<std::int64_t> counts(k);

    for (int iter = 0; iter < iters; ++iter) {
        // Assignment is pure per sample; accumulation stays sequential so the
        // result is bit-identical for any thread count.
        parallel_for(static_cast<std::size_t>(n), n_threads, [&](std::size_t i) {
            assign[i] = nearest_index(samples.data() + i * dim, out.data, k, dim);
        });
        if (iter > 0 && assign == prev_assign) break;

        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (int i = 0; i < n; ++i) {
            const int c = assign[i];
            counts[c] += 1;
            const double* row = samples.data() + static_cast<std::size_t>(i) * dim;
            double* acc = sums.data() + static_cast<std::size_t>(c) * dim;
            for (int j = 0; j < dim; ++j) acc[j] += row[j];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) continue; // empty cluster keeps its centroid
            double* row = out.data.data() + static_cast<std::size_t>(c) * dim;
            const double* acc = sums.data() + static_cast<std::size_t>(c) * dim;
            for (int j = 0; j < dim; ++j) row[j] = acc[j] / static_cast<double>(counts[c]);
        }
        prev_assign = assign;
    }
    return out;
}

Centroids generate_cvt(int k, int d, int n_init_samples, int iters, RngStream rng, int n_threads)
{
    if (k < 1 || d < 1) throw ConfigurationError("generate_cvt: k and d must be >= 1");
    if (n_init_samples < k)
        throw ConfigurationError("generate_cvt: n_init_samples must be >= k");
    std::vector<double> samples(static_cast<std::size_t>(n_init_samples) * d);
    for (double& v : samples) v = rng.uniform();
    return lloyd_kmeans(samples, n_init_samples, d, k, iters, n_threads);
}

int nearest_centroid(std::span<const double> descriptor, const Centroids& centroids)
{
    if (static_cast<int>(descriptor.size()) != centroids.dim)
        throw ContractViolation("nearest_centroid: descriptor dimension mismatch");
    for (double v : descriptor)
        if (!std::isfinite(v)) throw ContractViolation("nearest_centroid: non-finite descriptor");
    return nearest_index(descriptor.data(), centroids.data, centroids.k, centroids.dim);
}

void save_centroids_csv(const Centroids& centroids, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_centroids_csv: cannot open " + path);
    char buf[64];
    for (int i = 0; i < centroids.k; ++i) {
        for (int j = 0; j < centroids.dim; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", centroids.data[static_cast<std::size_t>(i) * centroids.dim + j]);
            out << (j ? "," : "") << buf;
        }
        out << "\n";
    }
}

Centroids load_centroids_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_centroids_csv: cannot open " + path);
    Centroids c;
    std::string line;
    int dim = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        int count = 0;
        while (std::getline(ss, field, ',')) {
            c.data.push_back(std::stod(field));
            ++count;
        }
        if (dim < 0) dim = count;
        else if (count != dim) throw std::runtime_error("load_centroids_csv: ragged rows in " + path);
        c.k += 1;
    }
    if (c.k == 0) throw std::runtime_error("load_centroids_csv: empty file " + path);
    c.dim = dim;
    return c;
}

} // namespace uqd
