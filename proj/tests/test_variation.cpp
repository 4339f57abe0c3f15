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

#include <doctest.h>

#include <cmath>
#include <memory>

#include "uqd/variation.hpp"

using namespace uqd;

namespace {

std::shared_ptr<const Centroids> grid_1d(std::initializer_list<double> points)
{
    auto c = std::make_shared<Centroids>();
    c->k = static_cast<int>(points.size());
    c->dim = 1;
    c->data.assign(points);
    return c;
}

SolutionRecord rec1d(double descriptor, double fitness, Genotype g = {0.5})
{
    return fresh_record(std::move(g), Evaluation{fitness, {descriptor}});
}

} // namespace

TEST_CASE("iso+line mutation: zero sigmas reproduce the first parent")
{
    RngStream rng(1, 1);
    const Genotype x{0.1, 0.7, 0.3};
    const Genotype y{0.9, 0.2, 0.8};
    const Genotype child = iso_line_mutation(x, y, {0.0, 0.0}, rng);
    CHECK(child == x);
}

TEST_CASE("iso+line mutation clips to the unit hypercube")
{
    RngStream rng(2, 2);
    const Genotype x(8, 0.0);
    const Genotype y(8, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const Genotype child = iso_line_mutation(x, y, {0.5, 0.5}, rng);
        for (double g : child) {
            CHECK(g >= 0.0);
            CHECK(g <= 1.0);
        }
    }
}

TEST_CASE("iso+line mutation rejects mismatched parents")
{
    RngStream rng(3, 3);
    CHECK_THROWS_AS(iso_line_mutation({0.5}, {0.5, 0.5}, {}, rng), ContractViolation);
}

TEST_CASE("per-gene child mean matches the first parent (Monte-Carlo oracle)")
{
    // Away from the bounds the operator is unbiased around x.
    const Genotype x{0.4, 0.6, 0.5};
    const Genotype y{0.5, 0.4, 0.6};
    const VariationParams params; // 0.005 / 0.05
    RngStream rng(4, 4);
    const int n = 100000;
    std::vector<double> mean(x.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        const Genotype child = iso_line_mutation(x, y, params, rng);
        for (std::size_t j = 0; j < x.size(); ++j) mean[j] += child[j];
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        mean[j] /= n;
        const double sigma_total = std::sqrt(
            params.sigma1 * params.sigma1 +
            params.sigma2 * params.sigma2 * (y[j] - x[j]) * (y[j] - x[j]));
        CHECK(std::abs(mean[j] - x[j]) < 3.0 * sigma_total / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("per-gene line draws stay in bounds and differ from the shared draw")
{
    const Genotype x{0.4, 0.6, 0.5, 0.5};
    const Genotype y{0.6, 0.4, 0.7, 0.3};
    VariationParams per_gene{0.005, 0.05, true};
    VariationParams shared{0.005, 0.05, false};
    RngStream r1(40, 1), r2(40, 1);
    const Genotype a = iso_line_mutation(x, y, per_gene, r1);
    const Genotype b = iso_line_mutation(x, y, shared, r2);
    for (double g : a) {
        CHECK(g >= 0.0);
        CHECK(g <= 1.0);
    }
    CHECK(a != b); // different draw layout

    // per-gene mode is still unbiased around x
    RngStream rng(41, 1);
    const int n = 100000;
    double mean0 = 0.0;
    for (int i = 0; i < n; ++i) mean0 += iso_line_mutation(x, y, per_gene, rng)[0];
    mean0 /= n;
    const double sigma_total =
        std::sqrt(per_gene.sigma1 * per_gene.sigma1 +
                  per_gene.sigma2 * per_gene.sigma2 * (y[0] - x[0]) * (y[0] - x[0]));
    CHECK(std::abs(mean0 - x[0]) < 3.0 * sigma_total / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("sigma2 = 0 reduces to isotropic Gaussian mutation")
{
    const Genotype x{0.5, 0.5};
    const Genotype y{0.9, 0.1};
    const VariationParams params{0.02, 0.0};
    RngStream rng(5, 5);
    const int n = 200000;
    std::vector<double> sum(2, 0.0), sq(2, 0.0);
    for (int i = 0; i < n; ++i) {
        const Genotype child = iso_line_mutation(x, y, params, rng);
        for (int j = 0; j < 2; ++j) {
            sum[j] += child[j] - x[j];
            sq[j] += (child[j] - x[j]) * (child[j] - x[j]);
        }
    }
    for (int j = 0; j < 2; ++j) {
        const double var = sq[j] / n - (sum[j] / n) * (sum[j] / n);
        CHECK(var == doctest::Approx(params.sigma1 * params.sigma1).epsilon(0.02));
    }
}

TEST_CASE("uniform parent selection: single occupied cell always wins")
{
    Archive archive(grid_1d({0.25, 0.75}), 1, AdditionRule::ElitistFlat, InCellSelector::Best);
    RngStream add_rng(6, 6);
    archive.try_add(rec1d(0.2, 1.0), add_rng);
    RngStream rng(6, 7);
    for (int i = 0; i < 20; ++i)
        CHECK(select_parent_uniform(archive, rng).mean_fitness == 1.0);
}

TEST_CASE("uniform parent selection: two cells drawn 50/50 (binomial oracle)")
{
    Archive archive(grid_1d({0.25, 0.75}), 1, AdditionRule::ElitistFlat, InCellSelector::Best);
    RngStream add_rng(7, 7);
    archive.try_add(rec1d(0.2, 1.0), add_rng);
    archive.try_add(rec1d(0.8, 2.0), add_rng);
    RngStream rng(7, 8);
    int first = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i)
        first += select_parent_uniform(archive, rng).mean_fitness == 1.0;
    // 3 sigma of Binomial(10^4, 1/2) is 150; the contract allows +-3%
    CHECK(std::abs(first - n / 2) < 0.03 * n);
}

TEST_CASE("uniform parent selection fails on an empty archive")
{
    Archive archive(grid_1d({0.5}), 1, AdditionRule::ElitistFlat, InCellSelector::Best);
    RngStream rng(8, 8);
    CHECK_THROWS_AS(select_parent_uniform(archive, rng), EmptyArchiveError);
}

TEST_CASE("random genotypes fill the unit cube")
{
    RngStream rng(9, 9);
    const Genotype g = random_genotype(16, rng);
    CHECK(g.size() == 16);
    for (double v : g) {
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
}
