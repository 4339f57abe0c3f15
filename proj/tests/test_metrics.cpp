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

#include <algorithm>
#include <cmath>
#include <memory>

#include "uqd/metrics.hpp"

using namespace uqd;

namespace {

std::shared_ptr<const Centroids> grid_2x2()
{
    auto c = std::make_shared<Centroids>();
    c->k = 4;
    c->dim = 2;
    c->data = {0.25, 0.25, 0.75, 0.25, 0.25, 0.75, 0.75, 0.75};
    return c;
}

// Deterministic per-genotype fitness/descriptor plus Gaussian fitness noise
// with a per-genotype scale; genotype[0] stores the clean fitness value,
// genotype[1] the noise std, genotype[2..3] the clean descriptor.
class TableTask : public Task {
public:
    TableTask()
    {
        spec_.name = "table";
        spec_.genotype_dim = 4;
        spec_.descriptor_dim = 2;
        spec_.fitness_range = {-10.0, 10.0};
    }
    const TaskSpec& spec() const override { return spec_; }
    Evaluation evaluate(const Genotype& g, RngStream& rng) const override
    {
        Evaluation e;
        e.fitness = g[0] + g[1] * rng.normal();
        e.descriptor = {g[2], g[3]};
        return e;
    }

private:
    TaskSpec spec_;
};

// As TableTask but the descriptor moves to (genotype[4], genotype[5]) on
// reevaluation, regardless of where the record claims to live.
class DriftTask : public Task {
public:
    DriftTask()
    {
        spec_.name = "drift";
        spec_.genotype_dim = 6;
        spec_.descriptor_dim = 2;
        spec_.fitness_range = {-10.0, 10.0};
    }
    const TaskSpec& spec() const override { return spec_; }
    Evaluation evaluate(const Genotype& g, RngStream& rng) const override
    {
        Evaluation e;
        e.fitness = g[0] + g[1] * rng.normal();
        e.descriptor = {g[4], g[5]};
        return e;
    }

private:
    TaskSpec spec_;
};

} // namespace

TEST_CASE("median_of: odd, even and error cases")
{
    CHECK(median_of({3.0}) == 3.0);
    CHECK(median_of({1.0, 2.0, 9.0}) == 2.0);
    CHECK(median_of({1.0, 2.0, 3.0, 10.0}) == 2.5);
    CHECK_THROWS_AS(median_of({}), ContractViolation);
}

TEST_CASE("median_per_dimension: singleton, per-axis medians, sort oracle")
{
    CHECK(median_per_dimension(std::vector<Descriptor>{{1.0, 2.0}}) == Descriptor{1.0, 2.0});
    const std::vector<Descriptor> three{{0.0, 0.0}, {2.0, 4.0}, {4.0, 0.0}};
    CHECK(median_per_dimension(three) == Descriptor{2.0, 0.0});

    RngStream rng(1, 1);
    std::vector<Descriptor> samples(101, Descriptor(3));
    for (auto& s : samples)
        for (double& v : s) v = rng.normal();
    const Descriptor med = median_per_dimension(samples);
    for (int j = 0; j < 3; ++j) {
        std::vector<double> column;
        for (const auto& s : samples) column.push_back(s[j]);
        std::sort(column.begin(), column.end());
        CHECK(med[j] == column[50]);
    }

    CHECK_THROWS_AS(median_per_dimension(std::vector<Descriptor>{}), ContractViolation);
    CHECK_THROWS_AS(median_per_dimension(std::vector<Descriptor>{{1.0}, {1.0, 2.0}}),
                    ContractViolation);
}

TEST_CASE("corrected archive: zero noise reproduces the training archive")
{
    const TableTask task; // noise std set per record; use 0
    auto centroids = grid_2x2();
    Archive archive(centroids, 2, AdditionRule::DeepElitist, InCellSelector::Best);
    RngStream rng(2, 2);
    auto add = [&](double f, double dx, double dy) {
        archive.try_add(fresh_record({f, 0.0, dx, dy}, Evaluation{f, {dx, dy}}), rng);
    };
    add(1.0, 0.2, 0.2);
    add(0.5, 0.2, 0.3);
    add(2.0, 0.8, 0.2);

    const auto corrected =
        corrected_archive(archive, task, 16, CorrectionMode::BestOfCell, RngStream(3, 3), 2);
    CHECK(corrected.archive.qd_score() == doctest::Approx(archive.qd_score()).epsilon(1e-12));
    CHECK(corrected.archive.occupied_cells() == archive.occupied_cells());
    CHECK(corrected.evals_used == 16 * archive.occupied_cells());
    for (const auto& [cell, r] : corrected.reevals) {
        CHECK(r.fitness_variance == 0.0);
        CHECK(r.scalar_descriptor_variance() == 0.0);
    }
}

TEST_CASE("corrected archive: Gaussian cell median lands near the true value")
{
    const TableTask task;
    auto centroids = grid_2x2();
    Archive archive(centroids, 1, AdditionRule::ElitistFlat, InCellSelector::Best);
    RngStream rng(4, 4);
    // clean fitness 0, noise std 1
    archive.try_add(fresh_record({0.0, 1.0, 0.25, 0.25}, Evaluation{0.3, {0.25, 0.25}}),
                    rng);
    const auto corrected =
        corrected_archive(archive, task, 512, CorrectionMode::InCellSelector, RngStream(5, 5), 2);
    const auto& r = corrected.reevals.begin()->second;
    // standard error of the sample median of 512 normals is ~1.2533/sqrt(512)
    CHECK(std::abs(r.median_fitness) < 0.15);
    CHECK(r.fitness_variance == doctest::Approx(1.0).epsilon(0.25));
    CHECK(r.m == 512);
}

TEST_CASE("corrected archive: drifting best record empties its original cell")
{
    const DriftTask task;
    auto centroids = grid_2x2();
    Archive archive(centroids, 2, AdditionRule::DeepElitist, InCellSelector::Best);
    RngStream rng(6, 6);
    // honest record: lives in cell 0 and reevaluates there
    archive.try_add(
        fresh_record({0.0, 0.0, 0.0, 0.0, 0.25, 0.25}, Evaluation{0.0, {0.25, 0.25}}), rng);
    // lucky record: claims cell 0 with fitness 10, but reevaluates into cell 1
    archive.try_add(
        fresh_record({1.0, 0.0, 0.0, 0.0, 0.75, 0.25}, Evaluation{10.0, {0.25, 0.25}}), rng);
    REQUIRE(archive.cell(0).size() == 2);

    const auto corrected =
        corrected_archive(archive, task, 8, CorrectionMode::BestOfCell, RngStream(7, 7), 1);
    CHECK(corrected.archive.cell(0).empty());       // original cell emptied
    REQUIRE(corrected.archive.cell(1).size() == 1); // phantom landed at the true location
    CHECK(corrected.archive.cell(1)[0].mean_fitness == doctest::Approx(1.0));
}

TEST_CASE("corrected archive validates inputs")
{
    const TableTask task;
    auto centroids = grid_2x2();
    Archive empty(centroids, 1, AdditionRule::ElitistFlat, InCellSelector::Best);
    CHECK_THROWS_AS(corrected_archive(empty, task, 16, CorrectionMode::BestOfCell, RngStream(1, 1)),
                    ContractViolation);
    RngStream rng(8, 8);
    empty.try_add(fresh_record({0.0, 0.0, 0.25, 0.25}, Evaluation{0.0, {0.25, 0.25}}),
                  rng);
    CHECK_THROWS_AS(corrected_archive(empty, task, 1, CorrectionMode::BestOfCell, RngStream(1, 1)),
                    ConfigurationError);
}

TEST_CASE("qd_score_loss: sign conventions and the undefined marker")
{
    CHECK(qd_score_loss(100.0, 80.0) == doctest::Approx(0.2));
    CHECK(qd_score_loss(5.0, 5.0) == 0.0);
    CHECK(qd_score_loss(100.0, 120.0) == doctest::Approx(-0.2));
    CHECK(std::isnan(qd_score_loss(0.0, 10.0)));
}

TEST_CASE("reproducibility score: formula oracle and bounds")
{
    std::map<int, ReevalResult> results;
    auto mk = [](int cell, double var) {
        ReevalResult r;
        r.cell = cell;
        r.m = 8;
        r.descriptor_variance = {var, var}; // scalar variance = var
        r.fitness_variance = var;
        return r;
    };
    results[0] = mk(0, 1.0);
    results[1] = mk(1, 0.0);
    results[2] = mk(2, 3.0);
    std::map<int, double> norm{{0, 2.0}, {1, 5.0}, {2, 3.0}};
    CHECK(reproducibility_score(results, norm) == doctest::Approx(1.5));

    // zero normalizer contributes 1 per occupied cell
    std::map<int, double> zero_norm{{0, 0.0}, {1, 0.0}, {2, 0.0}};
    CHECK(reproducibility_score(results, zero_norm) == doctest::Approx(3.0));

    // score stays within [0, occupied cells] for max-consistent normalizers
    const std::map<int, ReevalResult>* sets[] = {&results};
    const auto collected = collect_max_variance(sets);
    const double self = reproducibility_score(results, collected.descriptor);
    CHECK(self >= 0.0);
    CHECK(self <= 3.0);
    // self-normalization: zero-variance cells count 1, the rest 0
    CHECK(self == doctest::Approx(1.0));
}

TEST_CASE("collect_max_variance: max across runs, order-invariant")
{
    auto mk = [](int cell, double dvar, double fvar) {
        ReevalResult r;
        r.cell = cell;
        r.m = 4;
        r.descriptor_variance = {dvar};
        r.fitness_variance = fvar;
        return r;
    };
    std::map<int, ReevalResult> run1, run2;
    run1[0] = mk(0, 2.0, 0.5);
    run1[1] = mk(1, 1.0, 1.5);
    run2[0] = mk(0, 5.0, 0.1);
    run2[2] = mk(2, 0.5, 2.5);

    const std::map<int, ReevalResult>* forward[] = {&run1, &run2};
    const std::map<int, ReevalResult>* backward[] = {&run2, &run1};
    const auto a = collect_max_variance(forward);
    const auto b = collect_max_variance(backward);
    CHECK(a.descriptor.at(0) == 5.0);
    CHECK(a.descriptor.at(1) == 1.0);
    CHECK(a.descriptor.at(2) == 0.5);
    CHECK(a.fitness.at(0) == 0.5);
    CHECK(a.descriptor == b.descriptor);
    CHECK(a.fitness == b.fitness);
}

TEST_CASE("time to convergence: threshold crossing, constants, negative finals")
{
    const std::vector<std::pair<double, double>> series{
        {1, 0}, {2, 50}, {3, 95}, {4, 99}, {5, 100}};
    CHECK(time_to_convergence(series) == 3);

    const std::vector<std::pair<double, double>> constant{{1, 7}, {2, 7}, {3, 7}};
    CHECK(time_to_convergence(constant) == 1);

    // negative final: 95% of the way from 0 means <= 0.95 * final
    const std::vector<std::pair<double, double>> negative{
        {1, 0}, {2, -5}, {3, -9.4}, {4, -9.6}, {5, -10}};
    CHECK(time_to_convergence(negative) == 4);

    CHECK_THROWS_AS(time_to_convergence({}), ContractViolation);

    // linear-scan oracle on a random non-decreasing series
    RngStream rng(9, 9);
    std::vector<std::pair<double, double>> random;
    double acc = 0.0;
    for (int i = 0; i < 50; ++i) {
        acc += rng.uniform();
        random.emplace_back(i, acc);
    }
    const double threshold = 0.95 * random.back().second;
    double oracle = random.back().first;
    for (const auto& [x, v] : random)
        if (v >= threshold) {
            oracle = x;
            break;
        }
    CHECK(time_to_convergence(random) == oracle);
}

TEST_CASE("estimator study: zero noise has exactly zero error")
{
    const TableTask task;
    auto centroids = grid_2x2();
    Archive archive(centroids, 1, AdditionRule::ElitistFlat, InCellSelector::Best);
    RngStream rng(10, 10);
    archive.try_add(fresh_record({1.0, 0.0, 0.25, 0.25}, Evaluation{1.0, {0.25, 0.25}}),
                    rng);
    archive.try_add(fresh_record({2.0, 0.0, 0.75, 0.75}, Evaluation{2.0, {0.75, 0.75}}),
                    rng);
    const std::vector<int> ms{4, 16};
    const auto rows = estimator_study(archive, task, 64, ms, RngStream(11, 11), 2);
    for (const auto& r : rows) {
        CHECK(r.fitness_mean_err_med == 0.0);
        CHECK(r.fitness_median_err_med == 0.0);
        CHECK(r.descriptor_mean_err_med == 0.0);
        CHECK(r.descriptor_median_err_med == 0.0);
    }
}

TEST_CASE("estimator study: error shrinks like 1/sqrt(M) (CLT oracle)")
{
    const TableTask task;
    // 128 cells hold 100+ solutions with fitness noise std 0.05
    auto centroids = std::make_shared<Centroids>();
    centroids->k = 128;
    centroids->dim = 2;
    RngStream crng(12, 12);
    for (int i = 0; i < 128; ++i) {
        centroids->data.push_back(crng.uniform());
        centroids->data.push_back(crng.uniform());
    }
    Archive archive(std::shared_ptr<const Centroids>(centroids), 1, AdditionRule::ElitistFlat,
                    InCellSelector::Best);
    RngStream rng(13, 13);
    for (int i = 0; i < 400; ++i) {
        const double dx = rng.uniform();
        const double dy = rng.uniform();
        archive.try_add(fresh_record({rng.normal(), 0.05, dx, dy},
                                     Evaluation{0.0, {dx, dy}}),
                        rng);
    }
    REQUIRE(archive.occupied_cells() >= 100);

    const std::vector<int> ms{16, 64, 256, 1024};
    const auto rows = estimator_study(archive, task, 8192, ms, RngStream(14, 14), 2);

    // median error non-increasing in M (at most one inversion tolerated)
    int inversions = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        inversions += rows[i].fitness_mean_err_med > rows[i - 1].fitness_mean_err_med;
    CHECK(inversions <= 1);

    // CLT: error(16) / error(256) ~ sqrt(256/16) = 4, within 30%
    const double ratio = rows[0].fitness_mean_err_med / rows[2].fitness_mean_err_med;
    CHECK(ratio > 2.8);
    CHECK(ratio < 5.2);

    // at M = M_max the two independent batches nearly agree
    const std::vector<int> full{16, 8192};
    const auto edge = estimator_study(archive, task, 8192, full, RngStream(15, 15), 2);
    CHECK(edge[1].fitness_mean_err_med / edge[0].fitness_mean_err_med < 0.2);
}

TEST_CASE("estimator study validates candidates")
{
    const TableTask task;
    auto centroids = grid_2x2();
    Archive archive(centroids, 1, AdditionRule::ElitistFlat, InCellSelector::Best);
    RngStream rng(16, 16);
    archive.try_add(fresh_record({0.0, 0.0, 0.25, 0.25}, Evaluation{0.0, {0.25, 0.25}}),
                    rng);
    const std::vector<int> bad{4, 128};
    CHECK_THROWS_AS(estimator_study(archive, task, 64, bad, RngStream(1, 1)), ConfigurationError);
}

TEST_CASE("offset qd score helper")
{
    const ArmTask arm(8, {});
    CHECK(qd_score_offset(arm) == doctest::Approx(0.24));
    CHECK(offset_qd_score(-1.0, 10, 0.24) == doctest::Approx(1.4));
}
