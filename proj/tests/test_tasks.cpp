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

#include "uqd/tasks.hpp"
#include "uqd/variation.hpp"

using namespace uqd;

TEST_CASE("arm: straight arm at the all-0.5 genotype")
{
    RngStream rng(1, 1);
    const Evaluation e = arm_evaluate(Genotype(8, 0.5), {}, rng);
    CHECK(e.fitness == doctest::Approx(0.0));
    CHECK(e.descriptor[0] == doctest::Approx(1.0));
    CHECK(e.descriptor[1] == doctest::Approx(0.5));
}

TEST_CASE("arm: any constant genotype has zero variance fitness")
{
    RngStream rng(2, 2);
    for (double c : {0.0, 0.3, 0.9}) {
        const Evaluation e = arm_evaluate(Genotype(8, c), {}, rng);
        CHECK(e.fitness == doctest::Approx(0.0));
    }
}

TEST_CASE("arm: alternating genotype hits the population-variance oracle")
{
    RngStream rng(3, 3);
    Genotype g(8);
    for (int i = 0; i < 8; ++i) g[i] = i % 2 == 0 ? 0.75 : 0.25;
    const Evaluation e = arm_evaluate(g, {}, rng);
    CHECK(e.fitness == doctest::Approx(-0.0625).epsilon(1e-12));
}

TEST_CASE("arm: descriptor stays in the unit square")
{
    RngStream rng(4, 4);
    NoiseModel noisy{0.0, 0.05, 0.0};
    for (int i = 0; i < 5000; ++i) {
        Genotype g = random_genotype(8, rng);
        const Evaluation clean = arm_evaluate(g, {}, rng);
        for (double d : clean.descriptor) {
            CHECK(d >= 0.0);
            CHECK(d <= 1.0);
        }
        const Evaluation noisy_eval = arm_evaluate(g, noisy, rng);
        for (double d : noisy_eval.descriptor) {
            CHECK(d >= 0.0);
            CHECK(d <= 1.0);
        }
    }
}

TEST_CASE("arm: clean optimum over 10^6 random genotypes sits near constant genotypes")
{
    RngStream rng(5, 5);
    double best = -1e9;
    Genotype best_g;
    for (int i = 0; i < 1000000; ++i) {
        const Genotype g = random_genotype(8, rng);
        double mean = 0.0;
        for (double v : g) mean += v;
        mean /= 8.0;
        double var = 0.0;
        for (double v : g) var += (v - mean) * (v - mean);
        var /= 8.0;
        if (-var > best) {
            best = -var;
            best_g = g;
        }
    }
    // the maximum of -variance is 0, attained only when all genes are equal
    CHECK(best < 0.0);
    CHECK(best > -0.02);
    double spread = 0.0;
    for (double v : best_g)
        spread = std::max(spread, std::abs(v - best_g[0]));
    CHECK(spread < 0.4);
    RngStream check_rng(5, 6);
    CHECK(arm_evaluate(best_g, {}, check_rng).fitness == doctest::Approx(best));
}

TEST_CASE("het_sphere: zero-variance gene makes the task deterministic")
{
    NoiseModel noise{0.0, 0.0, 0.5};
    Genotype g{0.3, 0.7, 0.2, 0.0}; // last gene 0 disables the noise
    RngStream r1(6, 6), r2(7, 7);
    const Evaluation a = het_sphere_evaluate(g, noise, r1);
    const Evaluation b = het_sphere_evaluate(g, noise, r2);
    CHECK(a.fitness == b.fitness);
    CHECK(a.descriptor == b.descriptor);
}

TEST_CASE("het_sphere: optimum and descriptor at the center")
{
    RngStream rng(8, 8);
    Genotype g(8, 0.5);
    g[7] = 0.0;
    const Evaluation e = het_sphere_evaluate(g, {0.0, 0.0, 0.1}, rng);
    CHECK(e.fitness == doctest::Approx(0.0));
    CHECK(e.descriptor[0] == doctest::Approx(0.5));
    CHECK(e.descriptor[1] == doctest::Approx(0.5));
}

TEST_CASE("het_sphere: empirical descriptor std matches gain * g_n (sample-std oracle)")
{
    RngStream rng(9, 9);
    Genotype g(8, 0.5);
    g[7] = 1.0; // sigma = 0.1
    const NoiseModel noise{0.0, 0.0, 0.1};
    const int n = 10000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const Evaluation e = het_sphere_evaluate(g, noise, rng);
        sum += e.descriptor[0];
        sq += e.descriptor[0] * e.descriptor[0];
    }
    const double mean = sum / n;
    const double std = std::sqrt(sq / n - mean * mean);
    CHECK(std == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("het_sphere: lower noise gene gives lower sample variance (ordering property)")
{
    const NoiseModel noise{0.0, 0.0, 0.1};
    Genotype lo(8, 0.5), hi(8, 0.5);
    lo[7] = 0.4;
    hi[7] = 0.7; // gap 0.3 > 0.2
    int ordered = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto sample_var = [&](const Genotype& g, std::uint64_t id) {
            RngStream rng(1000 + trial, id);
            double sum = 0.0, sq = 0.0;
            const int n = 1000;
            for (int i = 0; i < n; ++i) {
                const Evaluation e = het_sphere_evaluate(g, noise, rng);
                sum += e.descriptor[1];
                sq += e.descriptor[1] * e.descriptor[1];
            }
            return sq / n - (sum / n) * (sum / n);
        };
        ordered += sample_var(lo, 1) < sample_var(hi, 2);
    }
    CHECK(ordered >= 99);
}

TEST_CASE("het_sphere rejects tiny genotypes")
{
    RngStream rng(10, 10);
    CHECK_THROWS_AS(het_sphere_evaluate({0.5, 0.5}, {}, rng), ContractViolation);
}

TEST_CASE("zero noise models make tasks pure functions")
{
    const ArmTask arm(8, {});
    const Genotype g{0.1, 0.9, 0.4, 0.6, 0.2, 0.8, 0.3, 0.7};
    RngStream r1(11, 11), r2(12, 12);
    const Evaluation a = arm.evaluate(g, r1);
    const Evaluation b = arm.evaluate(g, r2);
    CHECK(a.fitness == b.fitness);
    CHECK(a.descriptor == b.descriptor);
}

TEST_CASE("evaluate_batch: grouping, determinism and emptiness")
{
    const ArmTask task(8, {0.01, 0.01, 0.0});
    const RngStream base(13, 13);

    std::vector<EvalRequest> reqs;
    reqs.push_back({Genotype(8, 0.5), 3, base.substream(1)});
    const auto grouped = evaluate_batch(task, reqs, 1);
    REQUIRE(grouped.size() == 1);
    CHECK(grouped[0].size() == 3);
    // i.i.d. draws differ
    CHECK(grouped[0][0].fitness != grouped[0][1].fitness);

    // batch result does not depend on thread count or request order
    std::vector<EvalRequest> many;
    RngStream grng(14, 14);
    for (int i = 0; i < 20; ++i)
        many.push_back({random_genotype(8, grng), 2, base.substream(2, i)});
    const auto serial = evaluate_batch(task, many, 1);
    const auto threaded = evaluate_batch(task, many, 8);
    for (std::size_t i = 0; i < many.size(); ++i)
        for (int j = 0; j < 2; ++j) {
            CHECK(serial[i][j].fitness == threaded[i][j].fitness);
            CHECK(serial[i][j].descriptor == threaded[i][j].descriptor);
        }

    CHECK(evaluate_batch(task, {}, 4).empty());

    std::vector<EvalRequest> bad;
    bad.push_back({Genotype(8, 0.5), 0, base.substream(3)});
    CHECK_THROWS_AS(evaluate_batch(task, bad, 1), ContractViolation);
}
