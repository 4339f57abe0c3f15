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

#include "uqd/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uqd/parallel.hpp"

namespace uqd {

namespace {

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

double population_variance(const Genotype& g)
{
    double mean = 0.0;
    for (double v : g) mean += v;
    mean /= static_cast<double>(g.size());
    double var = 0.0;
    for (double v : g) var += (v - mean) * (v - mean);
    return var / static_cast<double>(g.size());
}

} // namespace

Evaluation arm_evaluate(const Genotype& genotype, const NoiseModel& noise, RngStream& rng)
{
    const int n = static_cast<int>(genotype.size());
    if (n < 1) throw ContractViolation("arm_evaluate: empty genotype");

    const double fitness_clean = -population_variance(genotype);

    const double link = 0.5 / static_cast<double>(n);
    double angle = 0.0;
    double x = 0.5;
    double y = 0.5;
    for (int i = 0; i < n; ++i) {
        angle += std::numbers::pi * (2.0 * genotype[i] - 1.0);
        x += link * std::cos(angle);
        y += link * std::sin(angle);
    }

    Evaluation eval;
    eval.fitness = fitness_clean;
    if (noise.fitness_std > 0.0) eval.fitness += noise.fitness_std * rng.normal();
    eval.descriptor = {x, y};
    if (noise.descriptor_std > 0.0)
        for (double& d : eval.descriptor) d += noise.descriptor_std * rng.normal();
    for (double& d : eval.descriptor) d = clip01(d);
    return eval;
}

Evaluation het_sphere_evaluate(const Genotype& genotype, const NoiseModel& noise, RngStream& rng)
{
    const int n = static_cast<int>(genotype.size());
    if (n < 3) throw ContractViolation("het_sphere_evaluate: genotype dimension must be >= 3");

    double fitness_clean = 0.0;
    for (int i = 0; i + 1 < n; ++i)
        fitness_clean -= (genotype[i] - 0.5) * (genotype[i] - 0.5);

    // The last gene controls the noise scale; combined with any baseline
    // noise as independent Gaussians.
    const double het = noise.heteroscedastic_gain * genotype[n - 1];
    const double f_std = std::sqrt(noise.fitness_std * noise.fitness_std + het * het);
    const double d_std = std::sqrt(noise.descriptor_std * noise.descriptor_std + het * het);

    Evaluation eval;
    eval.fitness = fitness_clean;
    if (f_std > 0.0) eval.fitness += f_std * rng.normal();
    eval.descriptor = {genotype[0], genotype[1]};
    if (d_std > 0.0)
        for (double& d : eval.descriptor) d += d_std * rng.normal();
    for (double& d : eval.descriptor) d = clip01(d);
    return eval;
}

ArmTask::ArmTask(int genotype_dim, NoiseModel noise)
{
    if (genotype_dim < 1) throw ConfigurationError("ArmTask: genotype_dim must be >= 1");
    spec_.name = "arm";
    spec_.genotype_dim = genotype_dim;
    spec_.descriptor_dim = 2;
    spec_.fitness_range = {-0.24, 0.00027};
    spec_.noise = noise;
}

Evaluation ArmTask::evaluate(const Genotype& genotype, RngStream& rng) const
{
    if (static_cast<int>(genotype.size()) != spec_.genotype_dim)
        throw ContractViolation("ArmTask::evaluate: genotype dimension mismatch");
    return arm_evaluate(genotype, spec_.noise, rng);
}

HetSphereTask::HetSphereTask(int genotype_dim, NoiseModel noise)
{
    if (genotype_dim < 3) throw ConfigurationError("HetSphereTask: genotype_dim must be >= 3");
    spec_.name = "het_sphere";
    spec_.genotype_dim = genotype_dim;
    spec_.descriptor_dim = 2;
    spec_.fitness_range = {-0.25 * static_cast<double>(genotype_dim - 1), 0.0};
    spec_.noise = noise;
}

Evaluation HetSphereTask::evaluate(const Genotype& genotype, RngStream& rng) const
{
    if (static_cast<int>(genotype.size()) != spec_.genotype_dim)
        throw ContractViolation("HetSphereTask::evaluate: genotype dimension mismatch");
    return het_sphere_evaluate(genotype, spec_.noise, rng);
}

std::vector<std::vector<Evaluation>> evaluate_batch(const Task& task,
                                                    std::span<const EvalRequest> requests,
                                                    int n_threads)
{
    std::vector<std::vector<Evaluation>> out(requests.size());
    parallel_for(requests.size(), n_threads, [&](std::size_t i) {
        const auto& req = requests[i];
        if (req.n_samples < 1)
            throw ContractViolation("evaluate_batch: n_samples must be >= 1");
        out[i].reserve(static_cast<std::size_t>(req.n_samples));
        for (int j = 0; j < req.n_samples; ++j) {
            RngStream s = req.stream.substream(static_cast<std::uint64_t>(j));
            out[i].push_back(task.evaluate(req.genotype, s));
        }
    });
    return out;
}

} // namespace uqd
