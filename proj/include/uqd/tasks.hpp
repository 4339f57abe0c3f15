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

#ifndef UQDBENCH_TASKS_HPP
#define UQDBENCH_TASKS_HPP

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uqd/core.hpp"
#include "uqd/rng.hpp"

namespace uqd {

struct NoiseModel {
    double fitness_std = 0.0;
    double descriptor_std = 0.0;
    double heteroscedastic_gain = 0.0; // 0 disables solution-dependent noise

    bool is_zero() const
    {
        return fitness_std == 0.0 && descriptor_std == 0.0 && heteroscedastic_gain == 0.0;
    }
};

struct TaskSpec {
    std::string name;
    int genotype_dim = 0;
    int descriptor_dim = 0;
    std::pair<double, double> fitness_range{0.0, 1.0}; // for plots and score offsets
    NoiseModel noise;
};

// A noisy evaluation function. Tasks are pure functions of
// (genotype, rng stream) and safe for unlimited parallel invocation.
class Task {
public:
    virtual ~Task() = default;
    virtual const TaskSpec& spec() const = 0;
    virtual Evaluation evaluate(const Genotype& genotype, RngStream& rng) const = 0;
};

// Planar redundant arm, n equal links of length 0.5/n anchored at
// (0.5, 0.5). Fitness is the negated population variance of the genes;
// the descriptor is the end-effector position, clipped to [0,1]^2.
Evaluation arm_evaluate(const Genotype& genotype, const NoiseModel& noise, RngStream& rng);

// Sphere-like objective over the first n-1 genes with descriptor (g1, g2);
// the last gene scales an additive Gaussian noise on both fitness and
// descriptor, so solutions differ in how reproducible they are.
Evaluation het_sphere_evaluate(const Genotype& genotype, const NoiseModel& noise, RngStream& rng);

class ArmTask : public Task {
public:
    explicit ArmTask(int genotype_dim = 8, NoiseModel noise = {});
    const TaskSpec& spec() const override { return spec_; }
    Evaluation evaluate(const Genotype& genotype, RngStream& rng) const override;

private:
    TaskSpec spec_;
};

class HetSphereTask : public Task {
public:
    explicit HetSphereTask(int genotype_dim = 8, NoiseModel noise = {0.0, 0.0, 0.1});
    const TaskSpec& spec() const override { return spec_; }
    Evaluation evaluate(const Genotype& genotype, RngStream& rng) const override;

private:
    TaskSpec spec_;
};

struct EvalRequest {
    Genotype genotype;
    int n_samples = 1;
    RngStream stream; // sample j consumes stream.substream(j)
};

// Evaluates every requested draw, grouped per request. Each (request,
// sample) pair derives its own stream, so the output is independent of
// thread count and execution order. Item errors propagate.
std::vector<std::vector<Evaluation>> evaluate_batch(const Task& task,
                                                    std::span<const EvalRequest> requests,
                                                    int n_threads = 1);

} // namespace uqd

#endif
