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

#ifndef UQDBENCH_CORE_HPP
#define UQDBENCH_CORE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace uqd {

struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct ConfigurationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyArchiveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Search-space point; every gene lives in [0, 1].
using Genotype = std::vector<double>;
// Behaviour characterisation; one entry per descriptor dimension.
using Descriptor = std::vector<double>;

// One noisy draw of (fitness, descriptor) for a genotype.
struct Evaluation {
    double fitness = 0.0;
    Descriptor descriptor;
};

// A genotype together with running estimates of its expected fitness and
// descriptor, plus the number of evaluations folded into those estimates.
struct SolutionRecord {
    Genotype genotype;
    std::int64_t eval_count = 0;
    double mean_fitness = 0.0;
    Descriptor mean_descriptor;
};

inline SolutionRecord fresh_record(Genotype genotype, const Evaluation& eval)
{
    if (eval.descriptor.empty())
        throw ContractViolation("fresh_record: evaluation has empty descriptor");
    if (!std::isfinite(eval.fitness))
        throw ContractViolation("fresh_record: non-finite fitness");
    for (double d : eval.descriptor)
        if (!std::isfinite(d)) throw ContractViolation("fresh_record: non-finite descriptor");
    return SolutionRecord{std::move(genotype), 1, eval.fitness, eval.descriptor};
}

// Running arithmetic mean: m' = m + (x - m) / (k + 1), applied to the
// fitness and to every descriptor component.
inline SolutionRecord update_running_mean(SolutionRecord record, const Evaluation& eval)
{
    if (record.eval_count < 1)
        throw ContractViolation("update_running_mean: record has eval_count < 1");
    if (eval.descriptor.size() != record.mean_descriptor.size())
        throw ContractViolation("update_running_mean: descriptor dimension mismatch");
    const double k1 = static_cast<double>(record.eval_count + 1);
    record.mean_fitness += (eval.fitness - record.mean_fitness) / k1;
    for (std::size_t j = 0; j < eval.descriptor.size(); ++j)
        record.mean_descriptor[j] += (eval.descriptor[j] - record.mean_descriptor[j]) / k1;
    record.eval_count += 1;
    return record;
}

} // namespace uqd

#endif
