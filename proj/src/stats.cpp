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

#include "uqd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "uqd/core.hpp"

namespace uqd {

std::vector<std::size_t> pareto_front(std::span<const TradeoffPoint> points)
{
    if (points.empty()) throw ContractViolation("pareto_front: empty input");
    // Sweep over time ascending (quality descending on ties): a point is
    // dominated iff an earlier point in this order has strictly better
    // quality, or equal quality with strictly smaller time. Exact duplicates
    // of a kept point are kept too (neither dominates the other).
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (points[i].second != points[j].second) return points[i].second < points[j].second;
        if (points[i].first != points[j].first) return points[i].first > points[j].first;
        return i < j;
    });
    std::vector<bool> keep(points.size(), false);
    double best_quality = -std::numeric_limits<double>::infinity();
    double best_quality_time = 0.0;
    for (std::size_t idx : order) {
        const auto& [quality, time] = points[idx];
        if (quality > best_quality) {
            keep[idx] = true;
            best_quality = quality;
            best_quality_time = time;
        } else if (quality == best_quality && time == best_quality_time) {
            keep[idx] = true; // exact duplicate of a front point
        }
    }
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (keep[i]) front.push_back(i);
    return front;
}

double rank_sum_test(std::span<const double> a, std::span<const double> b)
{
    if (a.size() < 3 || b.size() < 3)
        throw ContractViolation("rank_sum_test: each sample needs >= 3 values");
    const std::size_t n1 = a.size();
    const std::size_t n2 = b.size();
    const std::size_t n = n1 + n2;

    struct Entry {
        double value;
        bool from_a;
    };
    std::vector<Entry> all;
    all.reserve(n);
    for (double v : a) all.push_back({v, true});
    for (double v : b) all.push_back({v, false});
    std::sort(all.begin(), all.end(),
              [](const Entry& x, const Entry& y) { return x.value < y.value; });

    double rank_sum_a = 0.0;
    double tie_term = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && all[j].value == all[i].value) ++j;
        const double t = static_cast<double>(j - i);
        const double midrank = 0.5 * static_cast<double>(i + 1 + j); // average of ranks i+1..j
        for (std::size_t k = i; k < j; ++k)
            if (all[k].from_a) rank_sum_a += midrank;
        tie_term += t * t * t - t;
        i = j;
    }

    const double u = rank_sum_a - 0.5 * static_cast<double>(n1) * static_cast<double>(n1 + 1);
    const double mu = 0.5 * static_cast<double>(n1) * static_cast<double>(n2);
    const double nn = static_cast<double>(n);
    const double variance = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 *
                            ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
    if (variance <= 0.0) return 1.0; // all observations equal

    double z = u - mu;
    if (z > 0.5) z -= 0.5;
    else if (z < -0.5) z += 0.5;
    else z = 0.0;
    z /= std::sqrt(variance);
    const double p = std::erfc(std::abs(z) / std::sqrt(2.0));
    return std::min(1.0, std::max(0.0, p));
}

double bonferroni(double p, int m)
{
    if (m < 1) throw ContractViolation("bonferroni: m must be >= 1");
    return std::min(1.0, p * static_cast<double>(m));
}

} // namespace uqd
