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

#ifndef UQDBENCH_STATS_HPP
#define UQDBENCH_STATS_HPP

#include <span>
#include <utility>
#include <vector>

namespace uqd {

// One point of the quality/time trade-off: first coordinate maximized
// (corrected QD-Score), second minimized (time to convergence).
using TradeoffPoint = std::pair<double, double>;

// Indices of the non-dominated subset, in input order. p dominates q iff
// p.first >= q.first and p.second <= q.second with at least one strict.
std::vector<std::size_t> pareto_front(std::span<const TradeoffPoint> points);

// Two-sided Mann-Whitney U (Wilcoxon rank-sum) p-value, normal
// approximation with midranks, tie correction and continuity correction.
// Degenerate all-equal inputs give p = 1.
double rank_sum_test(std::span<const double> a, std::span<const double> b);

double bonferroni(double p, int m);

} // namespace uqd

#endif
