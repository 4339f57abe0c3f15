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

#include "uqd/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "uqd/core.hpp"

namespace uqd {

namespace {

struct Rgb {
    int r, g, b;
};

// Compact viridis approximation; t in [0, 1], dark to bright.
Rgb viridis(double t)
{
    static const Rgb anchors[] = {
        {68, 1, 84},   {71, 44, 122},  {59, 81, 139},  {44, 113, 142}, {33, 144, 141},
        {39, 173, 129}, {92, 200, 99}, {170, 220, 50}, {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0);
    const double pos = t * 8.0;
    const int lo = std::min(7, static_cast<int>(pos));
    const double f = pos - lo;
    const Rgb& a = anchors[lo];
    const Rgb& b = anchors[lo + 1];
    return {static_cast<int>(std::lround(a.r + f * (b.r - a.r))),
            static_cast<int>(std::lround(a.g + f * (b.g - a.g))),
            static_cast<int>(std::lround(a.b + f * (b.b - a.b)))};
}

std::string rgb_hex(Rgb c)
{
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

const char* kPalette[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44",
                          "#66ccee", "#aa3377", "#bbbbbb", "#000000"};

} // namespace

std::vector<int> rasterize_cells(const Centroids& centroids, int res)
{
    if (centroids.dim != 2)
        throw ContractViolation("rasterize_cells: descriptor space must be 2-D");
    std::vector<int> owner(static_cast<std::size_t>(res) * res);
    for (int py = 0; py < res; ++py) {
        for (int px = 0; px < res; ++px) {
            const double coords[2] = {(px + 0.5) / res, (py + 0.5) / res};
            owner[static_cast<std::size_t>(py) * res + px] =
                nearest_centroid(std::span<const double>(coords, 2), centroids);
        }
    }
    return owner;
}

void render_cell_heatmap(const std::string& path, const Centroids& centroids,
                         const std::map<int, double>& cell_values, double lo, double hi,
                         const std::string& title, int res)
{
    if (centroids.dim != 2)
        throw ContractViolation("render_cell_heatmap: descriptor space must be 2-D");
    const auto owner = rasterize_cells(centroids, res);
    const double span = hi > lo ? hi - lo : 1.0;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("render_cell_heatmap: cannot open " + path);
    const int margin = 24;
    const int size = res + 2 * margin;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
    out << "<rect width=\"" << size << "\" height=\"" << size << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << margin << "\" y=\"" << margin - 8
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << title << "</text>\n";
    out << "<g transform=\"translate(" << margin << "," << margin << ")\">\n";
    out << "<rect width=\"" << res << "\" height=\"" << res << "\" fill=\"#303030\"/>\n";
    // Horizontal run-length merge; SVG y grows downward, descriptor y upward.
    for (int py = 0; py < res; ++py) {
        int px = 0;
        while (px < res) {
            const int cell = owner[static_cast<std::size_t>(py) * res + px];
            int end = px + 1;
            while (end < res && owner[static_cast<std::size_t>(py) * res + end] == cell) ++end;
            const auto it = cell_values.find(cell);
            if (it != cell_values.end()) {
                const Rgb c = viridis((it->second - lo) / span);
                out << "<rect x=\"" << px << "\" y=\"" << res - 1 - py << "\" width=\""
                    << end - px << "\" height=\"1\" fill=\"" << rgb_hex(c) << "\"/>\n";
            }
            px = end;
        }
    }
    out << "</g>\n";
    out << "<text x=\"" << margin << "\" y=\"" << size - 6
        << "\" font-family=\"sans-serif\" font-size=\"10\">range [" << fmt(lo) << ", " << fmt(hi)
        << "]</text>\n";
    out << "</svg>\n";
}

void render_pareto_plot(const std::string& path, const std::vector<ParetoPlotPoint>& points)
{
    if (points.empty()) throw ContractViolation("render_pareto_plot: no points");

    std::vector<TradeoffPoint> coords;
    coords.reserve(points.size());
    for (const auto& p : points) coords.emplace_back(p.quality, p.time_s);
    const auto front = pareto_front(coords);

    double min_q = coords[0].first, max_q = coords[0].first;
    double min_t = coords[0].second, max_t = coords[0].second;
    for (const auto& [q, t] : coords) {
        min_q = std::min(min_q, q);
        max_q = std::max(max_q, q);
        min_t = std::min(min_t, t);
        max_t = std::max(max_t, t);
    }
    const double qspan = max_q > min_q ? max_q - min_q : 1.0;
    const double tspan = max_t > min_t ? max_t - min_t : 1.0;

    std::set<int> sizes;
    std::vector<std::string> labels;
    for (const auto& p : points) {
        sizes.insert(p.sampling_size);
        if (std::find(labels.begin(), labels.end(), p.label) == labels.end())
            labels.push_back(p.label);
    }
    auto size_rank = [&sizes](int s) {
        return static_cast<int>(std::distance(sizes.begin(), sizes.find(s)));
    };
    auto label_index = [&labels](const std::string& l) {
        return static_cast<int>(std::distance(
            labels.begin(), std::find(labels.begin(), labels.end(), l)));
    };

    const int width = 560, height = 420, margin = 56;
    const int plot_w = width - 2 * margin, plot_h = height - 2 * margin;
    auto sx = [&](double q) { return margin + (q - min_q) / qspan * plot_w; };
    auto sy = [&](double t) { return height - margin - (t - min_t) / tspan * plot_h; };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("render_pareto_plot: cannot open " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">corrected "
           "QD-Score</text>\n";
    out << "<text x=\"14\" y=\"" << height / 2
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 14 "
        << height / 2 << ")\">time to convergence (s)</text>\n";
    for (double frac : {0.0, 1.0}) {
        out << "<text x=\"" << margin + frac * plot_w << "\" y=\"" << height - margin + 16
            << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">"
            << fmt(min_q + frac * qspan) << "</text>\n";
        out << "<text x=\"" << margin - 6 << "\" y=\"" << height - margin - frac * plot_h + 4
            << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
            << fmt(min_t + frac * tspan) << "</text>\n";
    }

    // Dashed front, sorted by quality.
    std::vector<std::size_t> front_sorted(front.begin(), front.end());
    std::sort(front_sorted.begin(), front_sorted.end(), [&](std::size_t i, std::size_t j) {
        return coords[i].first < coords[j].first;
    });
    out << "<polyline fill=\"none\" stroke=\"#4477aa\" stroke-dasharray=\"6,4\" points=\"";
    for (std::size_t idx : front_sorted)
        out << fmt(sx(coords[idx].first)) << "," << fmt(sy(coords[idx].second)) << " ";
    out << "\"/>\n";

    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        const double r = 3.0 + 2.0 * size_rank(p.sampling_size);
        out << "<circle cx=\"" << fmt(sx(p.quality)) << "\" cy=\"" << fmt(sy(p.time_s))
            << "\" r=\"" << fmt(r) << "\" fill=\"" << kPalette[label_index(p.label) % 8]
            << "\" fill-opacity=\"0.75\"/>\n";
    }

    for (std::size_t l = 0; l < labels.size(); ++l) {
        const int y = margin + 14 * static_cast<int>(l);
        out << "<circle cx=\"" << width - margin - 110 << "\" cy=\"" << y << "\" r=\"4\" fill=\""
            << kPalette[l % 8] << "\"/>\n";
        out << "<text x=\"" << width - margin - 100 << "\" y=\"" << y + 4
            << "\" font-family=\"sans-serif\" font-size=\"10\">" << labels[l] << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace uqd
