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

#include <filesystem>
#include <set>

#include <nlohmann/json.hpp>

#include "uqd/harness.hpp"
#include "uqd/io.hpp"
#include "uqd/svg.hpp"

using namespace uqd;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json minimal_config_json()
{
    return json::parse(R"({
        "task": {"name": "arm", "genotype_dim": 8,
                 "fitness_std": 0.01, "descriptor_std": 0.01},
        "algorithms": [{"variant": "map-elites"},
                       {"variant": "archive-sampling", "depth": 2}],
        "sampling_sizes": [32],
        "generations": 3,
        "replications": 3,
        "niches": 8,
        "metric_cadence": 2,
        "m_reevals": 8,
        "seed": 12345,
        "cvt": {"samples": 512, "iterations": 10}
    })");
}

} // namespace

TEST_CASE("config parsing applies defaults and validates fields by name")
{
    const ExperimentConfig cfg = parse_experiment_config(minimal_config_json());
    CHECK(cfg.task.name == "arm");
    CHECK(cfg.task.noise.fitness_std == 0.01);
    CHECK(cfg.algorithms.size() == 2);
    CHECK(cfg.sampling_sizes == std::vector<int>{32});
    CHECK(cfg.correction_mode == CorrectionMode::InCellSelector);

    auto check_error = [](json j, const std::string& needle) {
        try {
            parse_experiment_config(j);
            FAIL_CHECK("expected ConfigurationError mentioning " << needle);
        } catch (const ConfigurationError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    json no_algos = minimal_config_json();
    no_algos.erase("algorithms");
    check_error(no_algos, "algorithms");

    json bad_gens = minimal_config_json();
    bad_gens["generations"] = 0;
    check_error(bad_gens, "generations");

    json bad_variant = minimal_config_json();
    bad_variant["algorithms"][0]["variant"] = "hill-climber";
    check_error(bad_variant, "hill-climber");

    json bad_task = minimal_config_json();
    bad_task["task"]["name"] = "walker";
    CHECK_THROWS_AS(make_task(parse_experiment_config(bad_task).task), ConfigurationError);

    json bad_m = minimal_config_json();
    bad_m["m_reevals"] = 1;
    check_error(bad_m, "m_reevals");
}

TEST_CASE("experiment: skip notice, deterministic reruns, artifact files")
{
    const ExperimentConfig cfg = parse_experiment_config(minimal_config_json());
    const auto base = fs::temp_directory_path() / "uqd_harness_test";
    fs::remove_all(base);

    const auto r1 = run_experiment(cfg, (base / "a").string(), 2);
    const auto r2 = run_experiment(cfg, (base / "b").string(), 1);

    // archive-sampling at S=32 <= niches*depth=16? no: 32 > 16, so it runs;
    // both algorithms produce 3 replications each
    int ok = 0, skipped = 0;
    for (const auto& r : r1.runs) {
        ok += r.status == RunStatus::Ok;
        skipped += r.status == RunStatus::Skipped;
    }
    CHECK(ok == 6);
    CHECK(skipped == 0);

    // determinism: metric and archive CSVs are byte-identical across reruns
    // and across different thread counts
    for (const auto& run : r1.runs) {
        const std::string rel = fs::path(run.dir).filename().string();
        const std::string a_metrics = read_text_file(run.dir + "/metrics.csv");
        const std::string b_metrics =
            read_text_file((base / "b" / "runs" / rel / "metrics.csv").string());
        CHECK(a_metrics == b_metrics);
        const std::string a_archive = read_text_file(run.dir + "/archive.csv");
        const std::string b_archive =
            read_text_file((base / "b" / "runs" / rel / "archive.csv").string());
        CHECK(a_archive == b_archive);
        CHECK(fs::exists(run.dir + "/run.json"));
        CHECK(fs::exists(run.dir + "/centroids.csv"));
        CHECK(fs::exists(run.dir + "/timings.csv"));
        CHECK(fs::exists(run.dir + "/reevals.csv"));
        CHECK(fs::exists(run.dir + "/archive_fitness.svg"));
        CHECK(fs::exists(run.dir + "/reproducibility.svg"));
    }
    CHECK(fs::exists(base / "a" / "summary.csv"));
    CHECK(fs::exists(base / "a" / "significance.csv"));
    CHECK(fs::exists(base / "a" / "pareto.svg"));

    // significance table covers the one algorithm pair at the one S
    const std::string sig = read_text_file((base / "a" / "significance.csv").string());
    CHECK(sig.find("map-elites,archive-sampling-D2") != std::string::npos);

    fs::remove_all(base);
}

TEST_CASE("experiment skips undefined archive-sampling sampling-sizes with a notice")
{
    ExperimentConfig cfg = parse_experiment_config(minimal_config_json());
    cfg.sampling_sizes = {16}; // 16 <= niches*depth = 16: undefined
    cfg.algorithms.resize(1);
    cfg.algorithms[0].variant = Variant::ParallelAdaptiveSampling;
    cfg.algorithms[0].depth = 2;
    const auto base = fs::temp_directory_path() / "uqd_harness_skip";
    fs::remove_all(base);
    const auto result = run_experiment(cfg, base.string(), 1);
    REQUIRE(result.runs.size() == 3);
    for (const auto& r : result.runs) CHECK(r.status == RunStatus::Skipped);
    CHECK(!result.notices.empty());
    CHECK(result.notices[0].find("undefined for sampling_size") != std::string::npos);
    fs::remove_all(base);
}

TEST_CASE("duplicate algorithm entries are rejected")
{
    ExperimentConfig cfg = parse_experiment_config(minimal_config_json());
    cfg.algorithms.push_back(cfg.algorithms[0]);
    CHECK_THROWS_AS(run_experiment(cfg, (fs::temp_directory_path() / "uqd_dup").string(), 1),
                    ConfigurationError);
}

TEST_CASE("rasterized heatmap: a cell's region contains its centroid pixel")
{
    Centroids c;
    c.k = 3;
    c.dim = 2;
    c.data = {0.2, 0.2, 0.8, 0.3, 0.5, 0.8};
    const int res = 64;
    const auto owner = rasterize_cells(c, res);
    for (int i = 0; i < c.k; ++i) {
        const int px = std::min(res - 1, static_cast<int>(c.data[2 * i] * res));
        const int py = std::min(res - 1, static_cast<int>(c.data[2 * i + 1] * res));
        CHECK(owner[static_cast<std::size_t>(py) * res + px] == i);
    }

    // single occupied cell: exactly one fill colour group in the SVG
    const auto path = fs::temp_directory_path() / "uqd_heatmap_test.svg";
    std::map<int, double> values{{0, 0.5}};
    render_cell_heatmap(path.string(), c, values, 0.0, 1.0, "test", res);
    const std::string svg = read_text_file(path.string());
    fs::remove(path);
    CHECK(svg.find("<rect") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);

    // empty map: background only (no run rectangles after the backdrop)
    const auto path2 = fs::temp_directory_path() / "uqd_heatmap_empty.svg";
    render_cell_heatmap(path2.string(), c, {}, 0.0, 1.0, "empty", res);
    const std::string empty_svg = read_text_file(path2.string());
    fs::remove(path2);
    const auto first_rect = empty_svg.find("fill=\"#303030\"");
    CHECK(first_rect != std::string::npos);
    CHECK(empty_svg.find("height=\"1\"") == std::string::npos);
}

TEST_CASE("pareto plot renders markers and the dashed front")
{
    const auto path = fs::temp_directory_path() / "uqd_pareto_test.svg";
    std::vector<ParetoPlotPoint> pts{{"map-elites", 256, 10.0, 5.0},
                                     {"map-elites", 1024, 12.0, 4.0},
                                     {"deep-grid", 256, 8.0, 3.0}};
    render_pareto_plot(path.string(), pts);
    const std::string svg = read_text_file(path.string());
    fs::remove(path);
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
    CHECK(svg.find("deep-grid") != std::string::npos);

    const auto single = fs::temp_directory_path() / "uqd_pareto_single.svg";
    render_pareto_plot(single.string(), {{"map-elites", 256, 1.0, 1.0}});
    const std::string one = read_text_file(single.string());
    fs::remove(single);
    // one data marker plus one legend marker
    std::size_t circles = 0;
    for (std::size_t pos = one.find("<circle"); pos != std::string::npos;
         pos = one.find("<circle", pos + 1))
        ++circles;
    CHECK(circles == 2);
}

TEST_CASE("run stream ids separate tasks, algorithms, sizes and replications")
{
    const ExperimentConfig cfg = parse_experiment_config(minimal_config_json());
    std::set<std::uint64_t> ids;
    for (const std::string algo : {"map-elites", "deep-grid"})
        for (int s : {256, 1024})
            for (int rep : {0, 1}) ids.insert(run_stream_id(cfg, algo, s, rep));
    CHECK(ids.size() == 8);
    CHECK(tessellation_stream_id(cfg, 0) != tessellation_stream_id(cfg, 1));
}
