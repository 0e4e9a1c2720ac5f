#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "reca/experiment.hpp"

namespace reca {

enum class Axis { ProjRule, MemRule, IP, IM };

std::string_view axis_name(Axis axis);
Axis parse_axis(std::string_view name);

/// Cartesian grid over rule pairs and depths, each cell run `trials` times.
/// Trial t uses seed base_seed + t in every cell, so cells share datasets.
struct SweepPlan {
    ExperimentConfig base;
    std::vector<int> proj_rules;
    std::vector<int> mem_rules;
    std::vector<std::size_t> i_p;
    std::vector<std::size_t> i_m;
    std::size_t trials = 1;
    std::uint64_t base_seed = 1;
    std::size_t workers = 0; // 0 = hardware concurrency
    bool timing = true;      // false writes wall_ms = 0
    std::vector<Axis> group_by{Axis::ProjRule, Axis::MemRule, Axis::IP, Axis::IM};
    bool heatmap = false;
    std::string output_dir;

    std::size_t cell_count() const noexcept {
        return proj_rules.size() * mem_rules.size() * i_p.size() * i_m.size();
    }
};

/// Axis lists accept an array, "all" (rules only) or {"from", "to", "step"}.
SweepPlan parse_sweep_plan(const nlohmann::json& j);
nlohmann::json to_json(const SweepPlan& plan);
void validate(const SweepPlan& plan);

struct SweepRecord {
    int proj_rule = 0;
    int mem_rule = 0;
    std::size_t i_p = 0;
    std::size_t i_m = 0;
    std::size_t trial = 0;
    std::string metric;
    double value = 0.0; // NaN when `error` is set
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
    std::string error;

    bool ok() const noexcept { return error.empty(); }
};

struct SweepResult {
    std::vector<SweepRecord> records; // canonical order: proj, mem, i_p, i_m, trial
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every (cell, trial). Per-cell failures become error-marked records.
SweepResult run_sweep(const SweepPlan& plan, const ProgressFn& progress = {});

struct SummaryRow {
    std::vector<std::pair<Axis, long long>> key;
    std::string metric;
    double mean = 0.0;
    double std = 0.0; // sample standard deviation, 0 when count == 1
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;    // successful trials
    std::size_t failures = 0; // error-marked trials

    long long at(Axis axis) const;
};

/// Groups records by `group_by`; sorted best-first by mean (ascending for error
/// metrics, descending for accuracy), ties by key.
std::vector<SummaryRow> aggregate(const SweepResult& result, const std::vector<Axis>& group_by);

std::size_t success_count(const std::vector<SummaryRow>& rows, const std::function<bool(const SummaryRow&)>& pred);
std::size_t success_count(const SweepResult& result, const std::vector<Axis>& group_by,
                          const std::function<bool(const SummaryRow&)>& pred);

std::string results_csv(const SweepResult& result);
SweepResult parse_results_csv(const std::string& text);
std::string summary_csv(const std::vector<SummaryRow>& rows);
/// (i_p, i_m, mean_value) rows grouped over all other axes.
std::string heatmap_csv(const SweepResult& result);

/// results.csv, summary.csv, optional heatmap.csv and the resolved plan.
void write_sweep_outputs(const std::filesystem::path& dir, const SweepPlan& plan, const SweepResult& result);

} // namespace reca
