#include "reca/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>

#include "text_util.hpp"

namespace reca {

using nlohmann::json;
using detail::fmt_double;

namespace {

long long axis_value(const SweepRecord& r, Axis axis) {
    switch (axis) {
    case Axis::ProjRule: return r.proj_rule;
    case Axis::MemRule: return r.mem_rule;
    case Axis::IP: return static_cast<long long>(r.i_p);
    case Axis::IM: return static_cast<long long>(r.i_m);
    }
    return 0;
}

auto canonical_key(const SweepRecord& r) { return std::tie(r.proj_rule, r.mem_rule, r.i_p, r.i_m, r.trial); }

template <class T>
std::vector<T> parse_axis_values(const json& v, const char* name, bool rules) {
    std::vector<T> out;
    if (v.is_string()) {
        if (!rules || v.get<std::string>() != "all") {
            throw ConfigError(std::string("axes.") + name + ": only rule axes accept \"all\"");
        }
        for (int r = 0; r < kRuleCount; ++r) out.push_back(static_cast<T>(r));
    } else if (v.is_array()) {
        for (const auto& e : v) {
            if (!e.is_number_integer() || e.get<long long>() < 0) {
                throw ConfigError(std::string("axes.") + name + " must hold non-negative integers");
            }
            out.push_back(e.get<T>());
        }
    } else if (v.is_object()) {
        for (const auto& [key, _] : v.items()) {
            if (key != "from" && key != "to" && key != "step") {
                throw ConfigError("unknown key '" + key + "' in axes." + name);
            }
        }
        const auto from = v.at("from").get<long long>();
        const auto to = v.at("to").get<long long>();
        const auto step = v.contains("step") ? v.at("step").get<long long>() : 1;
        if (from < 0 || step < 1 || to < from) throw ConfigError(std::string("axes.") + name + " has an invalid range");
        for (long long x = from; x <= to; x += step) out.push_back(static_cast<T>(x));
    } else {
        throw ConfigError(std::string("axes.") + name + " must be a list, range or \"all\"");
    }
    return out;
}

std::string sanitize(std::string s) {
    for (auto& ch : s) {
        if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
    }
    return s;
}

} // namespace

std::string_view axis_name(Axis axis) {
    switch (axis) {
    case Axis::ProjRule: return "proj_rule";
    case Axis::MemRule: return "mem_rule";
    case Axis::IP: return "i_p";
    case Axis::IM: return "i_m";
    }
    return "?";
}

Axis parse_axis(std::string_view name) {
    if (name == "proj_rule") return Axis::ProjRule;
    if (name == "mem_rule") return Axis::MemRule;
    if (name == "i_p") return Axis::IP;
    if (name == "i_m") return Axis::IM;
    throw ConfigError("unknown axis '" + std::string(name) + "'");
}

long long SummaryRow::at(Axis axis) const {
    for (const auto& [a, v] : key) {
        if (a == axis) return v;
    }
    throw ConfigError("summary row is not grouped by " + std::string(axis_name(axis)));
}

void validate(const SweepPlan& plan) {
    if (plan.proj_rules.empty() || plan.mem_rules.empty() || plan.i_p.empty() || plan.i_m.empty()) {
        throw ConfigError("every sweep axis needs at least one value");
    }
    if (plan.trials < 1) throw ConfigError("trials must be at least 1");
    for (int r : plan.proj_rules) {
        if (r < 0 || r > 255) throw ConfigError("projection rules must be in [0, 255]");
    }
    for (int r : plan.mem_rules) {
        if (r < 0 || r > 255) throw ConfigError("memory rules must be in [0, 255]");
    }
    for (auto v : plan.i_p) {
        if (v < 1) throw ConfigError("i_p values must be at least 1");
    }
    if (plan.group_by.empty()) throw ConfigError("group_by needs at least one axis");
    // The task binding must be sound before anything runs.
    ExperimentConfig probe = plan.base;
    probe.reservoir.proj_rule = plan.proj_rules.front();
    probe.reservoir.mem_rule = plan.mem_rules.front();
    probe.reservoir.i_p = plan.i_p.front();
    probe.reservoir.i_m = plan.i_m.front();
    validate(probe);
}

SweepPlan parse_sweep_plan(const json& j) {
    if (!j.is_object()) throw ConfigError("sweep plan must be an object");
    for (const auto& [key, _] : j.items()) {
        static const std::vector<std::string> allowed{"experiment", "axes",    "trials", "base_seed", "workers",
                                                      "timing",     "group_by", "heatmap", "output"};
        if (std::ranges::find(allowed, key) == allowed.end()) throw ConfigError("unknown key '" + key + "' in plan");
    }
    if (!j.contains("experiment")) throw ConfigError("sweep plan needs an experiment section");
    if (!j.contains("axes")) throw ConfigError("sweep plan needs an axes section");

    SweepPlan plan;
    plan.base = parse_experiment_config(j.at("experiment"));
    const json& axes = j.at("axes");
    if (!axes.is_object()) throw ConfigError("axes must be an object");
    for (const auto& [key, _] : axes.items()) {
        if (key != "proj_rules" && key != "mem_rules" && key != "i_p" && key != "i_m") {
            throw ConfigError("unknown key '" + key + "' in axes");
        }
    }
    const auto& r = plan.base.reservoir;
    plan.proj_rules = axes.contains("proj_rules") ? parse_axis_values<int>(axes.at("proj_rules"), "proj_rules", true)
                                                  : std::vector<int>{r.proj_rule};
    plan.mem_rules = axes.contains("mem_rules") ? parse_axis_values<int>(axes.at("mem_rules"), "mem_rules", true)
                                                : std::vector<int>{r.mem_rule};
    plan.i_p = axes.contains("i_p") ? parse_axis_values<std::size_t>(axes.at("i_p"), "i_p", false)
                                    : std::vector<std::size_t>{r.i_p};
    plan.i_m = axes.contains("i_m") ? parse_axis_values<std::size_t>(axes.at("i_m"), "i_m", false)
                                    : std::vector<std::size_t>{r.i_m};

    try {
        plan.trials = j.value("trials", std::size_t{1});
        plan.base_seed = j.value("base_seed", plan.base.task.seed);
        plan.workers = j.value("workers", std::size_t{0});
        plan.timing = j.value("timing", true);
        plan.heatmap = j.value("heatmap", false);
        if (j.contains("group_by")) {
            plan.group_by.clear();
            for (const auto& a : j.at("group_by")) plan.group_by.push_back(parse_axis(a.get<std::string>()));
        }
        if (j.contains("output")) {
            const json& o = j.at("output");
            for (const auto& [key, _] : o.items()) {
                if (key != "dir") throw ConfigError("unknown key '" + key + "' in output");
            }
            plan.output_dir = o.value("dir", "");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed sweep plan: ") + e.what());
    }
    validate(plan);
    return plan;
}

json to_json(const SweepPlan& plan) {
    json group = json::array();
    for (Axis a : plan.group_by) group.push_back(axis_name(a));
    json out{{"experiment", to_json(plan.base)},
             {"axes", {{"proj_rules", plan.proj_rules}, {"mem_rules", plan.mem_rules}, {"i_p", plan.i_p}, {"i_m", plan.i_m}}},
             {"trials", plan.trials},
             {"base_seed", plan.base_seed},
             {"workers", plan.workers},
             {"timing", plan.timing},
             {"group_by", group},
             {"heatmap", plan.heatmap}};
    if (!plan.output_dir.empty()) out["output"] = {{"dir", plan.output_dir}};
    return out;
}

SweepResult run_sweep(const SweepPlan& plan, const ProgressFn& progress) {
    validate(plan);

    std::vector<TaskData> datasets;
    datasets.reserve(plan.trials);
    for (std::size_t t = 0; t < plan.trials; ++t) {
        try {
            datasets.push_back(make_task_data(plan.base, plan.base_seed + t));
        } catch (const Error& e) {
            throw ConfigError(std::string("task binding failed: ") + e.what());
        }
    }

    struct Cell {
        int proj, mem;
        std::size_t i_p, i_m;
    };
    std::vector<Cell> cells;
    cells.reserve(plan.cell_count());
    for (int p : plan.proj_rules)
        for (int m : plan.mem_rules)
            for (auto ip : plan.i_p)
                for (auto im : plan.i_m) cells.push_back({p, m, ip, im});

    const std::size_t total = cells.size() * plan.trials;
    SweepResult result;
    result.records.resize(total);

    std::atomic<std::size_t> next{0};
    std::size_t done = 0;
    std::mutex progress_mutex;

    auto worker = [&] {
        for (std::size_t job = next++; job < total; job = next++) {
            const Cell& cell = cells[job / plan.trials];
            const std::size_t trial = job % plan.trials;
            SweepRecord& rec = result.records[job];
            rec.proj_rule = cell.proj;
            rec.mem_rule = cell.mem;
            rec.i_p = cell.i_p;
            rec.i_m = cell.i_m;
            rec.trial = trial;
            rec.seed = plan.base_seed + trial;

            ExperimentConfig cfg = plan.base;
            cfg.task.seed = rec.seed;
            cfg.reservoir.proj_rule = cell.proj;
            cfg.reservoir.mem_rule = cell.mem;
            cfg.reservoir.i_p = cell.i_p;
            cfg.reservoir.i_m = cell.i_m;

            const auto start = std::chrono::steady_clock::now();
            try {
                const auto outcome = run_experiment(cfg, datasets[trial]);
                rec.metric = outcome.metric;
                rec.value = outcome.test_value;
            } catch (const std::exception& e) {
                rec.metric = "error";
                rec.value = std::numeric_limits<double>::quiet_NaN();
                rec.error = e.what();
                if (rec.error.empty()) rec.error = "unknown failure";
            }
            if (plan.timing) {
                rec.wall_ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            }
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(++done, total);
            }
        }
    };

    std::size_t workers = plan.workers == 0 ? std::max(1U, std::thread::hardware_concurrency()) : plan.workers;
    workers = std::min(workers, total);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    // Error records carry metric "error"; give them the sweep's metric name when one exists.
    std::string metric;
    for (const auto& r : result.records) {
        if (r.ok()) {
            metric = r.metric;
            break;
        }
    }
    for (auto& r : result.records) {
        if (!r.ok() && !metric.empty()) r.metric = metric;
    }

    std::ranges::stable_sort(result.records, [](const SweepRecord& a, const SweepRecord& b) {
        return canonical_key(a) < canonical_key(b);
    });
    return result;
}

std::vector<SummaryRow> aggregate(const SweepResult& result, const std::vector<Axis>& group_by) {
    std::map<std::vector<long long>, std::vector<const SweepRecord*>> groups;
    for (const auto& r : result.records) {
        std::vector<long long> key;
        for (Axis a : group_by) key.push_back(axis_value(r, a));
        groups[key].push_back(&r);
    }

    std::vector<SummaryRow> rows;
    std::string metric;
    for (const auto& [key, recs] : groups) {
        SummaryRow row;
        for (std::size_t i = 0; i < group_by.size(); ++i) row.key.emplace_back(group_by[i], key[i]);
        std::vector<double> values;
        for (const auto* r : recs) {
            if (row.metric.empty() || row.metric == "error") row.metric = r->metric;
            if (r->ok()) {
                values.push_back(r->value);
            } else {
                ++row.failures;
            }
        }
        row.count = values.size();
        if (!values.empty()) {
            const double n = static_cast<double>(values.size());
            row.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
            double ss = 0.0;
            for (double v : values) ss += (v - row.mean) * (v - row.mean);
            row.std = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
            const auto [mn, mx] = std::ranges::minmax(values);
            row.min = mn;
            row.max = mx;
        } else {
            row.mean = row.std = row.min = row.max = std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back(std::move(row));
    }

    const bool ascending = rows.empty() || lower_is_better(rows.front().metric);
    std::ranges::stable_sort(rows, [ascending](const SummaryRow& a, const SummaryRow& b) {
        // groups without any successful trial sort last
        const bool an = std::isnan(a.mean), bn = std::isnan(b.mean);
        if (an != bn) return bn;
        if (!an && a.mean != b.mean) return ascending ? a.mean < b.mean : a.mean > b.mean;
        return a.key < b.key;
    });
    return rows;
}

std::size_t success_count(const std::vector<SummaryRow>& rows, const std::function<bool(const SummaryRow&)>& pred) {
    return static_cast<std::size_t>(std::ranges::count_if(rows, pred));
}

std::size_t success_count(const SweepResult& result, const std::vector<Axis>& group_by,
                          const std::function<bool(const SummaryRow&)>& pred) {
    if (result.records.empty()) return 0;
    return success_count(aggregate(result, group_by), pred);
}

std::string results_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "proj_rule,mem_rule,i_p,i_m,trial,metric,value,seed,wall_ms,error\n";
    for (const auto& r : result.records) {
        out << r.proj_rule << ',' << r.mem_rule << ',' << r.i_p << ',' << r.i_m << ',' << r.trial << ',' << r.metric
            << ',' << fmt_double(r.value) << ',' << r.seed << ',' << fmt_double(r.wall_ms) << ','
            << sanitize(r.error) << '\n';
    }
    return out.str();
}

SweepResult parse_results_csv(const std::string& text) {
    SweepResult result;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 || line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() == 9) f.emplace_back();
        if (f.size() != 10) throw ParseError("expected 10 columns", line_no);
        try {
            SweepRecord r;
            r.proj_rule = std::stoi(f[0]);
            r.mem_rule = std::stoi(f[1]);
            r.i_p = std::stoul(f[2]);
            r.i_m = std::stoul(f[3]);
            r.trial = std::stoul(f[4]);
            r.metric = f[5];
            r.value = f[6] == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(f[6]);
            r.seed = std::stoull(f[7]);
            r.wall_ms = std::stod(f[8]);
            r.error = f[9];
            result.records.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw ParseError("malformed result row", line_no);
        }
    }
    return result;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    if (!rows.empty()) {
        for (const auto& [axis, _] : rows.front().key) out << axis_name(axis) << ',';
    }
    out << "metric,mean,std,min,max,count,failures\n";
    for (const auto& r : rows) {
        for (const auto& [_, v] : r.key) out << v << ',';
        out << r.metric << ',' << fmt_double(r.mean) << ',' << fmt_double(r.std) << ',' << fmt_double(r.min) << ','
            << fmt_double(r.max) << ',' << r.count << ',' << r.failures << '\n';
    }
    return out.str();
}

std::string heatmap_csv(const SweepResult& result) {
    auto rows = aggregate(result, {Axis::IP, Axis::IM});
    std::ranges::sort(rows, [](const SummaryRow& a, const SummaryRow& b) { return a.key < b.key; });
    std::ostringstream out;
    out << "i_p,i_m,mean_value\n";
    for (const auto& r : rows) out << r.at(Axis::IP) << ',' << r.at(Axis::IM) << ',' << fmt_double(r.mean) << '\n';
    return out.str();
}

void write_sweep_outputs(const std::filesystem::path& dir, const SweepPlan& plan, const SweepResult& result) {
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "plan_resolved.json", to_json(plan).dump(2) + "\n");
    write_file_atomic(dir / "results.csv", results_csv(result));
    write_file_atomic(dir / "summary.csv", summary_csv(aggregate(result, plan.group_by)));
    if (plan.heatmap) write_file_atomic(dir / "heatmap.csv", heatmap_csv(result));
}

} // namespace reca
