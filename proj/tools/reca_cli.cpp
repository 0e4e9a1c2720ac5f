// Command-line front end: run, sweep, trace, datasets.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "reca/errors.hpp"
#include "reca/experiment.hpp"
#include "reca/render.hpp"
#include "reca/rule.hpp"
#include "reca/sweep.hpp"
#include "reca/tasks.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitData = 4;

constexpr const char* kOutputEnv = "RECA_OUTPUT_DIR";

// Reports which step of a command failed and maps the error to an exit code.
class Stage {
public:
    Stage(std::string command) : command_(std::move(command)) {}

    template <class F>
    auto operator()(const char* name, F&& fn) -> decltype(fn()) {
        name_ = name;
        return fn();
    }

    int fail(const std::exception& e) const {
        std::cerr << "reca " << command_ << ": " << name_ << " failed: " << e.what() << '\n';
        if (dynamic_cast<const reca::ConfigError*>(&e)) return kExitConfig;
        if (dynamic_cast<const reca::DataError*>(&e)) return kExitData;
        if (dynamic_cast<const json::exception*>(&e)) return kExitConfig;
        return kExitFailure;
    }

private:
    std::string command_;
    const char* name_ = "startup";
};

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw reca::ConfigError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw reca::ConfigError(path.string() + " is not valid JSON: " + e.what());
    }
}

// --output-dir beats the environment, which beats the file, which beats the default.
std::string resolve_output(const std::string& flag, const std::string& from_file, const std::string& fallback) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv(kOutputEnv); env != nullptr && *env != '\0') return env;
    if (!from_file.empty()) return from_file;
    return fallback;
}

int cmd_run(const std::string& config_path, const std::string& output_flag) {
    Stage stage("run");
    try {
        const auto j = stage("load config", [&] { return read_json(config_path); });
        auto config = stage("validate config", [&] { return reca::parse_experiment_config(j); });
        config.output_dir = resolve_output(output_flag, config.output_dir,
                                           "reca_runs/" + std::string(reca::task_name(config.task.kind)));
        const auto data = stage("prepare data", [&] { return reca::make_task_data(config, config.task.seed); });
        const auto outcome = stage("train and evaluate", [&] { return reca::run_experiment(config, data); });
        stage("write outputs", [&] {
            reca::write_experiment_outputs(config.output_dir, config, outcome);
            return 0;
        });
        std::cout << reca::task_name(config.task.kind) << " (" << config.reservoir.proj_rule << ", "
                  << config.reservoir.mem_rule << ") i_p=" << config.reservoir.i_p << " i_m=" << config.reservoir.i_m
                  << ": " << outcome.metric << " test=" << outcome.test_value << " train=" << outcome.train_value
                  << '\n'
                  << "outputs in " << config.output_dir << '\n';
        return 0;
    } catch (const std::exception& e) {
        return stage.fail(e);
    }
}

int cmd_sweep(const std::string& plan_path, std::optional<std::size_t> workers, const std::string& output_flag,
              bool quiet, std::size_t top) {
    Stage stage("sweep");
    try {
        const auto j = stage("load plan", [&] { return read_json(plan_path); });
        auto plan = stage("validate plan", [&] {
            auto p = reca::parse_sweep_plan(j);
            reca::validate(p);
            return p;
        });
        if (workers) plan.workers = *workers;
        plan.output_dir = resolve_output(output_flag, plan.output_dir, "reca_sweeps/latest");

        const std::size_t total = plan.cell_count() * plan.trials;
        std::cerr << "sweeping " << plan.cell_count() << " cells x " << plan.trials << " trials = " << total
                  << " runs\n";
        reca::ProgressFn progress;
        if (!quiet) {
            progress = [step = std::max<std::size_t>(1, total / 20)](std::size_t done, std::size_t all) {
                if (done % step == 0 || done == all) std::cerr << "  " << done << "/" << all << '\n';
            };
        }
        const auto result = stage("run sweep", [&] { return reca::run_sweep(plan, progress); });
        stage("write outputs", [&] {
            reca::write_sweep_outputs(plan.output_dir, plan, result);
            return 0;
        });

        const auto rows = reca::aggregate(result, plan.group_by);
        const auto csv = reca::summary_csv(rows);
        std::istringstream lines(csv);
        std::string line;
        for (std::size_t i = 0; i <= top && std::getline(lines, line); ++i) std::cout << line << '\n';
        if (rows.size() > top) std::cout << "... " << rows.size() - top << " more rows in summary.csv\n";
        std::size_t failures = 0;
        for (const auto& r : result.records) failures += !r.ok();
        if (failures > 0) std::cerr << failures << " runs failed; see the error column of results.csv\n";
        std::cout << "outputs in " << plan.output_dir << '\n';
        return 0;
    } catch (const std::exception& e) {
        return stage.fail(e);
    }
}

struct TraceArgs {
    int rule = 30;
    std::optional<int> mem_rule;
    std::size_t width = 0;
    std::size_t iterations = 16;
    std::size_t mem_iterations = 16;
    std::string pattern;
    std::string edges = "fixed";
    int edge_state = 0;
    std::string pgm;
};

int cmd_trace(const TraceArgs& a) {
    reca::StateVector init;
    try {
        if (a.pattern.empty()) {
            if (a.width == 0) throw reca::RangeError("give --pattern or --width");
            init = reca::StateVector(a.width);
            init.set(a.width / 2, true);
        } else {
            init = reca::StateVector::from_string(a.pattern);
            if (a.width != 0 && a.width != init.width()) {
                throw reca::RangeError("--width " + std::to_string(a.width) + " does not match the pattern length " +
                                       std::to_string(init.width()));
            }
        }
        if (init.width() < reca::kMinWidth) throw reca::RangeError("traces need at least 3 cells");
    } catch (const reca::Error& e) {
        std::cerr << "reca trace: " << e.what() << '\n';
        return kExitUsage;
    }

    const auto edges = a.edges == "cyclic" ? reca::EdgePolicy::cyclic() : reca::EdgePolicy::fixed(a.edge_state != 0);
    const auto proj = reca::evolve(reca::Rule(a.rule), init, a.iterations, edges);
    std::string text, pgm;
    if (a.mem_rule) {
        const auto mem = reca::evolve(reca::Rule(*a.mem_rule), proj.back(), a.mem_iterations, edges);
        text = reca::render_pair_text(proj, mem);
        pgm = reca::render_pair_pgm(proj, mem);
    } else {
        text = reca::render_text(proj);
        pgm = reca::render_pgm(proj);
    }
    if (a.pgm.empty()) {
        std::cout << text;
    } else {
        reca::write_file_atomic(a.pgm, pgm);
        std::cerr << "wrote " << a.pgm << '\n';
    }
    return 0;
}

int cmd_datasets_list() {
    std::cout << "sine_square     generated, 200 waves x 20 points, seeded\n"
                 "channel         generated, 4-symbol nonlinear multipath channel, seeded\n"
                 "santa_fe        user-supplied file (one integer in [0, 255] per line);\n"
                 "                without a file a synthetic Mackey-Glass stand-in is used\n"
                 "iris            bundled, 150 rows (4 attributes + species)\n";
    return 0;
}

int cmd_export(const std::string& what, const std::string& path, std::size_t length, std::uint64_t seed) {
    try {
        std::string body;
        if (what == "iris") {
            body = std::string(reca::bundled_iris_csv());
        } else {
            std::ostringstream out;
            for (int v : reca::synthetic_santa_fe(length, seed)) out << v << '\n';
            body = out.str();
        }
        if (path == "-") {
            std::cout << body;
        } else {
            reca::write_file_atomic(path, body);
            std::cerr << "wrote " << path << '\n';
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "reca datasets: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cellular-automaton reservoir computing experiments"};
    app.require_subcommand(1);
    int status = 0;

    std::string config_path, output_dir;
    auto* run = app.add_subcommand("run", "Train and evaluate one experiment config");
    run->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--output-dir", output_dir, "Output directory (overrides RECA_OUTPUT_DIR and the config)");
    run->callback([&] { status = cmd_run(config_path, output_dir); });

    std::string plan_path;
    std::optional<std::size_t> workers;
    bool quiet = false;
    std::size_t top = 10;
    auto* sweep = app.add_subcommand("sweep", "Run a sweep plan over rules and depths");
    sweep->add_option("plan", plan_path, "Sweep plan (JSON)")->required()->check(CLI::ExistingFile);
    sweep->add_option("-w,--workers", workers, "Worker threads (0 = all cores)");
    sweep->add_option("-o,--output-dir", output_dir, "Output directory (overrides RECA_OUTPUT_DIR and the plan)");
    sweep->add_option("--top", top, "Summary rows to print")->capture_default_str();
    sweep->add_flag("-q,--quiet", quiet, "No progress output");
    sweep->callback([&] { status = cmd_sweep(plan_path, workers, output_dir, quiet, top); });

    TraceArgs ta;
    auto* trace = app.add_subcommand("trace", "Render a CA evolution as text or PGM");
    trace->add_option("-r,--rule", ta.rule, "Rule number (projection rule for pairs)")
        ->check(CLI::Range(0, 255))
        ->capture_default_str();
    trace->add_option("-w,--width", ta.width, "Cell count; a single centre cell is used without --pattern");
    trace->add_option("-n,--iterations", ta.iterations, "Iterations")->capture_default_str();
    trace->add_option("-p,--pattern", ta.pattern, "Initial row of 0/1 or ./#");
    trace->add_option("-m,--mem-rule", ta.mem_rule, "Memory rule; renders a two-phase trace")
        ->check(CLI::Range(0, 255));
    trace->add_option("--mem-iterations", ta.mem_iterations, "Memory iterations")->capture_default_str();
    trace->add_option("-e,--edges", ta.edges, "fixed or cyclic")
        ->check(CLI::IsMember({"fixed", "cyclic"}))
        ->capture_default_str();
    trace->add_option("--edge-state", ta.edge_state, "Value of pinned edge cells")
        ->check(CLI::Range(0, 1))
        ->capture_default_str();
    trace->add_option("--pgm", ta.pgm, "Write a binary PGM here instead of text");
    trace->callback([&] { status = cmd_trace(ta); });

    auto* datasets = app.add_subcommand("datasets", "List or export the bundled and synthetic datasets");
    datasets->require_subcommand(1);
    datasets->add_subcommand("list", "Describe the available datasets")->callback([&] {
        status = cmd_datasets_list();
    });
    std::string export_path = "-";
    std::size_t length = 1201;
    std::uint64_t seed = 1;
    auto* export_iris = datasets->add_subcommand("export-iris", "Write the bundled iris CSV");
    export_iris->add_option("path", export_path, "Destination ('-' for stdout)");
    export_iris->callback([&] { status = cmd_export("iris", export_path, 0, 0); });
    auto* export_sf = datasets->add_subcommand("synth-santa-fe", "Write the synthetic laser stand-in");
    export_sf->add_option("path", export_path, "Destination ('-' for stdout)");
    export_sf->add_option("--length", length, "Number of values")->capture_default_str();
    export_sf->add_option("--seed", seed, "Seed")->capture_default_str();
    export_sf->callback([&] { status = cmd_export("santa_fe", export_path, length, seed); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }
    return status;
}
