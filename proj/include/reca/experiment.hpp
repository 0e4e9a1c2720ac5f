#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "reca/learner.hpp"
#include "reca/readout.hpp"
#include "reca/reservoir.hpp"
#include "reca/tasks.hpp"

namespace reca {

enum class TaskKind { SineSquare, Channel, SantaFe, Iris };

std::string_view task_name(TaskKind kind);
TaskKind parse_task_name(std::string_view name);

struct TaskConfig {
    TaskKind kind = TaskKind::SineSquare;
    std::uint64_t seed = 1;
    // sine_square
    std::size_t num_waves = 200;
    std::size_t points_per_wave = 20;
    // channel
    double snr_db = 28.0;
    // santa_fe / iris: empty path means synthetic stand-in / bundled fixture
    std::string path;
};

struct EncoderSettings {
    EncoderScheme scheme = EncoderScheme::Unary;
    std::size_t size = 64;
    double lo = -1.0;
    double hi = 1.0;
    bool fit = false; // take [lo, hi] from the training inputs
    bool clamp = true;
};

struct ReservoirSettings {
    int proj_rule = 0;
    int mem_rule = 0;
    std::size_t i_p = 20;
    std::size_t i_m = 60;
    std::size_t buffer = 64;
    EdgePolicy edges = EdgePolicy::fixed();
    ReservoirMode mode = ReservoirMode::RC;
    Injection injection = Injection::Xor;
    EncoderSettings encoder{};
};

struct TrainingConfig {
    std::size_t train = 0;
    std::size_t test = 0;
    double ridge = 0.0;
    double rcond = kDefaultRcond;
};

struct ExperimentConfig {
    TaskConfig task{};
    ReservoirSettings reservoir{};
    ReadoutScheme readout = BinnedColumnSums{2};
    TrainingConfig training{};
    std::string output_dir;
};

/// Task-specific defaults (sizes, encoder, mode) for a fresh config.
ExperimentConfig default_config(TaskKind kind);

/// Parses and validates; unknown keys and invalid combinations throw ConfigError.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);
void validate(const ExperimentConfig& config);

using TaskData = std::variant<LabeledSequence, LabeledPatterns>;

/// Generates or loads the dataset for one trial.
TaskData make_task_data(const ExperimentConfig& config, std::uint64_t seed);

struct ExperimentOutcome {
    std::string metric;   // "accuracy", "ser" or "nmse"
    double test_value = 0.0;
    double train_value = 0.0;
    double test_mse = 0.0;
    TrainedReadout readout;
    EncoderSpec encoder;  // as resolved (fitted ranges included)
    std::size_t features = 0;
    std::vector<double> test_truth;
    std::vector<double> test_predicted; // decoded label / symbol, or regression output
    Matrix test_raw;                    // K_test x m raw readout outputs
};

/// The reservoir configuration this experiment runs, with `encoder` resolved.
ReservoirConfig reservoir_config(const ExperimentConfig& config, const EncoderSpec& encoder);

ExperimentOutcome run_experiment(const ExperimentConfig& config, const TaskData& data);

inline ExperimentOutcome run_experiment(const ExperimentConfig& config) {
    return run_experiment(config, make_task_data(config, config.task.seed));
}

/// Writes metrics.txt, metrics.json, predictions.csv, w_out.json and
/// resolved_config.json into `dir`, each atomically.
void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentConfig& config,
                              const ExperimentOutcome& outcome);

/// Replaces `path` with `contents` through a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

bool lower_is_better(std::string_view metric);

} // namespace reca
