#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "reca/automaton.hpp"
#include "reca/encoding.hpp"

namespace reca {

/// A scalar input stream with per-step targets. Entries [0, split) train,
/// [split, size) test.
struct LabeledSequence {
    std::vector<double> inputs;
    std::vector<double> targets;
    std::size_t split = 0;
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return inputs.size(); }
    std::size_t train_size() const noexcept { return split; }
    std::size_t test_size() const noexcept { return inputs.size() - split; }
};

/// Pre-encoded patterns with class labels, train block first.
struct LabeledPatterns {
    std::vector<StateVector> inputs;
    std::vector<double> labels;
    std::size_t split = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> class_names;

    std::size_t size() const noexcept { return inputs.size(); }
};

// --- sine / square -----------------------------------------------------------

enum class WaveChoice { Random, Sine, Square };

/// Waves of amplitude 1, each starting at phase 0. Label 1 = square, 0 = sine.
/// `train_points` defaults to half the waves.
LabeledSequence sine_square(std::size_t num_waves, std::size_t points_per_wave, std::uint64_t seed,
                            std::size_t train_points = std::numeric_limits<std::size_t>::max(),
                            WaveChoice choice = WaveChoice::Random);

// --- nonlinear channel -------------------------------------------------------

/// Symbols d(n) in {-3,-1,1,3} through a 10-tap multipath channel and a
/// cubic receiver nonlinearity.
struct ChannelModel {
    static constexpr int kLead = 2; // taps[0] multiplies d(n + 2)
    std::array<double, 10> taps{0.08, -0.12, 1.0, 0.18, -0.1, 0.091, -0.05, 0.04, 0.03, 0.01};
    double quadratic = 0.036;
    double cubic = -0.011;
};

inline constexpr std::array<double, 4> kChannelSymbols{-3.0, -1.0, 1.0, 3.0};

struct ChannelParams {
    double snr_db = 28.0; // +infinity disables noise
    ChannelModel model{};
};

double channel_nonlinearity(const ChannelModel& model, double q) noexcept;

/// Noise-free q(n) for a symbol stream, zero-padded outside [0, size).
std::vector<double> channel_linear(const ChannelModel& model, const std::vector<double>& symbols);

LabeledSequence channel_equalization(std::size_t n_train, std::size_t n_test, const ChannelParams& params,
                                     std::uint64_t seed);

// --- Santa Fe laser ----------------------------------------------------------

inline constexpr std::size_t kSantaFeTrain = 1000;
inline constexpr std::size_t kSantaFeTest = 200;

/// One integer in [0, 255] per line. Errors carry the 1-based line number.
std::vector<int> parse_santa_fe(std::istream& in);

/// inputs = values[0..n-1), targets = values[1..n); 1000 train / 200 test.
LabeledSequence santa_fe_sequence(const std::vector<int>& values, std::size_t n_train = kSantaFeTrain,
                                  std::size_t n_test = kSantaFeTest);

LabeledSequence load_santa_fe(const std::filesystem::path& path, std::size_t n_train = kSantaFeTrain,
                              std::size_t n_test = kSantaFeTest);

/// Non-canonical stand-in: a Mackey-Glass (tau = 17) series sampled once per
/// time unit and quantized to [0, 255]. The seed shifts the starting window.
std::vector<int> synthetic_santa_fe(std::size_t length, std::uint64_t seed);

// --- iris --------------------------------------------------------------------

inline constexpr std::size_t kIrisRows = 150;
inline constexpr std::size_t kIrisTrain = 112;
inline constexpr std::size_t kIrisTest = 38;
inline constexpr double kIrisResolution = 0.1;

/// Per-attribute unary layouts at 0.1 resolution (37, 25, 60, 25 cells).
std::array<EncoderSpec, 4> iris_encoders();

StateVector encode_iris(const std::array<double, 4>& sample);

struct IrisTable {
    std::vector<std::array<double, 4>> samples;
    std::vector<int> labels;
};

/// Comma-separated rows: four reals then a species name.
IrisTable parse_iris(std::istream& in);

/// Encodes every row and splits 112 / 38, stratified by species, shuffled by `seed`.
LabeledPatterns iris_patterns(const IrisTable& table, std::uint64_t seed);

LabeledPatterns load_iris(const std::filesystem::path& path, std::uint64_t seed);
LabeledPatterns load_iris_bundled(std::uint64_t seed);

/// The bundled 150-row fixture, verbatim.
std::string_view bundled_iris_csv();

inline constexpr std::array<std::string_view, 3> kIrisClasses{"Iris-setosa", "Iris-versicolor", "Iris-virginica"};

} // namespace reca
