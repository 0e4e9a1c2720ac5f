#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "reca/automaton.hpp"
#include "reca/encoding.hpp"

namespace reca {

enum class ReservoirMode { RC, ELM };

/// How a new input is combined with the carried state. Only Xor is used by
/// the bundled experiments.
enum class Injection { Xor, Or, And };

/// A rule pair (proj_rule, mem_rule) with its iteration depths and geometry.
struct ReservoirConfig {
    Rule proj_rule{0};
    Rule mem_rule{0};
    std::size_t i_p = 1;
    std::size_t i_m = 0;
    EncoderSpec encoder{};
    std::size_t buffer = 0; // R, zero cells on each side
    EdgePolicy edges = EdgePolicy::fixed();
    ReservoirMode mode = ReservoirMode::RC;
    Injection injection = Injection::Xor;

    /// L = N + 2R
    std::size_t width() const noexcept { return encoder.width() + 2 * buffer; }

    void validate() const;
};

/// The post-memory state x_{i_p + i_m}(k), all zeros before the first input.
struct ReservoirState {
    StateVector carry;

    static ReservoirState zeros(std::size_t width) { return {StateVector(width)}; }
};

struct StepRecord {
    StateVector injected;
    Trace projection; // row 0 == injected, rows 1..i_p feed the readout
    Trace memory;     // row 0 == projection.back()
};

StateVector inject(const ReservoirState& state, const StateVector& input, Injection op = Injection::Xor);

std::pair<StepRecord, ReservoirState> run_step(const ReservoirConfig& config, const ReservoirState& state,
                                               const PaddedInput& input);

/// Encodes, pads and folds run_step over the inputs starting from zeros.
std::vector<StepRecord> run_sequence(const ReservoirConfig& config, std::span<const double> inputs);

/// Same fold over already padded inputs (used for multi-attribute patterns).
std::vector<StepRecord> run_sequence(const ReservoirConfig& config, std::span<const PaddedInput> inputs);

/// Stateful driver for streaming use; keeps only the carry between inputs.
class Reservoir {
public:
    explicit Reservoir(ReservoirConfig config);

    const ReservoirConfig& config() const noexcept { return config_; }
    const ReservoirState& state() const noexcept { return state_; }
    void reset();

    StepRecord feed(const PaddedInput& input);
    StepRecord feed(double value);

private:
    ReservoirConfig config_;
    ReservoirState state_;
};

} // namespace reca
