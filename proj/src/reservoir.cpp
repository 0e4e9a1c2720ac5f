#include "reca/reservoir.hpp"

namespace reca {

void ReservoirConfig::validate() const {
    encoder.validate();
    if (i_p < 1) throw ConfigError("i_p must be at least 1");
    if (width() < kMinWidth) throw ConfigError("reservoir width N + 2R must be at least 3");
}

StateVector inject(const ReservoirState& state, const StateVector& input, Injection op) {
    if (state.carry.width() != input.width()) {
        throw InvalidWidth("input width " + std::to_string(input.width()) + " does not match reservoir width " +
                           std::to_string(state.carry.width()));
    }
    StateVector out = state.carry;
    switch (op) {
    case Injection::Xor: out ^= input; break;
    case Injection::Or: out |= input; break;
    case Injection::And: out &= input; break;
    }
    return out;
}

std::pair<StepRecord, ReservoirState> run_step(const ReservoirConfig& config, const ReservoirState& state,
                                               const PaddedInput& input) {
    StepRecord record;
    record.injected = inject(state, input.cells, config.injection);
    record.projection = evolve(config.proj_rule, record.injected, config.i_p, config.edges);
    record.memory = evolve(config.mem_rule, record.projection.back(), config.i_m, config.edges);

    ReservoirState next = config.mode == ReservoirMode::ELM ? ReservoirState::zeros(config.width())
                                                            : ReservoirState{StateVector(record.memory.back())};
    return {std::move(record), std::move(next)};
}

Reservoir::Reservoir(ReservoirConfig config) : config_(std::move(config)) {
    config_.validate();
    reset();
}

void Reservoir::reset() { state_ = ReservoirState::zeros(config_.width()); }

StepRecord Reservoir::feed(const PaddedInput& input) {
    auto [record, next] = run_step(config_, state_, input);
    state_ = std::move(next);
    return std::move(record);
}

StepRecord Reservoir::feed(double value) { return feed(pad(encode(config_.encoder, value), config_.buffer)); }

std::vector<StepRecord> run_sequence(const ReservoirConfig& config, std::span<const double> inputs) {
    if (inputs.empty()) throw DataError("run_sequence needs at least one input");
    Reservoir reservoir(config);
    std::vector<StepRecord> records;
    records.reserve(inputs.size());
    for (double u : inputs) records.push_back(reservoir.feed(u));
    return records;
}

std::vector<StepRecord> run_sequence(const ReservoirConfig& config, std::span<const PaddedInput> inputs) {
    if (inputs.empty()) throw DataError("run_sequence needs at least one input");
    Reservoir reservoir(config);
    std::vector<StepRecord> records;
    records.reserve(inputs.size());
    for (const auto& u : inputs) records.push_back(reservoir.feed(u));
    return records;
}

} // namespace reca
