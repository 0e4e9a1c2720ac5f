#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "reca/automaton.hpp"
#include "reca/reservoir.hpp"

namespace reca {

/// Row i of the projection trace (1-based, 1 <= i <= i_p) as 0/1 features.
struct IthIteration {
    std::size_t i = 1;
};

/// Rows 1..i_p split into `bins` contiguous groups; each column's mean per group.
struct BinnedColumnSums {
    std::size_t bins = 2;
};

enum class ColumnCodeKind { Binary, Gray };
enum class MsbRow { FirstRow, LastRow };

/// Each column's i_p bits read as an unsigned number, scaled by 1 / (2^i_p - 1).
struct ColumnCode {
    ColumnCodeKind code = ColumnCodeKind::Binary;
    MsbRow msb = MsbRow::FirstRow;
};

using ReadoutScheme = std::variant<IthIteration, BinnedColumnSums, ColumnCode>;

/// Longest column a ColumnCode readout accepts.
inline constexpr std::size_t kColumnCodeMaxBits = 52;

void validate_readout(const ReadoutScheme& scheme, std::size_t i_p);

/// Feature count including the trailing bias node.
std::size_t feature_length(const ReadoutScheme& scheme, std::size_t width);

/// Writes the features of `projection` (rows 1..i_p) into `out`, bias last.
void features_into(const ReadoutScheme& scheme, const Trace& projection, std::span<double> out);

std::vector<double> features(const ReadoutScheme& scheme, const Trace& projection);

inline std::vector<double> features(const ReadoutScheme& scheme, const StepRecord& record) {
    return features(scheme, record.projection);
}

} // namespace reca
