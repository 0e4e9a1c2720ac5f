#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "reca/automaton.hpp"

namespace reca {

enum class EncoderScheme { Unary, Binary, Gray };

/// Maps a real interval onto binary vectors.
///
/// `size` is the cell count N for Unary and the bit count for Binary/Gray.
/// Bins are half-open [lo + k*w, lo + (k+1)*w); `hi` itself lands in the last bin.
struct EncoderSpec {
    EncoderScheme scheme = EncoderScheme::Unary;
    std::size_t size = 64;
    double lo = -1.0;
    double hi = 1.0;
    bool clamp = true;

    static EncoderSpec unary(std::size_t cells, double lo, double hi, bool clamp = true) {
        return {EncoderScheme::Unary, cells, lo, hi, clamp};
    }
    static EncoderSpec binary(std::size_t bits, double lo, double hi, bool clamp = true) {
        return {EncoderScheme::Binary, bits, lo, hi, clamp};
    }
    static EncoderSpec gray(std::size_t bits, double lo, double hi, bool clamp = true) {
        return {EncoderScheme::Gray, bits, lo, hi, clamp};
    }

    /// Encoded vector width.
    std::size_t width() const noexcept { return size; }
    /// Number of distinguishable input bins.
    std::uint64_t bins() const noexcept;

    void validate() const;
};

inline constexpr std::size_t kMaxCodeBits = 62;

std::uint64_t bin_index(const EncoderSpec& spec, double value);

StateVector encode(const EncoderSpec& spec, double value);

/// Inverse of the Binary/Gray layouts (MSB first); Unary returns the set cell.
std::uint64_t decode_bin(const EncoderSpec& spec, RowView encoded);

constexpr std::uint64_t gray_encode(std::uint64_t b) noexcept { return b ^ (b >> 1); }

constexpr std::uint64_t gray_decode(std::uint64_t g) noexcept {
    for (std::uint64_t shift = g >> 1; shift != 0; shift >>= 1) g ^= shift;
    return g;
}

/// Encoded input surrounded by `buffer` zero cells on each side.
struct PaddedInput {
    StateVector cells;
    std::size_t buffer = 0;

    std::size_t width() const noexcept { return cells.width(); }
};

PaddedInput pad(const StateVector& encoded, std::size_t buffer);

/// Concatenates per-attribute encodings in order.
StateVector concat_attributes(std::span<const StateVector> parts);

} // namespace reca
