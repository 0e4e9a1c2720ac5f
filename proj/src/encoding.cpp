#include "reca/encoding.hpp"

#include <cmath>
#include <sstream>

namespace reca {

std::uint64_t EncoderSpec::bins() const noexcept {
    if (scheme == EncoderScheme::Unary) return size;
    return std::uint64_t{1} << size;
}

void EncoderSpec::validate() const {
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
        throw ConfigError("encoder range requires finite lo < hi");
    }
    if (scheme == EncoderScheme::Unary) {
        if (size < 2) throw ConfigError("unary encoder needs at least 2 cells");
    } else if (size < 1 || size > kMaxCodeBits) {
        throw ConfigError("binary/gray encoder needs 1.." + std::to_string(kMaxCodeBits) + " bits");
    }
}

std::uint64_t bin_index(const EncoderSpec& spec, double value) {
    if (std::isnan(value)) throw RangeError("cannot encode NaN");
    if (!spec.clamp && (value < spec.lo || value > spec.hi)) {
        std::ostringstream msg;
        msg << "value " << value << " outside encoder range [" << spec.lo << ", " << spec.hi << "]";
        throw RangeError(msg.str());
    }
    const std::uint64_t n = spec.bins();
    const double scaled = std::floor((value - spec.lo) / (spec.hi - spec.lo) * static_cast<double>(n));
    if (!(scaled > 0.0)) return 0;
    if (scaled >= static_cast<double>(n)) return n - 1;
    return static_cast<std::uint64_t>(scaled);
}

StateVector encode(const EncoderSpec& spec, double value) {
    spec.validate();
    const std::uint64_t bin = bin_index(spec, value);
    StateVector out(spec.width());
    if (spec.scheme == EncoderScheme::Unary) {
        out.set(bin, true);
        return out;
    }
    const std::uint64_t code = spec.scheme == EncoderScheme::Gray ? gray_encode(bin) : bin;
    for (std::size_t i = 0; i < spec.size; ++i) {
        out.set(i, (code >> (spec.size - 1 - i)) & 1U);
    }
    return out;
}

std::uint64_t decode_bin(const EncoderSpec& spec, RowView encoded) {
    if (encoded.width() != spec.width()) throw InvalidWidth("encoded width does not match encoder");
    if (spec.scheme == EncoderScheme::Unary) {
        for (std::size_t i = 0; i < encoded.width(); ++i) {
            if (encoded[i]) return i;
        }
        throw DataError("unary vector has no set cell");
    }
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < spec.size; ++i) code = (code << 1) | static_cast<std::uint64_t>(encoded[i]);
    return spec.scheme == EncoderScheme::Gray ? gray_decode(code) : code;
}

PaddedInput pad(const StateVector& encoded, std::size_t buffer) {
    PaddedInput out{StateVector(encoded.width() + 2 * buffer), buffer};
    for (std::size_t i = 0; i < encoded.width(); ++i) {
        if (encoded[i]) out.cells.set(buffer + i, true);
    }
    return out;
}

StateVector concat_attributes(std::span<const StateVector> parts) {
    if (parts.empty()) throw DataError("concat_attributes needs at least one vector");
    std::size_t width = 0;
    for (const auto& p : parts) width += p.width();
    StateVector out(width);
    std::size_t offset = 0;
    for (const auto& p : parts) {
        for (std::size_t i = 0; i < p.width(); ++i) {
            if (p[i]) out.set(offset + i, true);
        }
        offset += p.width();
    }
    return out;
}

} // namespace reca
