#include "reca/readout.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "reca/encoding.hpp"

namespace reca {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

// Calls fn(column) for every set cell of the row.
template <class Fn>
void for_each_set(RowView row, Fn&& fn) {
    const auto words = row.words();
    for (std::size_t w = 0; w < words.size(); ++w) {
        Word bits = words[w];
        while (bits != 0) {
            const int b = std::countr_zero(bits);
            fn(w * kWordBits + static_cast<std::size_t>(b));
            bits &= bits - 1;
        }
    }
}

} // namespace

void validate_readout(const ReadoutScheme& scheme, std::size_t i_p) {
    std::visit(overloaded{
                   [&](const IthIteration& s) {
                       if (s.i < 1 || s.i > i_p) {
                           throw ConfigError("readout iteration must be in [1, i_p]");
                       }
                   },
                   [&](const BinnedColumnSums& s) {
                       if (s.bins < 1) throw ConfigError("bins must be at least 1");
                       if (i_p % s.bins != 0) throw ConfigError("bins must divide i_p");
                   },
                   [&](const ColumnCode&) {
                       if (i_p > kColumnCodeMaxBits) {
                           throw ConfigError("column code readout supports i_p <= " +
                                             std::to_string(kColumnCodeMaxBits));
                       }
                   },
               },
               scheme);
}

std::size_t feature_length(const ReadoutScheme& scheme, std::size_t width) {
    if (const auto* b = std::get_if<BinnedColumnSums>(&scheme)) return b->bins * width + 1;
    return width + 1;
}

void features_into(const ReadoutScheme& scheme, const Trace& projection, std::span<double> out) {
    const std::size_t i_p = projection.iterations();
    const std::size_t width = projection.width();
    validate_readout(scheme, i_p);
    if (out.size() != feature_length(scheme, width)) {
        throw InvalidWidth("feature buffer has the wrong length");
    }
    std::ranges::fill(out, 0.0);

    std::visit(overloaded{
                   [&](const IthIteration& s) {
                       for_each_set(projection.row(s.i), [&](std::size_t j) { out[j] = 1.0; });
                   },
                   [&](const BinnedColumnSums& s) {
                       const std::size_t per_bin = i_p / s.bins;
                       const auto denom = static_cast<double>(per_bin);
                       for (std::size_t t = 1; t <= i_p; ++t) {
                           const std::size_t offset = ((t - 1) / per_bin) * width;
                           for_each_set(projection.row(t), [&](std::size_t j) { out[offset + j] += 1.0; });
                       }
                       for (std::size_t k = 0; k + 1 < out.size(); ++k) out[k] /= denom;
                   },
                   [&](const ColumnCode& s) {
                       std::vector<std::uint64_t> code(width, 0);
                       for (std::size_t n = 0; n < i_p; ++n) {
                           const std::size_t t = s.msb == MsbRow::FirstRow ? n + 1 : i_p - n;
                           const RowView row = projection.row(t);
                           for (std::size_t j = 0; j < width; ++j) code[j] = (code[j] << 1) | row[j];
                       }
                       const double denom = std::ldexp(1.0, static_cast<int>(i_p)) - 1.0;
                       for (std::size_t j = 0; j < width; ++j) {
                           const std::uint64_t v = s.code == ColumnCodeKind::Gray ? gray_decode(code[j]) : code[j];
                           out[j] = static_cast<double>(v) / denom;
                       }
                   },
               },
               scheme);
    out.back() = 1.0;
}

std::vector<double> features(const ReadoutScheme& scheme, const Trace& projection) {
    std::vector<double> out(feature_length(scheme, projection.width()));
    features_into(scheme, projection, out);
    return out;
}

} // namespace reca
