#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reca/rule.hpp"

namespace reca {

struct EdgePolicy {
    enum class Kind { Fixed, Cyclic };

    Kind kind = Kind::Fixed;
    bool edge_state = false; // only meaningful for Fixed

    static constexpr EdgePolicy fixed(bool state = false) noexcept { return {Kind::Fixed, state}; }
    static constexpr EdgePolicy cyclic() noexcept { return {Kind::Cyclic, false}; }

    constexpr bool is_fixed() const noexcept { return kind == Kind::Fixed; }

    friend constexpr bool operator==(EdgePolicy, EdgePolicy) = default;
};

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t width) noexcept {
    return (width + kWordBits - 1) / kWordBits;
}

/// Read-only view of one packed row. Cell i lives in bit (i % 64) of word i / 64;
/// bits past `width` are always zero.
class RowView {
public:
    RowView(std::span<const Word> words, std::size_t width) : words_(words), width_(width) {}

    std::size_t width() const noexcept { return width_; }
    std::span<const Word> words() const noexcept { return words_; }

    bool operator[](std::size_t i) const noexcept { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }

    std::size_t count() const noexcept;
    std::string to_string(char off = '0', char on = '1') const;

private:
    std::span<const Word> words_;
    std::size_t width_;
};

bool operator==(const RowView& a, const RowView& b) noexcept;

/// Fixed-width binary row, bit-packed.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(std::size_t width) : width_(width), words_(words_for(width), 0) {}
    explicit StateVector(RowView row) : width_(row.width()), words_(row.words().begin(), row.words().end()) {}

    /// Parses a string of '0'/'1' (or '.'/'#'). Anything else is a RangeError.
    static StateVector from_string(std::string_view bits);
    static StateVector from_bits(std::span<const std::uint8_t> bits);

    std::size_t width() const noexcept { return width_; }
    std::span<const Word> words() const noexcept { return words_; }
    std::span<Word> words() noexcept { return words_; }

    bool operator[](std::size_t i) const noexcept { return view()[i]; }
    bool get(std::size_t i) const;
    void set(std::size_t i, bool value);

    std::size_t count() const noexcept { return view().count(); }
    std::string to_string(char off = '0', char on = '1') const { return view().to_string(off, on); }
    std::vector<std::uint8_t> to_bits() const;

    RowView view() const noexcept { return RowView(words_, width_); }
    operator RowView() const noexcept { return view(); }

    StateVector& operator^=(const StateVector& other);
    StateVector& operator|=(const StateVector& other);
    StateVector& operator&=(const StateVector& other);

    friend bool operator==(const StateVector& a, const StateVector& b) noexcept {
        return a.width_ == b.width_ && a.words_ == b.words_;
    }

private:
    void require_same_width(const StateVector& other) const;

    std::size_t width_ = 0;
    std::vector<Word> words_;
};

/// Rows of one evolution: row 0 is the initial state, row t + 1 = step(row t).
/// Stored contiguously so a trace is one allocation.
class Trace {
public:
    Trace() = default;
    Trace(std::size_t width, std::size_t iterations);

    std::size_t width() const noexcept { return width_; }
    std::size_t iterations() const noexcept { return rows_ - 1; }
    std::size_t rows() const noexcept { return rows_; }

    RowView row(std::size_t i) const noexcept {
        return RowView(std::span<const Word>(data_).subspan(i * stride_, stride_), width_);
    }
    std::span<Word> row_words(std::size_t i) noexcept {
        return std::span<Word>(data_).subspan(i * stride_, stride_);
    }
    RowView back() const noexcept { return row(rows_ - 1); }

    friend bool operator==(const Trace& a, const Trace& b) noexcept {
        return a.width_ == b.width_ && a.rows_ == b.rows_ && a.data_ == b.data_;
    }

private:
    std::size_t width_ = 0;
    std::size_t stride_ = 0;
    std::size_t rows_ = 1;
    std::vector<Word> data_;
};

inline constexpr std::size_t kMinWidth = 3;

/// One synchronous update. Fixed edges are not evaluated by the rule; they
/// are written with edge_state after the interior update.
StateVector step(Rule rule, const StateVector& state, EdgePolicy edges);

/// Writes step(rule, in) into `out`. Both spans hold words_for(width) words and
/// must not alias.
void step_into(Rule rule, std::span<const Word> in, std::span<Word> out, std::size_t width, EdgePolicy edges);

Trace evolve(Rule rule, const StateVector& initial, std::size_t iterations, EdgePolicy edges);
Trace evolve(Rule rule, RowView initial, std::size_t iterations, EdgePolicy edges);

} // namespace reca
