#include "reca/automaton.hpp"

#include <algorithm>
#include <bit>

namespace reca {

namespace {

// Sum of minterms over 64 cells at once.
inline Word apply_rule(int number, Word l, Word c, Word r) noexcept {
    Word out = 0;
    for (int k = 0; k < 8; ++k) {
        if (!((number >> k) & 1)) continue;
        const Word ml = (k & 4) ? l : ~l;
        const Word mc = (k & 2) ? c : ~c;
        const Word mr = (k & 1) ? r : ~r;
        out |= ml & mc & mr;
    }
    return out;
}

inline Word tail_mask(std::size_t width) noexcept {
    const std::size_t rem = width % kWordBits;
    return rem == 0 ? ~Word{0} : (Word{1} << rem) - 1;
}

inline void put(std::span<Word> words, std::size_t i, bool v) noexcept {
    const Word bit = Word{1} << (i % kWordBits);
    if (v) {
        words[i / kWordBits] |= bit;
    } else {
        words[i / kWordBits] &= ~bit;
    }
}

inline bool at(std::span<const Word> words, std::size_t i) noexcept {
    return (words[i / kWordBits] >> (i % kWordBits)) & 1U;
}

} // namespace

std::size_t RowView::count() const noexcept {
    std::size_t n = 0;
    for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::string RowView::to_string(char off, char on) const {
    std::string s(width_, off);
    for (std::size_t i = 0; i < width_; ++i) {
        if ((*this)[i]) s[i] = on;
    }
    return s;
}

bool operator==(const RowView& a, const RowView& b) noexcept {
    return a.width() == b.width() && std::ranges::equal(a.words(), b.words());
}

StateVector StateVector::from_string(std::string_view bits) {
    StateVector s(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        switch (bits[i]) {
        case '1': case '#': s.set(i, true); break;
        case '0': case '.': break;
        default: throw RangeError("invalid cell character '" + std::string(1, bits[i]) + "' in pattern");
        }
    }
    return s;
}

StateVector StateVector::from_bits(std::span<const std::uint8_t> bits) {
    StateVector s(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] > 1) throw RangeError("cell values must be 0 or 1");
        if (bits[i]) s.set(i, true);
    }
    return s;
}

bool StateVector::get(std::size_t i) const {
    if (i >= width_) throw RangeError("cell index out of range");
    return (*this)[i];
}

void StateVector::set(std::size_t i, bool value) {
    if (i >= width_) throw RangeError("cell index out of range");
    put(words_, i, value);
}

std::vector<std::uint8_t> StateVector::to_bits() const {
    std::vector<std::uint8_t> bits(width_);
    for (std::size_t i = 0; i < width_; ++i) bits[i] = (*this)[i];
    return bits;
}

void StateVector::require_same_width(const StateVector& other) const {
    if (other.width_ != width_) {
        throw InvalidWidth("width mismatch: " + std::to_string(width_) + " vs " + std::to_string(other.width_));
    }
}

StateVector& StateVector::operator^=(const StateVector& other) {
    require_same_width(other);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
}

StateVector& StateVector::operator|=(const StateVector& other) {
    require_same_width(other);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
    return *this;
}

StateVector& StateVector::operator&=(const StateVector& other) {
    require_same_width(other);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
    return *this;
}

Trace::Trace(std::size_t width, std::size_t iterations)
    : width_(width), stride_(words_for(width)), rows_(iterations + 1), data_(rows_ * stride_, 0) {}

void step_into(Rule rule, std::span<const Word> in, std::span<Word> out, std::size_t width, EdgePolicy edges) {
    if (width < kMinWidth) {
        throw InvalidWidth("state width must be at least 3, got " + std::to_string(width));
    }
    const std::size_t n = words_for(width);
    const int number = rule.number();
    const std::size_t last = width - 1;

    for (std::size_t w = 0; w < n; ++w) {
        const Word c = in[w];
        // Cell i's left neighbor is cell i - 1, so shift toward higher bit positions.
        Word l = c << 1;
        if (w > 0) l |= in[w - 1] >> (kWordBits - 1);
        Word r = c >> 1;
        if (w + 1 < n) r |= in[w + 1] << (kWordBits - 1);
        if (edges.kind == EdgePolicy::Kind::Cyclic) {
            if (w == 0) l |= static_cast<Word>(at(in, last));
            if (w == n - 1) r |= static_cast<Word>(at(in, 0)) << (last % kWordBits);
        }
        out[w] = apply_rule(number, l, c, r);
    }
    out[n - 1] &= tail_mask(width);

    if (edges.is_fixed()) {
        put(out, 0, edges.edge_state);
        put(out, last, edges.edge_state);
    }
}

StateVector step(Rule rule, const StateVector& state, EdgePolicy edges) {
    StateVector next(state.width());
    step_into(rule, state.words(), next.words(), state.width(), edges);
    return next;
}

Trace evolve(Rule rule, RowView initial, std::size_t iterations, EdgePolicy edges) {
    if (initial.width() < kMinWidth) {
        throw InvalidWidth("state width must be at least 3, got " + std::to_string(initial.width()));
    }
    Trace trace(initial.width(), iterations);
    std::ranges::copy(initial.words(), trace.row_words(0).begin());
    for (std::size_t t = 0; t < iterations; ++t) {
        step_into(rule, trace.row(t).words(), trace.row_words(t + 1), initial.width(), edges);
    }
    return trace;
}

Trace evolve(Rule rule, const StateVector& initial, std::size_t iterations, EdgePolicy edges) {
    return evolve(rule, initial.view(), iterations, edges);
}

} // namespace reca
