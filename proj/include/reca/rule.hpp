#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "reca/errors.hpp"

namespace reca {

/// Cells in an elementary neighborhood (left, center, right).
inline constexpr int kNeighborhoodSize = 3;
/// 2^(2^3) distinct elementary rules.
inline constexpr int kRuleCount = 256;

/// An elementary cellular automaton rule, identified by its Wolfram number.
///
/// Bit k of the number is the new cell state for neighborhood code
/// k = 4*left + 2*center + right.
class Rule {
public:
    constexpr Rule() = default;

    constexpr explicit Rule(int number) : number_(static_cast<std::uint8_t>(number)) {
        if (number < 0 || number >= kRuleCount) {
            throw RangeError("rule number must be in [0, 255]");
        }
    }

    static constexpr Rule from_table(const std::array<bool, 8>& table) {
        int n = 0;
        for (int k = 0; k < 8; ++k) {
            if (table[k]) n |= 1 << k;
        }
        return Rule(n);
    }

    constexpr int number() const noexcept { return number_; }

    constexpr bool output(int code) const noexcept { return (number_ >> (code & 7)) & 1; }

    constexpr bool output(bool left, bool center, bool right) const noexcept {
        return output(4 * left + 2 * center + right);
    }

    constexpr std::array<bool, 8> table() const noexcept {
        std::array<bool, 8> t{};
        for (int k = 0; k < 8; ++k) t[k] = output(k);
        return t;
    }

    friend constexpr bool operator==(Rule, Rule) = default;

private:
    std::uint8_t number_ = 0;
};

constexpr bool rule_output(Rule rule, bool left, bool center, bool right) noexcept {
    return rule.output(left, center, right);
}

/// Left-right reflection: table'[4r + 2c + l] = table[4l + 2c + r].
constexpr Rule mirror_rule(Rule rule) noexcept {
    int n = 0;
    for (int k = 0; k < 8; ++k) {
        const int l = (k >> 2) & 1, c = (k >> 1) & 1, r = k & 1;
        if (rule.output(k)) n |= 1 << (4 * r + 2 * c + l);
    }
    return Rule(n);
}

/// 0/1 conjugation: table'[n] = !table[7 - n].
constexpr Rule complement_rule(Rule rule) noexcept {
    int n = 0;
    for (int k = 0; k < 8; ++k) {
        if (!rule.output(7 - k)) n |= 1 << k;
    }
    return Rule(n);
}

/// Orbits of {0..255} under {identity, mirror, complement, mirror o complement}.
/// Each class is sorted; classes are ordered by their smallest member.
std::vector<std::vector<int>> equivalence_classes();

/// Smallest rule number equivalent to `rule`.
int canonical_rule(Rule rule);

enum class Category { I, II, III, IV };

/// Behavior category for the handful of rules with a cited label; nullopt
/// means unclassified.
std::optional<Category> rule_category(Rule rule);

std::string_view category_name(std::optional<Category> category);

} // namespace reca
