#include "reca/rule.hpp"

#include <algorithm>
#include <set>

namespace reca {

namespace {

std::array<int, 4> orbit(Rule r) {
    const Rule m = mirror_rule(r);
    return {r.number(), m.number(), complement_rule(r).number(), complement_rule(m).number()};
}

} // namespace

std::vector<std::vector<int>> equivalence_classes() {
    std::vector<std::vector<int>> classes;
    std::array<bool, kRuleCount> seen{};
    for (int n = 0; n < kRuleCount; ++n) {
        if (seen[n]) continue;
        const auto images = orbit(Rule(n));
        std::set<int> members(images.begin(), images.end());
        for (int m : members) seen[m] = true;
        classes.emplace_back(members.begin(), members.end());
    }
    return classes;
}

int canonical_rule(Rule rule) {
    const auto images = orbit(rule);
    return *std::min_element(images.begin(), images.end());
}

std::optional<Category> rule_category(Rule rule) {
    switch (rule.number()) {
    case 0: case 8: case 136: case 250: case 252:
        return Category::I;
    case 36: case 104: case 218: case 50: case 242:
        return Category::II;
    case 30: case 45: case 146: case 126: case 182:
        return Category::III;
    case 110: case 137:
        return Category::IV;
    default:
        return std::nullopt;
    }
}

std::string_view category_name(std::optional<Category> category) {
    if (!category) return "unclassified";
    switch (*category) {
    case Category::I: return "I";
    case Category::II: return "II";
    case Category::III: return "III";
    case Category::IV: return "IV";
    }
    return "unclassified";
}

} // namespace reca
