#pragma once

// Test-only reference implementations. Deliberately naive: one cell at a
// time, plain vectors, no bit packing.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "reca/automaton.hpp"

namespace reca::oracle {

using Cells = std::vector<int>;

inline int rule_bit(int number, int l, int c, int r) { return (number >> (4 * l + 2 * c + r)) & 1; }

inline Cells naive_step(int number, const Cells& prev, bool cyclic, int edge_state = 0) {
    const auto n = static_cast<int>(prev.size());
    Cells next(prev.size());
    for (int i = 0; i < n; ++i) {
        if (!cyclic && (i == 0 || i == n - 1)) {
            next[static_cast<std::size_t>(i)] = edge_state;
            continue;
        }
        const int l = prev[static_cast<std::size_t>((i - 1 + n) % n)];
        const int c = prev[static_cast<std::size_t>(i)];
        const int r = prev[static_cast<std::size_t>((i + 1) % n)];
        next[static_cast<std::size_t>(i)] = rule_bit(number, l, c, r);
    }
    return next;
}

inline std::vector<Cells> naive_evolve(int number, Cells row, std::size_t iterations, bool cyclic) {
    std::vector<Cells> rows{row};
    for (std::size_t t = 0; t < iterations; ++t) {
        row = naive_step(number, row, cyclic);
        rows.push_back(row);
    }
    return rows;
}

inline Cells to_cells(RowView row) {
    Cells c(row.width());
    for (std::size_t i = 0; i < row.width(); ++i) c[i] = row[i];
    return c;
}

inline StateVector from_cells(const Cells& cells) {
    StateVector s(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) s.set(i, cells[i] != 0);
    return s;
}

inline Cells random_cells(std::mt19937_64& rng, std::size_t width, double density = 0.5) {
    std::bernoulli_distribution bit(density);
    Cells c(width);
    for (auto& v : c) v = bit(rng);
    return c;
}

inline StateVector random_state(std::mt19937_64& rng, std::size_t width, double density = 0.5) {
    return from_cells(random_cells(rng, width, density));
}

} // namespace reca::oracle
