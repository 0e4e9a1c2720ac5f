#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "reca/automaton.hpp"

namespace reca {

/// One line per row, '.' for 0 and '#' for 1.
std::string render_text(const Trace& trace);

/// Projection rows, a line of '-' marking the phase boundary, then memory rows
/// 1..i_m (memory row 0 repeats the last projection row and is skipped).
std::string render_pair_text(const Trace& projection, const Trace& memory);

/// Binary PGM (P5, maxval 255): cell 1 -> 0 (black), cell 0 -> 255 (white).
/// Boundary rows inserted by render_pair_pgm are mid grey (128).
std::string render_pgm(const Trace& trace);
std::string render_pair_pgm(const Trace& projection, const Trace& memory);

inline constexpr unsigned char kPgmOn = 0;
inline constexpr unsigned char kPgmOff = 255;
inline constexpr unsigned char kPgmBoundary = 128;

} // namespace reca
