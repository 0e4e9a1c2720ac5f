#include "reca/render.hpp"

namespace reca {

namespace {

void append_row(std::string& out, RowView row) {
    out += row.to_string('.', '#');
    out += '\n';
}

void append_pixels(std::string& out, RowView row) {
    for (std::size_t j = 0; j < row.width(); ++j) out += static_cast<char>(row[j] ? kPgmOn : kPgmOff);
}

std::string pgm_header(std::size_t width, std::size_t height) {
    return "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
}

} // namespace

std::string render_text(const Trace& trace) {
    std::string out;
    for (std::size_t t = 0; t < trace.rows(); ++t) append_row(out, trace.row(t));
    return out;
}

std::string render_pair_text(const Trace& projection, const Trace& memory) {
    std::string out = render_text(projection);
    out += std::string(projection.width(), '-');
    out += '\n';
    for (std::size_t t = 1; t < memory.rows(); ++t) append_row(out, memory.row(t));
    return out;
}

std::string render_pgm(const Trace& trace) {
    std::string out = pgm_header(trace.width(), trace.rows());
    for (std::size_t t = 0; t < trace.rows(); ++t) append_pixels(out, trace.row(t));
    return out;
}

std::string render_pair_pgm(const Trace& projection, const Trace& memory) {
    const std::size_t height = projection.rows() + 1 + memory.iterations();
    std::string out = pgm_header(projection.width(), height);
    for (std::size_t t = 0; t < projection.rows(); ++t) append_pixels(out, projection.row(t));
    out.append(projection.width(), static_cast<char>(kPgmBoundary));
    for (std::size_t t = 1; t < memory.rows(); ++t) append_pixels(out, memory.row(t));
    return out;
}

} // namespace reca
