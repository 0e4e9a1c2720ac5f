#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "reca/errors.hpp"

namespace reca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Singular values below tol * sigma_max are treated as zero.
inline constexpr double kDefaultRcond = 1e-10;

struct Threshold {
    double level = 0.5;
};
struct Argmax {};
/// Closest symbol wins; ties go to the lower symbol.
struct NearestSymbol {
    std::vector<double> symbols;
};

using Decoder = std::variant<Threshold, Argmax, NearestSymbol>;

struct TrainOptions {
    double rcond = kDefaultRcond;
    double ridge = 0.0; // 0 means plain pseudoinverse
};

/// Linear output layer: y_hat = W_out * s, with s including the bias node.
struct TrainedReadout {
    Matrix w_out; // m x F
    Decoder decoder = Argmax{};

    std::size_t outputs() const noexcept { return static_cast<std::size_t>(w_out.rows()); }
    std::size_t features() const noexcept { return static_cast<std::size_t>(w_out.cols()); }
};

/// Minimum-norm least-squares solution X of S * X = Y.
Matrix solve_min_norm(const Matrix& S, const Matrix& Y, double rcond = kDefaultRcond);

/// Moore-Penrose pseudoinverse via the same rank-revealing route as training.
Matrix pseudoinverse(const Matrix& S, double rcond = kDefaultRcond);

/// S is K x F (one feature row per example), Y is K x m.
TrainedReadout train(const Matrix& S, const Matrix& Y, Decoder decoder = Argmax{}, const TrainOptions& options = {});

Vector predict(const TrainedReadout& readout, std::span<const double> features);
/// Row-wise predictions for a K x F design matrix; returns K x m.
Matrix predict(const TrainedReadout& readout, const Matrix& S);

/// Threshold -> 0/1, Argmax -> class index (lowest index on ties),
/// NearestSymbol -> the chosen symbol value.
double decode(const Decoder& decoder, std::span<const double> raw);

inline double decode(const TrainedReadout& readout, std::span<const double> raw) {
    return decode(readout.decoder, raw);
}

/// sum (y - y_hat)^2 / (K * sum y^2)
double nmse(std::span<const double> y, std::span<const double> y_hat);
double mse(std::span<const double> y, std::span<const double> y_hat);
double symbol_error_rate(std::span<const double> decoded, std::span<const double> truth);
double accuracy(std::span<const double> decoded, std::span<const double> truth);

std::string readout_to_json(const TrainedReadout& readout);
TrainedReadout readout_from_json(const std::string& text);

} // namespace reca
