#include "reca/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

namespace reca {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

extern "C" void dgelsd_(const int* m, const int* n, const int* nrhs, double* a, const int* lda, double* b,
                        const int* ldb, double* s, const double* rcond, int* rank, double* work, const int* lwork,
                        int* iwork, int* info);

int lapack_int(Eigen::Index v) {
    if (v > std::numeric_limits<int>::max()) throw DataError("matrix too large for LAPACK");
    return static_cast<int>(v);
}

// LAPACK's divide-and-conquer least squares: minimum-norm solution with
// singular values at or below rcond * sigma_max treated as zero.
Matrix lapack_min_norm(Matrix A, const Matrix& Y, double rcond) {
    const int m = lapack_int(A.rows()), n = lapack_int(A.cols()), nrhs = lapack_int(Y.cols());
    const int ldb = std::max(m, n);
    Matrix B = Matrix::Zero(ldb, nrhs);
    B.topRows(m) = Y;
    Vector sigma(std::min(m, n));
    int rank = 0, info = 0, lwork = -1, iwork_query = 0;
    double work_query = 0.0;
    dgelsd_(&m, &n, &nrhs, A.data(), &m, B.data(), &ldb, sigma.data(), &rcond, &rank, &work_query, &lwork,
            &iwork_query, &info);
    if (info != 0) throw DataError("least-squares workspace query failed (info " + std::to_string(info) + ")");
    lwork = static_cast<int>(work_query);
    std::vector<double> work(static_cast<std::size_t>(std::max(lwork, 1)));
    std::vector<int> iwork(static_cast<std::size_t>(std::max(iwork_query, 1)));
    dgelsd_(&m, &n, &nrhs, A.data(), &m, B.data(), &ldb, sigma.data(), &rcond, &rank, work.data(), &lwork,
            iwork.data(), &info);
    if (info != 0) throw DataError("least-squares SVD did not converge (info " + std::to_string(info) + ")");
    return B.topRows(n);
}

void require_finite(const Matrix& M, const char* name) {
    if (!M.allFinite()) throw DataError(std::string(name) + " contains non-finite entries");
}

} // namespace

Matrix solve_min_norm(const Matrix& S, const Matrix& Y, double rcond) {
    if (S.rows() != Y.rows()) throw DataError("design and target row counts differ");
    if (S.rows() < 1) throw DataError("need at least one training example");
    require_finite(S, "design matrix");
    require_finite(Y, "target matrix");

    // Zero columns get zero weight in the minimum-norm solution; factor the rest.
    std::vector<Eigen::Index> kept;
    kept.reserve(static_cast<std::size_t>(S.cols()));
    for (Eigen::Index j = 0; j < S.cols(); ++j) {
        if (S.col(j).cwiseAbs().maxCoeff() > 0.0) kept.push_back(j);
    }
    Matrix X = Matrix::Zero(S.cols(), Y.cols());
    if (kept.empty()) return X;

    const auto K = S.rows();
    const auto F = static_cast<Eigen::Index>(kept.size());
    Matrix Sc(K, F);
    for (Eigen::Index j = 0; j < F; ++j) Sc.col(j) = S.col(kept[static_cast<std::size_t>(j)]);

    const Matrix Xc = lapack_min_norm(std::move(Sc), Y, rcond);
    for (Eigen::Index j = 0; j < F; ++j) X.row(kept[static_cast<std::size_t>(j)]) = Xc.row(j);
    return X;
}

Matrix pseudoinverse(const Matrix& S, double rcond) {
    return solve_min_norm(S, Matrix::Identity(S.rows(), S.rows()), rcond);
}

TrainedReadout train(const Matrix& S, const Matrix& Y, Decoder decoder, const TrainOptions& options) {
    if (options.ridge < 0.0) throw ConfigError("ridge must be non-negative");
    TrainedReadout out;
    out.decoder = std::move(decoder);
    if (options.ridge == 0.0) {
        out.w_out = solve_min_norm(S, Y, options.rcond).transpose();
        return out;
    }
    const auto K = S.rows(), F = S.cols();
    Matrix Sa(K + F, F);
    Sa << S, std::sqrt(options.ridge) * Matrix::Identity(F, F);
    Matrix Ya(K + F, Y.cols());
    Ya << Y, Matrix::Zero(F, Y.cols());
    out.w_out = solve_min_norm(Sa, Ya, options.rcond).transpose();
    return out;
}

Vector predict(const TrainedReadout& readout, std::span<const double> features) {
    if (features.size() != readout.features()) {
        throw InvalidWidth("feature length " + std::to_string(features.size()) + " does not match readout width " +
                           std::to_string(readout.features()));
    }
    const Eigen::Map<const Vector> s(features.data(), static_cast<Eigen::Index>(features.size()));
    return readout.w_out * s;
}

Matrix predict(const TrainedReadout& readout, const Matrix& S) {
    if (static_cast<std::size_t>(S.cols()) != readout.features()) {
        throw InvalidWidth("design matrix width does not match readout");
    }
    return S * readout.w_out.transpose();
}

double decode(const Decoder& decoder, std::span<const double> raw) {
    if (raw.empty()) throw InvalidWidth("cannot decode an empty output");
    return std::visit(overloaded{
                          [&](const Threshold& t) { return raw[0] >= t.level ? 1.0 : 0.0; },
                          [&](const Argmax&) {
                              // max_element keeps the first maximum
                              return static_cast<double>(std::max_element(raw.begin(), raw.end()) - raw.begin());
                          },
                          [&](const NearestSymbol& n) {
                              if (n.symbols.empty()) throw ConfigError("nearest-symbol decoder has no symbols");
                              std::vector<double> sorted = n.symbols;
                              std::ranges::sort(sorted);
                              double best = sorted.front();
                              for (double s : sorted) {
                                  if (std::abs(raw[0] - s) < std::abs(raw[0] - best)) best = s;
                              }
                              return best;
                          },
                      },
                      decoder);
}

double nmse(std::span<const double> y, std::span<const double> y_hat) {
    if (y.size() != y_hat.size()) throw InvalidWidth("nmse: length mismatch");
    if (y.empty()) throw DataError("nmse: empty input");
    double err = 0.0, energy = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - y_hat[i];
        err += d * d;
        energy += y[i] * y[i];
    }
    if (energy == 0.0) throw DataError("nmse undefined for a zero-energy target");
    return err / (static_cast<double>(y.size()) * energy);
}

double mse(std::span<const double> y, std::span<const double> y_hat) {
    if (y.size() != y_hat.size()) throw InvalidWidth("mse: length mismatch");
    if (y.empty()) throw DataError("mse: empty input");
    double err = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) err += (y[i] - y_hat[i]) * (y[i] - y_hat[i]);
    return err / static_cast<double>(y.size());
}

double symbol_error_rate(std::span<const double> decoded, std::span<const double> truth) {
    if (decoded.size() != truth.size()) throw InvalidWidth("label sequences differ in length");
    if (decoded.empty()) return 0.0;
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < decoded.size(); ++i) wrong += decoded[i] != truth[i];
    return static_cast<double>(wrong) / static_cast<double>(decoded.size());
}

double accuracy(std::span<const double> decoded, std::span<const double> truth) {
    if (decoded.size() != truth.size()) throw InvalidWidth("label sequences differ in length");
    if (decoded.empty()) return 1.0;
    std::size_t right = 0;
    for (std::size_t i = 0; i < decoded.size(); ++i) right += decoded[i] == truth[i];
    return static_cast<double>(right) / static_cast<double>(decoded.size());
}

std::string readout_to_json(const TrainedReadout& readout) {
    nlohmann::json j;
    j["rows"] = readout.w_out.rows();
    j["cols"] = readout.w_out.cols();
    auto& rows = j["w_out"] = nlohmann::json::array();
    for (Eigen::Index r = 0; r < readout.w_out.rows(); ++r) {
        std::vector<double> row(readout.w_out.row(r).begin(), readout.w_out.row(r).end());
        rows.push_back(row);
    }
    j["decoder"] = std::visit(overloaded{
                                  [](const Threshold& t) { return nlohmann::json{{"kind", "threshold"}, {"level", t.level}}; },
                                  [](const Argmax&) { return nlohmann::json{{"kind", "argmax"}}; },
                                  [](const NearestSymbol& n) {
                                      return nlohmann::json{{"kind", "nearest_symbol"}, {"symbols", n.symbols}};
                                  },
                              },
                              readout.decoder);
    return j.dump(1);
}

TrainedReadout readout_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid readout JSON: ") + e.what());
    }
    try {
        TrainedReadout out;
        const auto rows = j.at("rows").get<Eigen::Index>();
        const auto cols = j.at("cols").get<Eigen::Index>();
        const auto& w = j.at("w_out");
        if (static_cast<Eigen::Index>(w.size()) != rows) throw DataError("w_out row count mismatch");
        out.w_out.resize(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            const auto row = w.at(static_cast<std::size_t>(r)).get<std::vector<double>>();
            if (static_cast<Eigen::Index>(row.size()) != cols) throw DataError("w_out column count mismatch");
            for (Eigen::Index c = 0; c < cols; ++c) out.w_out(r, c) = row[static_cast<std::size_t>(c)];
        }
        const auto& d = j.at("decoder");
        const auto kind = d.at("kind").get<std::string>();
        if (kind == "threshold") {
            out.decoder = Threshold{d.at("level").get<double>()};
        } else if (kind == "argmax") {
            out.decoder = Argmax{};
        } else if (kind == "nearest_symbol") {
            out.decoder = NearestSymbol{d.at("symbols").get<std::vector<double>>()};
        } else {
            throw DataError("unknown decoder kind '" + kind + "'");
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed readout JSON: ") + e.what());
    }
}

} // namespace reca
