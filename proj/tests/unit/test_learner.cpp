#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "reca/learner.hpp"

using namespace reca;

namespace {

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> g;
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = g(rng);
    return m;
}

// Rank-r matrix with binary-ish structure, like reservoir features.
Matrix rank_deficient(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, Eigen::Index rank) {
    return random_matrix(rng, rows, rank) * random_matrix(rng, rank, cols);
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("identity design returns the targets") {
    std::mt19937_64 rng(1);
    const Matrix Y = random_matrix(rng, 6, 2);
    const auto r = train(Matrix::Identity(6, 6), Y);
    CHECK(max_abs(r.w_out.transpose() - Y) < 1e-12);
    CHECK(r.outputs() == 2);
    CHECK(r.features() == 6);
}

TEST_CASE("a column of ones learns the mean") {
    Matrix S = Matrix::Ones(5, 1);
    Matrix Y(5, 1);
    Y << 1, 2, 3, 4, 10;
    CHECK(train(S, Y).w_out(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("planted solution is recovered") {
    std::mt19937_64 rng(2);
    const Matrix S = random_matrix(rng, 20, 5);
    const Matrix W = random_matrix(rng, 3, 5);
    const Matrix Y = S * W.transpose();
    const auto r = train(S, Y);
    CHECK(max_abs(r.w_out - W) < 1e-8);
    for (Eigen::Index k = 0; k < S.rows(); ++k) {
        const Vector s = S.row(k).transpose();
        const Vector y = predict(r, std::span<const double>(s.data(), static_cast<std::size_t>(s.size())));
        CHECK(max_abs(y - Y.row(k).transpose()) < 1e-8);
    }
    CHECK(max_abs(predict(r, S) - Y) < 1e-8);
}

TEST_CASE("predict") {
    TrainedReadout zero{Matrix::Zero(2, 4), Argmax{}};
    const std::vector<double> s{0.3, 1.0, 0.0, 1.0};
    CHECK(predict(zero, s).isZero());
    TrainedReadout bias{Matrix::Zero(1, 4), Threshold{}};
    bias.w_out(0, 3) = 0.7;
    CHECK(predict(bias, s)(0) == 0.7);
    CHECK(predict(bias, std::vector<double>{0.9, 0.1, 1.0, 1.0})(0) == 0.7);
    CHECK_THROWS_AS(predict(bias, std::vector<double>{1.0}), InvalidWidth);
}

TEST_CASE("property: pseudoinverse laws") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng() % 12);
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 12);
        const Eigen::Index r = 1 + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(std::min(m, n)));
        const Matrix S = trial % 2 == 0 ? random_matrix(rng, m, n) : rank_deficient(rng, m, n, r);
        const Matrix P = pseudoinverse(S);
        CHECK(P.rows() == n);
        CHECK(P.cols() == m);
        CHECK(max_abs(S * P * S - S) < 1e-8);
        CHECK(max_abs(P * S * P - P) < 1e-8);
        CHECK(max_abs((S * P).transpose() - S * P) < 1e-8);
        CHECK(max_abs((P * S).transpose() - P * S) < 1e-8);
    }
}

TEST_CASE("property: normal-equation residual") {
    std::mt19937_64 rng(4);
    std::bernoulli_distribution bit(0.3);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index K = 200, F = 60;
        Matrix S(K, F);
        for (Eigen::Index i = 0; i < K; ++i)
            for (Eigen::Index j = 0; j < F; ++j) S(i, j) = bit(rng) ? 1.0 : 0.0;
        S.col(7).setZero();
        S.col(9) = S.col(3);
        S.col(F - 1).setOnes();
        const Matrix Y = random_matrix(rng, K, 2);
        const auto r = train(S, Y);
        CHECK(max_abs(S.transpose() * (S * r.w_out.transpose() - Y)) < 1e-6);
        CHECK(r.w_out.col(7).isZero());
    }
}

TEST_CASE("property: duplicating a column keeps training predictions") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix S = random_matrix(rng, 40, 8);
        const Matrix Y = random_matrix(rng, 40, 1);
        Matrix S2(40, 9);
        S2 << S, S.col(static_cast<Eigen::Index>(rng() % 8));
        const Matrix a = predict(train(S, Y), S);
        const Matrix b = predict(train(S2, Y), S2);
        CHECK(max_abs(a - b) < 1e-9);
    }
}

TEST_CASE("min-norm solution for wide systems against a normal-equation oracle") {
    std::mt19937_64 rng(6);
    const Matrix S = random_matrix(rng, 6, 15);
    const Matrix Y = random_matrix(rng, 6, 2);
    // full row rank: X = S^T (S S^T)^-1 Y
    const Matrix oracle = S.transpose() * (S * S.transpose()).inverse() * Y;
    CHECK(max_abs(solve_min_norm(S, Y) - oracle) < 1e-9);
}

TEST_CASE("ridge shrinks toward zero") {
    std::mt19937_64 rng(7);
    const Matrix S = random_matrix(rng, 30, 5);
    const Matrix Y = random_matrix(rng, 30, 1);
    const Matrix plain = train(S, Y).w_out;
    const double lambda = 2.0;
    const Matrix ridge = train(S, Y, Argmax{}, {kDefaultRcond, lambda}).w_out;
    const Matrix oracle =
        ((S.transpose() * S + lambda * Matrix::Identity(5, 5)).inverse() * S.transpose() * Y).transpose();
    CHECK(max_abs(ridge - oracle) < 1e-10);
    CHECK(ridge.norm() < plain.norm());
    CHECK_THROWS_AS(train(S, Y, Argmax{}, {kDefaultRcond, -1.0}), ConfigError);
}

TEST_CASE("non-finite or mismatched data is rejected") {
    Matrix S = Matrix::Ones(3, 2);
    S(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(train(S, Matrix::Ones(3, 1)), DataError);
    CHECK_THROWS_AS(train(Matrix::Ones(3, 2), Matrix::Ones(4, 1)), DataError);
    Matrix Y = Matrix::Ones(3, 1);
    Y(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(train(Matrix::Ones(3, 2), Y), DataError);
}

TEST_CASE("decoders") {
    CHECK(decode(Argmax{}, std::vector<double>{0.1, 0.7, 0.2}) == 1.0);
    CHECK(decode(Argmax{}, std::vector<double>{0.5, 0.5}) == 0.0);
    const NearestSymbol ns{{-3, -1, 1, 3}};
    CHECK(decode(ns, std::vector<double>{0.2}) == 1.0);
    CHECK(decode(ns, std::vector<double>{0.0}) == -1.0);
    CHECK(decode(ns, std::vector<double>{-7.0}) == -3.0);
    CHECK(decode(ns, std::vector<double>{2.0}) == 1.0);
    CHECK(decode(Threshold{}, std::vector<double>{0.5}) == 1.0);
    CHECK(decode(Threshold{}, std::vector<double>{0.49}) == 0.0);
}

TEST_CASE("nmse hand cases") {
    const std::vector<double> y{1.0, 2.0};
    CHECK(nmse(y, y) == 0.0);
    CHECK(nmse(y, std::vector<double>{0.0, 0.0}) == 0.5);
    CHECK(nmse(y, std::vector<double>{1.0, 0.0}) == 0.4);
    std::vector<double> big(7, 3.0);
    CHECK(nmse(big, std::vector<double>(7, 0.0)) == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
    CHECK_THROWS_AS(nmse(std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 1.0}), DataError);
    CHECK(mse(y, std::vector<double>{1.0, 0.0}) == 2.0);
}

TEST_CASE("error rates") {
    std::vector<double> truth(100), decoded(100);
    for (int i = 0; i < 100; ++i) truth[i] = decoded[i] = i % 4;
    CHECK(symbol_error_rate(decoded, truth) == 0.0);
    CHECK(accuracy(decoded, truth) == 1.0);
    decoded[17] = 9;
    CHECK(symbol_error_rate(decoded, truth) == 0.01);
    CHECK(accuracy(decoded, truth) + symbol_error_rate(decoded, truth) == 1.0);
    std::vector<double> other(100, 7.0);
    CHECK(symbol_error_rate(other, truth) == 1.0);
}

TEST_CASE("readout json round trip") {
    std::mt19937_64 rng(8);
    for (const Decoder& d : {Decoder{Threshold{0.25}}, Decoder{Argmax{}}, Decoder{NearestSymbol{{-3, -1, 1, 3}}}}) {
        TrainedReadout r{random_matrix(rng, 3, 7), d};
        const auto back = readout_from_json(readout_to_json(r));
        CHECK(back.w_out == r.w_out);
        CHECK(back.decoder.index() == r.decoder.index());
        const std::vector<double> probe{0.1, -0.4, 2.0};
        CHECK(decode(back, probe) == decode(r, probe));
    }
    CHECK_THROWS(readout_from_json("{\"rows\": 1}"));
}
