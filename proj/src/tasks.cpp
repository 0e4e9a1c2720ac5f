#include "reca/tasks.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace reca {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace

LabeledSequence sine_square(std::size_t num_waves, std::size_t points_per_wave, std::uint64_t seed,
                            std::size_t train_points, WaveChoice choice) {
    if (points_per_wave < 2) throw ConfigError("points_per_wave must be at least 2");
    if (num_waves < 1) throw ConfigError("num_waves must be at least 1");

    std::vector<double> wave_sine(points_per_wave), wave_square(points_per_wave);
    for (std::size_t k = 0; k < points_per_wave; ++k) {
        double s = std::sin(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(points_per_wave));
        if (std::abs(s) < 1e-12) s = 0.0;
        wave_sine[k] = s;
        wave_square[k] = s >= 0.0 ? 1.0 : -1.0;
    }

    LabeledSequence seq;
    seq.seed = seed;
    seq.inputs.reserve(num_waves * points_per_wave);
    seq.targets.reserve(num_waves * points_per_wave);
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t w = 0; w < num_waves; ++w) {
        const bool square = choice == WaveChoice::Random ? coin(rng) : choice == WaveChoice::Square;
        const auto& wave = square ? wave_square : wave_sine;
        seq.inputs.insert(seq.inputs.end(), wave.begin(), wave.end());
        seq.targets.insert(seq.targets.end(), points_per_wave, square ? 1.0 : 0.0);
    }
    seq.split = train_points == std::numeric_limits<std::size_t>::max() ? (num_waves / 2) * points_per_wave
                                                                         : train_points;
    if (seq.split > seq.size()) throw ConfigError("train size exceeds the generated sequence");
    return seq;
}

double channel_nonlinearity(const ChannelModel& model, double q) noexcept {
    return q + model.quadratic * q * q + model.cubic * q * q * q;
}

std::vector<double> channel_linear(const ChannelModel& model, const std::vector<double>& symbols) {
    const auto n = static_cast<std::ptrdiff_t>(symbols.size());
    std::vector<double> q(symbols.size(), 0.0);
    for (std::ptrdiff_t t = 0; t < n; ++t) {
        double acc = 0.0;
        for (std::size_t k = 0; k < model.taps.size(); ++k) {
            const std::ptrdiff_t m = t + ChannelModel::kLead - static_cast<std::ptrdiff_t>(k);
            if (m >= 0 && m < n) acc += model.taps[k] * symbols[static_cast<std::size_t>(m)];
        }
        q[static_cast<std::size_t>(t)] = acc;
    }
    return q;
}

LabeledSequence channel_equalization(std::size_t n_train, std::size_t n_test, const ChannelParams& params,
                                     std::uint64_t seed) {
    if (n_train < 1 || n_test < 1) throw ConfigError("channel task sizes must be at least 1");
    if (std::isnan(params.snr_db)) throw ConfigError("snr_db must be a number");

    const std::size_t n = n_train + n_test;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, 3);
    std::vector<double> d(n);
    for (auto& s : d) s = kChannelSymbols[static_cast<std::size_t>(pick(rng))];

    const auto q = channel_linear(params.model, d);
    std::vector<double> u(n);
    double power = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        u[t] = channel_nonlinearity(params.model, q[t]);
        power += u[t] * u[t];
    }
    power /= static_cast<double>(n);

    if (std::isfinite(params.snr_db)) {
        const double sigma = std::sqrt(power / std::pow(10.0, params.snr_db / 10.0));
        std::normal_distribution<double> noise(0.0, sigma);
        for (auto& v : u) v += noise(rng);
    }

    LabeledSequence seq;
    seq.inputs = std::move(u);
    seq.targets = std::move(d);
    seq.split = n_train;
    seq.seed = seed;
    return seq;
}

std::vector<int> parse_santa_fe(std::istream& in) {
    std::vector<int> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        int v = 0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size()) {
            throw ParseError("expected an integer, got '" + t + "'", line_no);
        }
        if (v < 0 || v > 255) throw ParseError("value " + t + " outside [0, 255]", line_no);
        values.push_back(v);
    }
    return values;
}

LabeledSequence santa_fe_sequence(const std::vector<int>& values, std::size_t n_train, std::size_t n_test) {
    const std::size_t need = n_train + n_test + 1;
    if (values.size() < need) {
        throw DataError("Santa Fe series needs at least " + std::to_string(need) + " values (" +
                        std::to_string(n_train) + " train + " + std::to_string(n_test) +
                        " test + 1 look-ahead), got " + std::to_string(values.size()));
    }
    LabeledSequence seq;
    const std::size_t n = n_train + n_test;
    seq.inputs.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n));
    seq.targets.assign(values.begin() + 1, values.begin() + static_cast<std::ptrdiff_t>(n + 1));
    seq.split = n_train;
    return seq;
}

LabeledSequence load_santa_fe(const std::filesystem::path& path, std::size_t n_train, std::size_t n_test) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open Santa Fe file " + path.string());
    return santa_fe_sequence(parse_santa_fe(in), n_train, n_test);
}

std::vector<int> synthetic_santa_fe(std::size_t length, std::uint64_t seed) {
    constexpr double kTau = 17.0, kDt = 0.1, kBeta = 0.2, kGamma = 0.1, kPower = 10.0;
    constexpr std::size_t kSubsteps = 10; // one sample per time unit
    const auto delay = static_cast<std::size_t>(kTau / kDt);
    const std::size_t warmup = 500 + seed % 1000;

    std::vector<double> history(delay + 1, 1.2);
    std::size_t head = 0; // history[head] is x(t - tau)
    double x = 1.2;
    std::vector<double> samples;
    samples.reserve(length);
    for (std::size_t s = 0; samples.size() < length; ++s) {
        for (std::size_t k = 0; k < kSubsteps; ++k) {
            const double lagged = history[head];
            x += kDt * (kBeta * lagged / (1.0 + std::pow(lagged, kPower)) - kGamma * x);
            history[head] = x;
            head = (head + 1) % history.size();
        }
        if (s >= warmup) samples.push_back(x);
    }
    const auto [lo, hi] = std::ranges::minmax(samples);
    std::vector<int> out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out[i] = static_cast<int>(std::lround((samples[i] - lo) / (hi - lo) * 255.0));
    }
    return out;
}

std::array<EncoderSpec, 4> iris_encoders() {
    constexpr std::array<std::pair<double, double>, 4> ranges{{{4.3, 7.9}, {2.0, 4.4}, {1.0, 6.9}, {0.1, 2.5}}};
    std::array<EncoderSpec, 4> specs;
    for (std::size_t a = 0; a < 4; ++a) {
        const auto [lo, hi] = ranges[a];
        const auto cells = static_cast<std::size_t>(std::lround((hi - lo) / kIrisResolution)) + 1;
        // Bins centered on the 0.1 grid: floor((v - lo + 0.05) / 0.1) == round((v - lo) / 0.1).
        specs[a] = EncoderSpec::unary(cells, lo - kIrisResolution / 2, hi + kIrisResolution / 2);
    }
    return specs;
}

StateVector encode_iris(const std::array<double, 4>& sample) {
    static const auto specs = iris_encoders();
    std::array<StateVector, 4> parts;
    for (std::size_t a = 0; a < 4; ++a) parts[a] = encode(specs[a], sample[a]);
    return concat_attributes(parts);
}

IrisTable parse_iris(std::istream& in) {
    IrisTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::array<double, 4> sample{};
        for (std::size_t a = 0; a < 4; ++a) {
            if (!std::getline(ss, field, ',')) throw ParseError("expected 4 attributes and a label", line_no);
            const std::string t = trim(field);
            const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), sample[a]);
            if (ec != std::errc() || ptr != t.data() + t.size()) {
                throw ParseError("bad attribute value '" + t + "'", line_no);
            }
        }
        if (!std::getline(ss, field)) throw ParseError("missing species label", line_no);
        std::string label = trim(field);
        if (label.rfind("Iris-", 0) != 0) label = "Iris-" + label;
        const auto it = std::ranges::find(kIrisClasses, std::string_view(label));
        if (it == kIrisClasses.end()) throw ParseError("unknown species '" + trim(field) + "'", line_no);
        table.samples.push_back(sample);
        table.labels.push_back(static_cast<int>(it - kIrisClasses.begin()));
    }
    if (table.samples.size() != kIrisRows) {
        throw DataError("iris data must have " + std::to_string(kIrisRows) + " rows, got " +
                        std::to_string(table.samples.size()));
    }
    return table;
}

LabeledPatterns iris_patterns(const IrisTable& table, std::uint64_t seed) {
    const std::size_t n = table.samples.size();
    const std::size_t classes = kIrisClasses.size();
    std::vector<std::vector<std::size_t>> by_class(classes);
    for (std::size_t i = 0; i < n; ++i) by_class[static_cast<std::size_t>(table.labels[i])].push_back(i);

    // Largest-remainder allocation of the test rows, lower class index first on ties.
    std::vector<std::size_t> test_count(classes);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < classes; ++c) {
        const double exact = static_cast<double>(by_class[c].size() * kIrisTest) / static_cast<double>(n);
        test_count[c] = static_cast<std::size_t>(std::floor(exact));
        assigned += test_count[c];
        remainders.emplace_back(exact - std::floor(exact), c);
    }
    std::ranges::stable_sort(remainders, [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < kIrisTest; ++k, ++assigned) ++test_count[remainders[k].second];

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> train, test;
    for (std::size_t c = 0; c < classes; ++c) {
        auto idx = by_class[c];
        std::shuffle(idx.begin(), idx.end(), rng);
        test.insert(test.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(test_count[c]));
        train.insert(train.end(), idx.begin() + static_cast<std::ptrdiff_t>(test_count[c]), idx.end());
    }
    std::shuffle(train.begin(), train.end(), rng);
    std::shuffle(test.begin(), test.end(), rng);

    LabeledPatterns out;
    out.seed = seed;
    out.split = train.size();
    out.class_names.assign(kIrisClasses.begin(), kIrisClasses.end());
    for (const auto* part : {&train, &test}) {
        for (std::size_t i : *part) {
            out.inputs.push_back(encode_iris(table.samples[i]));
            out.labels.push_back(static_cast<double>(table.labels[i]));
        }
    }
    return out;
}

LabeledPatterns load_iris(const std::filesystem::path& path, std::uint64_t seed) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open iris file " + path.string());
    return iris_patterns(parse_iris(in), seed);
}

LabeledPatterns load_iris_bundled(std::uint64_t seed) {
    static const IrisTable table = [] {
        std::istringstream in{std::string(bundled_iris_csv())};
        return parse_iris(in);
    }();
    return iris_patterns(table, seed);
}

} // namespace reca
