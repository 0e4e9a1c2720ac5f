#include "reca/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace reca {

using nlohmann::json;

namespace {

using detail::fmt_double;

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view section) {
    if (!obj.is_object()) throw ConfigError(std::string(section) + " must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError("unknown key '" + key + "' in " + std::string(section));
        }
    }
}

template <class T>
T get_or(const json& obj, const char* key, T fallback, std::string_view section) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string(section) + "." + key + " has the wrong type");
    }
}

std::size_t get_count(const json& obj, const char* key, std::size_t fallback, std::string_view section) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError(std::string(section) + "." + key + " must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

const char* scheme_name(EncoderScheme s) {
    switch (s) {
    case EncoderScheme::Unary: return "unary";
    case EncoderScheme::Binary: return "binary";
    case EncoderScheme::Gray: return "gray";
    }
    return "unary";
}

// How targets are shaped for training and how raw outputs turn back into labels.
struct TargetCoding {
    enum class Kind { Binary, OneHot, Regression } kind;
    std::vector<double> classes; // OneHot: class values in output order

    std::size_t outputs() const { return kind == Kind::OneHot ? classes.size() : 1; }

    void fill(Eigen::Ref<Matrix> Y, std::span<const double> targets) const {
        Y.setZero();
        for (std::size_t k = 0; k < targets.size(); ++k) {
            const auto r = static_cast<Eigen::Index>(k);
            if (kind != Kind::OneHot) {
                Y(r, 0) = targets[k];
                continue;
            }
            const auto it = std::ranges::find(classes, targets[k]);
            if (it == classes.end()) throw DataError("target value outside the class set");
            Y(r, it - classes.begin()) = 1.0;
        }
    }

    Decoder decoder() const {
        if (kind == Kind::Binary) return Threshold{0.5};
        return Argmax{};
    }

    double label(const Decoder& d, std::span<const double> raw) const {
        if (kind == Kind::Regression) return raw[0];
        const double v = decode(d, raw);
        return kind == Kind::OneHot ? classes[static_cast<std::size_t>(v)] : v;
    }
};

TargetCoding coding_for(TaskKind kind) {
    switch (kind) {
    case TaskKind::SineSquare: return {TargetCoding::Kind::Binary, {}};
    case TaskKind::Channel: return {TargetCoding::Kind::OneHot, {kChannelSymbols.begin(), kChannelSymbols.end()}};
    case TaskKind::SantaFe: return {TargetCoding::Kind::Regression, {}};
    case TaskKind::Iris: return {TargetCoding::Kind::OneHot, {0.0, 1.0, 2.0}};
    }
    throw ConfigError("unknown task");
}

std::string metric_for(TaskKind kind) {
    switch (kind) {
    case TaskKind::SineSquare: return "accuracy";
    case TaskKind::Channel: return "ser";
    case TaskKind::SantaFe: return "nmse";
    case TaskKind::Iris: return "accuracy";
    }
    return "accuracy";
}

double score(std::string_view metric, std::span<const double> truth, std::span<const double> predicted) {
    if (metric == "accuracy") return accuracy(predicted, truth);
    if (metric == "ser") return symbol_error_rate(predicted, truth);
    return nmse(truth, predicted);
}

std::size_t iris_width() {
    std::size_t n = 0;
    for (const auto& s : iris_encoders()) n += s.width();
    return n;
}

} // namespace

std::string_view task_name(TaskKind kind) {
    switch (kind) {
    case TaskKind::SineSquare: return "sine_square";
    case TaskKind::Channel: return "channel";
    case TaskKind::SantaFe: return "santa_fe";
    case TaskKind::Iris: return "iris";
    }
    return "?";
}

TaskKind parse_task_name(std::string_view name) {
    if (name == "sine_square") return TaskKind::SineSquare;
    if (name == "channel") return TaskKind::Channel;
    if (name == "santa_fe") return TaskKind::SantaFe;
    if (name == "iris") return TaskKind::Iris;
    throw ConfigError("unknown task '" + std::string(name) + "'");
}

bool lower_is_better(std::string_view metric) { return metric != "accuracy"; }

ExperimentConfig default_config(TaskKind kind) {
    ExperimentConfig c;
    c.task.kind = kind;
    switch (kind) {
    case TaskKind::SineSquare:
        c.training = {2000, 2000};
        c.reservoir.encoder = {EncoderScheme::Unary, 64, -1.0, 1.0, false, true};
        break;
    case TaskKind::Channel:
        c.training = {1000, 100};
        c.reservoir.encoder = {EncoderScheme::Unary, 64, 0.0, 1.0, true, true};
        break;
    case TaskKind::SantaFe:
        c.training = {kSantaFeTrain, kSantaFeTest};
        c.reservoir.encoder = {EncoderScheme::Unary, 256, 0.0, 255.0, false, true};
        break;
    case TaskKind::Iris:
        c.training = {kIrisTrain, kIrisTest};
        c.reservoir.encoder = {EncoderScheme::Unary, iris_width(), 0.0, 1.0, false, true};
        c.reservoir.mode = ReservoirMode::ELM;
        c.reservoir.i_m = 0;
        break;
    }
    return c;
}

void validate(const ExperimentConfig& c) {
    const auto& r = c.reservoir;
    if (r.proj_rule < 0 || r.proj_rule > 255 || r.mem_rule < 0 || r.mem_rule > 255) {
        throw ConfigError("rule numbers must be in [0, 255]");
    }
    if (r.i_p < 1) throw ConfigError("i_p must be at least 1");
    validate_readout(c.readout, r.i_p);
    if (!r.encoder.fit || c.task.kind == TaskKind::Iris) {
        EncoderSpec{r.encoder.scheme, r.encoder.size, r.encoder.lo, r.encoder.hi, r.encoder.clamp}.validate();
    } else {
        EncoderSpec{r.encoder.scheme, r.encoder.size, 0.0, 1.0, r.encoder.clamp}.validate();
    }
    if (r.encoder.size + 2 * r.buffer < kMinWidth) throw ConfigError("reservoir width N + 2R must be at least 3");
    if (c.training.train < 1 || c.training.test < 1) throw ConfigError("train and test sizes must be at least 1");
    if (c.training.ridge < 0.0) throw ConfigError("ridge must be non-negative");
    if (!(c.training.rcond > 0.0)) throw ConfigError("rcond must be positive");
    switch (c.task.kind) {
    case TaskKind::SineSquare:
        if (c.task.points_per_wave < 2) throw ConfigError("points_per_wave must be at least 2");
        if (c.training.train + c.training.test > c.task.num_waves * c.task.points_per_wave) {
            throw ConfigError("train + test exceeds num_waves * points_per_wave");
        }
        break;
    case TaskKind::Channel:
        if (std::isnan(c.task.snr_db)) throw ConfigError("snr_db must be a number");
        break;
    case TaskKind::SantaFe:
        break;
    case TaskKind::Iris:
        if (c.training.train != kIrisTrain || c.training.test != kIrisTest) {
            throw ConfigError("iris uses a fixed 112 / 38 split");
        }
        if (r.encoder.scheme != EncoderScheme::Unary || r.encoder.size != iris_width()) {
            throw ConfigError("iris uses the fixed 147-cell attribute layout");
        }
        break;
    }
}

ExperimentConfig parse_experiment_config(const json& j) {
    check_keys(j, {"task", "reservoir", "readout", "training", "output"}, "config");
    if (!j.contains("task")) throw ConfigError("config needs a task section");
    const json& t = j.at("task");
    const auto kind = parse_task_name(get_or<std::string>(t, "name", "", "task"));
    ExperimentConfig c = default_config(kind);

    switch (kind) {
    case TaskKind::SineSquare: check_keys(t, {"name", "seed", "num_waves", "points_per_wave"}, "task"); break;
    case TaskKind::Channel: check_keys(t, {"name", "seed", "snr_db"}, "task"); break;
    case TaskKind::SantaFe:
    case TaskKind::Iris: check_keys(t, {"name", "seed", "path"}, "task"); break;
    }
    c.task.seed = get_or<std::uint64_t>(t, "seed", c.task.seed, "task");
    c.task.num_waves = get_count(t, "num_waves", c.task.num_waves, "task");
    c.task.points_per_wave = get_count(t, "points_per_wave", c.task.points_per_wave, "task");
    c.task.path = get_or<std::string>(t, "path", "", "task");
    if (t.contains("snr_db")) {
        const auto& v = t.at("snr_db");
        if (v.is_string() && v.get<std::string>() == "inf") {
            c.task.snr_db = std::numeric_limits<double>::infinity();
        } else if (v.is_number()) {
            c.task.snr_db = v.get<double>();
        } else {
            throw ConfigError("task.snr_db must be a number or \"inf\"");
        }
    }

    if (j.contains("reservoir")) {
        const json& r = j.at("reservoir");
        check_keys(r, {"proj_rule", "mem_rule", "i_p", "i_m", "R", "edges", "edge_state", "mode", "injection", "encoder"},
                   "reservoir");
        auto& rs = c.reservoir;
        rs.proj_rule = get_or<int>(r, "proj_rule", rs.proj_rule, "reservoir");
        rs.mem_rule = get_or<int>(r, "mem_rule", rs.mem_rule, "reservoir");
        rs.i_p = get_count(r, "i_p", rs.i_p, "reservoir");
        rs.i_m = get_count(r, "i_m", rs.i_m, "reservoir");
        rs.buffer = get_count(r, "R", rs.buffer, "reservoir");
        const auto edges = get_or<std::string>(r, "edges", "fixed", "reservoir");
        const int edge_state = get_or<int>(r, "edge_state", 0, "reservoir");
        if (edge_state != 0 && edge_state != 1) throw ConfigError("reservoir.edge_state must be 0 or 1");
        if (edges == "fixed") {
            rs.edges = EdgePolicy::fixed(edge_state == 1);
        } else if (edges == "cyclic") {
            if (r.contains("edge_state")) throw ConfigError("edge_state only applies to fixed edges");
            rs.edges = EdgePolicy::cyclic();
        } else {
            throw ConfigError("reservoir.edges must be \"fixed\" or \"cyclic\"");
        }
        const auto mode = get_or<std::string>(r, "mode", rs.mode == ReservoirMode::ELM ? "elm" : "rc", "reservoir");
        if (mode == "rc") {
            rs.mode = ReservoirMode::RC;
        } else if (mode == "elm") {
            rs.mode = ReservoirMode::ELM;
        } else {
            throw ConfigError("reservoir.mode must be \"rc\" or \"elm\"");
        }
        const auto inj = get_or<std::string>(r, "injection", "xor", "reservoir");
        if (inj == "xor") {
            rs.injection = Injection::Xor;
        } else if (inj == "or") {
            rs.injection = Injection::Or;
        } else if (inj == "and") {
            rs.injection = Injection::And;
        } else {
            throw ConfigError("reservoir.injection must be xor, or, and");
        }
        if (r.contains("encoder")) {
            if (kind == TaskKind::Iris) throw ConfigError("iris uses the fixed 147-cell attribute layout");
            const json& e = r.at("encoder");
            check_keys(e, {"scheme", "N", "bits", "range", "clamp"}, "reservoir.encoder");
            auto& es = rs.encoder;
            const auto scheme = get_or<std::string>(e, "scheme", "unary", "reservoir.encoder");
            if (scheme == "unary") {
                es.scheme = EncoderScheme::Unary;
                if (e.contains("bits")) throw ConfigError("unary encoders take N, not bits");
                es.size = get_count(e, "N", es.size, "reservoir.encoder");
            } else if (scheme == "binary" || scheme == "gray") {
                es.scheme = scheme == "binary" ? EncoderScheme::Binary : EncoderScheme::Gray;
                if (e.contains("N")) throw ConfigError("binary/gray encoders take bits, not N");
                if (!e.contains("bits")) throw ConfigError("binary/gray encoders need bits");
                es.size = get_count(e, "bits", 0, "reservoir.encoder");
            } else {
                throw ConfigError("reservoir.encoder.scheme must be unary, binary or gray");
            }
            if (e.contains("range")) {
                const auto& range = e.at("range");
                if (range.is_string() && range.get<std::string>() == "fit") {
                    es.fit = true;
                } else if (range.is_array() && range.size() == 2 && range[0].is_number() && range[1].is_number()) {
                    es.fit = false;
                    es.lo = range[0].get<double>();
                    es.hi = range[1].get<double>();
                } else {
                    throw ConfigError("reservoir.encoder.range must be [lo, hi] or \"fit\"");
                }
            }
            es.clamp = get_or<bool>(e, "clamp", es.clamp, "reservoir.encoder");
        }
    }

    if (j.contains("readout")) {
        const json& ro = j.at("readout");
        const auto scheme = get_or<std::string>(ro, "scheme", "binned", "readout");
        if (scheme == "binned") {
            check_keys(ro, {"scheme", "bins"}, "readout");
            c.readout = BinnedColumnSums{get_count(ro, "bins", 2, "readout")};
        } else if (scheme == "ith") {
            check_keys(ro, {"scheme", "i"}, "readout");
            c.readout = IthIteration{get_count(ro, "i", c.reservoir.i_p, "readout")};
        } else if (scheme == "column_code") {
            check_keys(ro, {"scheme", "code", "msb"}, "readout");
            ColumnCode cc;
            const auto code = get_or<std::string>(ro, "code", "binary", "readout");
            if (code != "binary" && code != "gray") throw ConfigError("readout.code must be binary or gray");
            cc.code = code == "gray" ? ColumnCodeKind::Gray : ColumnCodeKind::Binary;
            const auto msb = get_or<std::string>(ro, "msb", "first_row", "readout");
            if (msb != "first_row" && msb != "last_row") throw ConfigError("readout.msb must be first_row or last_row");
            cc.msb = msb == "last_row" ? MsbRow::LastRow : MsbRow::FirstRow;
            c.readout = cc;
        } else {
            throw ConfigError("readout.scheme must be binned, ith or column_code");
        }
    }

    if (j.contains("training")) {
        const json& tr = j.at("training");
        check_keys(tr, {"train", "test", "ridge", "rcond"}, "training");
        c.training.train = get_count(tr, "train", c.training.train, "training");
        c.training.test = get_count(tr, "test", c.training.test, "training");
        c.training.ridge = get_or<double>(tr, "ridge", c.training.ridge, "training");
        c.training.rcond = get_or<double>(tr, "rcond", c.training.rcond, "training");
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        check_keys(o, {"dir"}, "output");
        c.output_dir = get_or<std::string>(o, "dir", "", "output");
    }

    validate(c);
    return c;
}

json to_json(const ExperimentConfig& c) {
    json task{{"name", task_name(c.task.kind)}, {"seed", c.task.seed}};
    switch (c.task.kind) {
    case TaskKind::SineSquare:
        task["num_waves"] = c.task.num_waves;
        task["points_per_wave"] = c.task.points_per_wave;
        break;
    case TaskKind::Channel:
        if (std::isinf(c.task.snr_db)) {
            task["snr_db"] = "inf";
        } else {
            task["snr_db"] = c.task.snr_db;
        }
        break;
    case TaskKind::SantaFe:
    case TaskKind::Iris:
        if (!c.task.path.empty()) task["path"] = c.task.path;
        break;
    }

    const auto& r = c.reservoir;
    json res{{"proj_rule", r.proj_rule},
             {"mem_rule", r.mem_rule},
             {"i_p", r.i_p},
             {"i_m", r.i_m},
             {"R", r.buffer},
             {"edges", r.edges.is_fixed() ? "fixed" : "cyclic"},
             {"mode", r.mode == ReservoirMode::ELM ? "elm" : "rc"},
             {"injection", r.injection == Injection::Xor ? "xor" : r.injection == Injection::Or ? "or" : "and"}};
    if (r.edges.is_fixed()) res["edge_state"] = r.edges.edge_state ? 1 : 0;
    if (c.task.kind != TaskKind::Iris) {
        json enc{{"scheme", scheme_name(r.encoder.scheme)}, {"clamp", r.encoder.clamp}};
        enc[r.encoder.scheme == EncoderScheme::Unary ? "N" : "bits"] = r.encoder.size;
        if (r.encoder.fit) {
            enc["range"] = "fit";
        } else {
            enc["range"] = {r.encoder.lo, r.encoder.hi};
        }
        res["encoder"] = enc;
    }

    json ro = std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, IthIteration>) {
                return {{"scheme", "ith"}, {"i", s.i}};
            } else if constexpr (std::is_same_v<T, BinnedColumnSums>) {
                return {{"scheme", "binned"}, {"bins", s.bins}};
            } else {
                return {{"scheme", "column_code"},
                        {"code", s.code == ColumnCodeKind::Gray ? "gray" : "binary"},
                        {"msb", s.msb == MsbRow::LastRow ? "last_row" : "first_row"}};
            }
        },
        c.readout);

    json out{{"task", task},
             {"reservoir", res},
             {"readout", ro},
             {"training",
              {{"train", c.training.train},
               {"test", c.training.test},
               {"ridge", c.training.ridge},
               {"rcond", c.training.rcond}}}};
    if (!c.output_dir.empty()) out["output"] = {{"dir", c.output_dir}};
    return out;
}

TaskData make_task_data(const ExperimentConfig& c, std::uint64_t seed) {
    const auto& tr = c.training;
    switch (c.task.kind) {
    case TaskKind::SineSquare: {
        auto seq = sine_square(c.task.num_waves, c.task.points_per_wave, seed, tr.train);
        seq.inputs.resize(tr.train + tr.test);
        seq.targets.resize(tr.train + tr.test);
        return seq;
    }
    case TaskKind::Channel:
        return channel_equalization(tr.train, tr.test, ChannelParams{c.task.snr_db, {}}, seed);
    case TaskKind::SantaFe: {
        if (!c.task.path.empty()) {
            auto seq = load_santa_fe(c.task.path, tr.train, tr.test);
            seq.seed = seed;
            return seq;
        }
        auto seq = santa_fe_sequence(synthetic_santa_fe(tr.train + tr.test + 1, seed), tr.train, tr.test);
        seq.seed = seed;
        return seq;
    }
    case TaskKind::Iris:
        return c.task.path.empty() ? load_iris_bundled(seed) : load_iris(c.task.path, seed);
    }
    throw ConfigError("unknown task");
}

ReservoirConfig reservoir_config(const ExperimentConfig& c, const EncoderSpec& encoder) {
    const auto& r = c.reservoir;
    ReservoirConfig rc;
    rc.proj_rule = Rule(r.proj_rule);
    rc.mem_rule = Rule(r.mem_rule);
    rc.i_p = r.i_p;
    rc.i_m = r.i_m;
    rc.encoder = encoder;
    rc.buffer = r.buffer;
    rc.edges = r.edges;
    rc.mode = r.mode;
    rc.injection = r.injection;
    return rc;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config, const TaskData& data) {
    validate(config);
    const auto& es = config.reservoir.encoder;
    EncoderSpec encoder{es.scheme, es.size, es.lo, es.hi, es.clamp};

    std::vector<double> targets;
    std::size_t split = 0;
    const LabeledSequence* seq = std::get_if<LabeledSequence>(&data);
    const LabeledPatterns* pat = std::get_if<LabeledPatterns>(&data);
    if (seq) {
        targets = seq->targets;
        split = seq->split;
        if (es.fit) {
            const auto train = std::span(seq->inputs).first(split);
            if (train.empty()) throw DataError("cannot fit the encoder range without training inputs");
            const auto [lo, hi] = std::ranges::minmax(train);
            encoder.lo = lo;
            encoder.hi = hi > lo ? hi : lo + 1.0;
        }
    } else {
        targets = pat->labels;
        split = pat->split;
        if (!pat->inputs.empty()) encoder.size = pat->inputs.front().width();
    }
    if (split < 1 || split >= targets.size()) throw DataError("dataset needs both training and test examples");

    const ReservoirConfig rc = reservoir_config(config, encoder);
    Reservoir reservoir(rc);
    const std::size_t F = feature_length(config.readout, rc.width());
    const std::size_t K = targets.size();

    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(K, F);
    for (std::size_t k = 0; k < K; ++k) {
        const StepRecord record = seq ? reservoir.feed(seq->inputs[k])
                                      : reservoir.feed(pad(pat->inputs[k], config.reservoir.buffer));
        features_into(config.readout, record.projection,
                      std::span<double>(rows.row(static_cast<Eigen::Index>(k)).data(), F));
    }
    const Matrix S = rows;

    const TargetCoding coding = coding_for(config.task.kind);
    Matrix Y(K, coding.outputs());
    coding.fill(Y, targets);

    const auto Kt = static_cast<Eigen::Index>(split);
    const auto Ke = static_cast<Eigen::Index>(K - split);

    ExperimentOutcome out;
    out.metric = metric_for(config.task.kind);
    out.encoder = encoder;
    out.features = F;
    out.readout = train(S.topRows(Kt), Y.topRows(Kt), coding.decoder(),
                        TrainOptions{config.training.rcond, config.training.ridge});

    const Matrix raw = predict(out.readout, S);
    std::vector<double> predicted(K);
    for (std::size_t k = 0; k < K; ++k) {
        const Vector r = raw.row(static_cast<Eigen::Index>(k)).transpose();
        predicted[k] = coding.label(out.readout.decoder, std::span<const double>(r.data(), r.size()));
    }
    const auto truth = std::span<const double>(targets);
    const auto pred = std::span<const double>(predicted);
    out.train_value = score(out.metric, truth.first(split), pred.first(split));
    out.test_value = score(out.metric, truth.subspan(split), pred.subspan(split));
    out.test_mse = mse(truth.subspan(split), pred.subspan(split));
    out.test_truth.assign(truth.begin() + static_cast<std::ptrdiff_t>(split), truth.end());
    out.test_predicted.assign(pred.begin() + static_cast<std::ptrdiff_t>(split), pred.end());
    out.test_raw = raw.bottomRows(Ke);
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw Error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentConfig& config,
                              const ExperimentOutcome& o) {
    std::filesystem::create_directories(dir);

    json metrics{{"task", task_name(config.task.kind)},
                 {"metric", o.metric},
                 {"test", o.test_value},
                 {"train", o.train_value},
                 {"test_mse", o.test_mse},
                 {"features", o.features},
                 {"train_size", config.training.train},
                 {"test_size", o.test_truth.size()},
                 {"encoder_lo", o.encoder.lo},
                 {"encoder_hi", o.encoder.hi},
                 {"encoder_cells", o.encoder.width()}};
    std::ostringstream kv;
    kv << "task=" << task_name(config.task.kind) << '\n'
       << "metric=" << o.metric << '\n'
       << "test=" << fmt_double(o.test_value) << '\n'
       << "train=" << fmt_double(o.train_value) << '\n'
       << "test_mse=" << fmt_double(o.test_mse) << '\n'
       << "features=" << o.features << '\n'
       << "train_size=" << config.training.train << '\n'
       << "test_size=" << o.test_truth.size() << '\n'
       << "encoder_lo=" << fmt_double(o.encoder.lo) << '\n'
       << "encoder_hi=" << fmt_double(o.encoder.hi) << '\n'
       << "encoder_cells=" << o.encoder.width() << '\n';

    std::ostringstream pred;
    pred << "index,truth,predicted";
    for (Eigen::Index m = 0; m < o.test_raw.cols(); ++m) pred << ",raw_" << m;
    pred << '\n';
    for (std::size_t k = 0; k < o.test_truth.size(); ++k) {
        pred << k << ',' << fmt_double(o.test_truth[k]) << ',' << fmt_double(o.test_predicted[k]);
        for (Eigen::Index m = 0; m < o.test_raw.cols(); ++m) {
            pred << ',' << fmt_double(o.test_raw(static_cast<Eigen::Index>(k), m));
        }
        pred << '\n';
    }

    write_file_atomic(dir / "resolved_config.json", to_json(config).dump(2) + "\n");
    write_file_atomic(dir / "metrics.txt", kv.str());
    write_file_atomic(dir / "metrics.json", metrics.dump(2) + "\n");
    write_file_atomic(dir / "predictions.csv", pred.str());
    write_file_atomic(dir / "w_out.json", readout_to_json(o.readout) + "\n");
}

} // namespace reca
