#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "reca/errors.hpp"
#include "reca/experiment.hpp"

using namespace reca;
using nlohmann::json;

namespace {

json small_sine() {
    return json::parse(R"({
        "task": {"name": "sine_square", "seed": 3, "num_waves": 20, "points_per_wave": 20},
        "reservoir": {"proj_rule": 90, "mem_rule": 16, "i_p": 8, "i_m": 12, "R": 16,
                      "encoder": {"scheme": "unary", "N": 32, "range": [-1, 1]}},
        "readout": {"scheme": "binned", "bins": 2},
        "training": {"train": 200, "test": 200}
    })");
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("bins must divide i_p") {
    auto j = small_sine();
    j["reservoir"]["i_p"] = 20;
    j["readout"]["bins"] = 3;
    CHECK_THROWS_WITH_AS(parse_experiment_config(j), "bins must divide i_p", ConfigError);
}

TEST_CASE("unknown keys are rejected") {
    for (const char* section : {"task", "reservoir", "readout", "training"}) {
        auto j = small_sine();
        j[section]["typo"] = 1;
        CHECK_THROWS_AS(parse_experiment_config(j), ConfigError);
    }
    auto j = small_sine();
    j["extra"] = json::object();
    CHECK_THROWS_AS(parse_experiment_config(j), ConfigError);
    j = small_sine();
    j["reservoir"]["encoder"]["bits"] = 4;
    CHECK_THROWS_AS(parse_experiment_config(j), ConfigError);
}

TEST_CASE("invalid values are rejected") {
    auto j = small_sine();
    j["reservoir"]["proj_rule"] = 256;
    CHECK_THROWS_AS(parse_experiment_config(j), ConfigError);
    j = small_sine();
    j["reservoir"]["edges"] = "twisted";
    CHECK_THROWS_AS(parse_experiment_config(j), ConfigError);
    j = small_sine();
    j["reservoir"]["i_p"] = "many";
    CHECK_THROWS_AS(parse_experiment_config(j), ConfigError);
    j = small_sine();
    j["training"]["train"] = 390;
    CHECK_THROWS_AS(parse_experiment_config(j), ConfigError);
    j = small_sine();
    j["task"]["name"] = "weather";
    CHECK_THROWS_AS(parse_experiment_config(j), ConfigError);
}

TEST_CASE("config json round trip") {
    const auto c = parse_experiment_config(small_sine());
    CHECK(c.reservoir.proj_rule == 90);
    CHECK(c.reservoir.buffer == 16);
    CHECK(c.reservoir.encoder.size == 32);
    CHECK(std::get<BinnedColumnSums>(c.readout).bins == 2);
    const auto again = parse_experiment_config(to_json(c));
    CHECK(to_json(again) == to_json(c));

    for (auto kind : {TaskKind::SineSquare, TaskKind::Channel, TaskKind::SantaFe, TaskKind::Iris}) {
        const auto d = default_config(kind);
        CHECK_NOTHROW(validate(d));
        CHECK(to_json(parse_experiment_config(to_json(d))) == to_json(d));
    }
    auto ch = default_config(TaskKind::Channel);
    ch.task.snr_db = std::numeric_limits<double>::infinity();
    CHECK(parse_experiment_config(to_json(ch)).task.snr_db == std::numeric_limits<double>::infinity());
}

TEST_CASE("task defaults") {
    const auto sine = default_config(TaskKind::SineSquare);
    CHECK(sine.training.train == 2000);
    CHECK(sine.training.test == 2000);
    CHECK(sine.reservoir.encoder.size == 64);
    CHECK(sine.reservoir.buffer == 64);
    const auto iris = default_config(TaskKind::Iris);
    CHECK(iris.reservoir.mode == ReservoirMode::ELM);
    CHECK(iris.reservoir.encoder.size == 147);
    const auto sf = default_config(TaskKind::SantaFe);
    CHECK(sf.reservoir.encoder.size == 256);
    CHECK(sf.training.train == 1000);
    CHECK(sf.training.test == 200);
}

TEST_CASE("run is deterministic and writes every artifact") {
    const auto c = parse_experiment_config(small_sine());
    const auto a = run_experiment(c);
    const auto b = run_experiment(c);
    CHECK(a.metric == "accuracy");
    CHECK(a.test_value == b.test_value);
    CHECK(a.readout.w_out == b.readout.w_out);
    CHECK(a.features == feature_length(BinnedColumnSums{2}, 64));
    CHECK(a.test_truth.size() == 200);
    CHECK(a.test_value >= 0.0);
    CHECK(a.test_value <= 1.0);

    const auto dir = std::filesystem::temp_directory_path() / "reca_experiment_test";
    std::filesystem::remove_all(dir);
    write_experiment_outputs(dir / "one", c, a);
    write_experiment_outputs(dir / "two", c, b);
    for (const char* f : {"metrics.txt", "metrics.json", "predictions.csv", "w_out.json", "resolved_config.json"}) {
        REQUIRE(std::filesystem::exists(dir / "one" / f));
        CHECK(slurp(dir / "one" / f) == slurp(dir / "two" / f));
    }
    CHECK(slurp(dir / "one" / "metrics.txt").find("metric=accuracy") != std::string::npos);

    // the echoed config alone reproduces the run
    const auto echoed = parse_experiment_config(json::parse(slurp(dir / "one" / "resolved_config.json")));
    CHECK(run_experiment(echoed).test_value == a.test_value);

    const auto w = readout_from_json(slurp(dir / "one" / "w_out.json"));
    CHECK(w.w_out == a.readout.w_out);
    std::filesystem::remove_all(dir);
}

TEST_CASE("each task produces its metric") {
    auto ch = default_config(TaskKind::Channel);
    ch.training.train = 200;
    ch.training.test = 50;
    ch.reservoir.i_p = 4;
    ch.reservoir.i_m = 4;
    ch.reservoir.proj_rule = 90;
    ch.reservoir.mem_rule = 16;
    const auto o = run_experiment(ch);
    CHECK(o.metric == "ser");
    CHECK(o.test_raw.cols() == 4);
    for (double p : o.test_predicted) CHECK((p == -3 || p == -1 || p == 1 || p == 3));

    auto sf = default_config(TaskKind::SantaFe);
    sf.training.train = 100;
    sf.training.test = 20;
    sf.reservoir.i_p = 4;
    sf.reservoir.i_m = 4;
    sf.reservoir.proj_rule = 90;
    sf.reservoir.mem_rule = 16;
    CHECK(run_experiment(sf).metric == "nmse");

    auto iris = default_config(TaskKind::Iris);
    iris.reservoir.proj_rule = 158;
    iris.reservoir.i_p = 8;
    const auto io = run_experiment(iris);
    CHECK(io.metric == "accuracy");
    CHECK(io.test_truth.size() == 38);
}

TEST_CASE("atomic writes replace the target") {
    const auto dir = std::filesystem::temp_directory_path() / "reca_atomic_test";
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "x.txt", "first");
    write_file_atomic(dir / "x.txt", "second");
    CHECK(slurp(dir / "x.txt") == "second");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++entries;
    CHECK(entries == 1);
    std::filesystem::remove_all(dir);
}
