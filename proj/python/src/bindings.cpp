// Python bindings. Configs and plans cross the boundary as JSON text so the
// Python side uses plain dicts and the C++ validator stays the single source
// of truth.

#include <string>
#include <vector>

#include <json.hpp>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "reca/encoding.hpp"
#include "reca/errors.hpp"
#include "reca/experiment.hpp"
#include "reca/learner.hpp"
#include "reca/render.hpp"
#include "reca/rule.hpp"
#include "reca/sweep.hpp"
#include "reca/tasks.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

reca::EdgePolicy edges_from(const std::string& edges, bool edge_state) {
    if (edges == "cyclic") return reca::EdgePolicy::cyclic();
    if (edges == "fixed") return reca::EdgePolicy::fixed(edge_state);
    throw reca::ConfigError("edges must be 'fixed' or 'cyclic'");
}

std::vector<std::string> trace_rows(const reca::Trace& t) {
    std::vector<std::string> rows;
    rows.reserve(t.rows());
    for (std::size_t i = 0; i < t.rows(); ++i) rows.push_back(t.row(i).to_string());
    return rows;
}

std::string run_json(const std::string& config_text) {
    const auto config = reca::parse_experiment_config(json::parse(config_text));
    const auto outcome = reca::run_experiment(config);
    json out{{"metric", outcome.metric},
             {"test", outcome.test_value},
             {"train", outcome.train_value},
             {"test_mse", outcome.test_mse},
             {"features", outcome.features},
             {"truth", outcome.test_truth},
             {"predicted", outcome.test_predicted}};
    return out.dump();
}

std::string sweep_json(const std::string& plan_text, std::size_t workers) {
    auto plan = reca::parse_sweep_plan(json::parse(plan_text));
    plan.workers = workers;
    reca::validate(plan);
    const auto result = reca::run_sweep(plan);
    json records = json::array();
    for (const auto& r : result.records) {
        records.push_back({{"proj_rule", r.proj_rule}, {"mem_rule", r.mem_rule}, {"i_p", r.i_p},
                           {"i_m", r.i_m}, {"trial", r.trial}, {"seed", r.seed}, {"metric", r.metric},
                           {"value", r.ok() ? json(r.value) : json(nullptr)}, {"error", r.error}});
    }
    json summary = json::array();
    for (const auto& row : reca::aggregate(result, plan.group_by)) {
        json key = json::object();
        for (const auto& [axis, value] : row.key) key[std::string(reca::axis_name(axis))] = value;
        summary.push_back({{"key", key}, {"metric", row.metric}, {"mean", row.mean}, {"std", row.std},
                           {"min", row.min}, {"max", row.max}, {"count", row.count}, {"failures", row.failures}});
    }
    return json{{"records", records}, {"summary", summary}}.dump();
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cellular-automaton reservoir computing core";

    // translators run newest first, so the base class is registered first
    const auto& base = py::register_exception<reca::Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<reca::ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<reca::DataError>(m, "DataError", base.ptr());
    py::register_exception<reca::RangeError>(m, "RangeError", base.ptr());

    m.def("step", [](int rule, const std::string& state, const std::string& edges, bool edge_state) {
        return reca::step(reca::Rule(rule), reca::StateVector::from_string(state), edges_from(edges, edge_state))
            .to_string();
    }, py::arg("rule"), py::arg("state"), py::arg("edges") = "fixed", py::arg("edge_state") = false,
          "One synchronous update of a 0/1 string.");

    m.def("evolve", [](int rule, const std::string& state, std::size_t iterations, const std::string& edges,
                       bool edge_state) {
        return trace_rows(reca::evolve(reca::Rule(rule), reca::StateVector::from_string(state), iterations,
                                       edges_from(edges, edge_state)));
    }, py::arg("rule"), py::arg("state"), py::arg("iterations"), py::arg("edges") = "fixed",
          py::arg("edge_state") = false, "Rows 0..iterations as 0/1 strings.");

    m.def("render_text", [](int rule, const std::string& state, std::size_t iterations, const std::string& edges) {
        return reca::render_text(reca::evolve(reca::Rule(rule), reca::StateVector::from_string(state), iterations,
                                              edges_from(edges, false)));
    }, py::arg("rule"), py::arg("state"), py::arg("iterations"), py::arg("edges") = "fixed");

    m.def("mirror_rule", [](int r) { return reca::mirror_rule(reca::Rule(r)).number(); });
    m.def("complement_rule", [](int r) { return reca::complement_rule(reca::Rule(r)).number(); });
    m.def("canonical_rule", [](int r) { return reca::canonical_rule(reca::Rule(r)); });
    m.def("equivalence_classes", &reca::equivalence_classes);
    m.def("rule_category", [](int r) -> py::object {
        const auto c = reca::rule_category(reca::Rule(r));
        if (!c) return py::none();
        return py::str(std::string(reca::category_name(c)));
    });

    m.def("encode_unary", [](double value, std::size_t cells, double lo, double hi) {
        return reca::encode(reca::EncoderSpec::unary(cells, lo, hi), value).to_string();
    }, py::arg("value"), py::arg("cells"), py::arg("lo"), py::arg("hi"));
    m.def("encode_gray", [](double value, std::size_t bits, double lo, double hi) {
        return reca::encode(reca::EncoderSpec::gray(bits, lo, hi), value).to_string();
    }, py::arg("value"), py::arg("bits"), py::arg("lo"), py::arg("hi"));
    m.def("encode_binary", [](double value, std::size_t bits, double lo, double hi) {
        return reca::encode(reca::EncoderSpec::binary(bits, lo, hi), value).to_string();
    }, py::arg("value"), py::arg("bits"), py::arg("lo"), py::arg("hi"));

    m.def("pseudoinverse", [](const reca::Matrix& s, double rcond) { return reca::pseudoinverse(s, rcond); },
          py::arg("s"), py::arg("rcond") = reca::kDefaultRcond);
    m.def("solve_min_norm",
          [](const reca::Matrix& s, const reca::Matrix& y, double rcond) { return reca::solve_min_norm(s, y, rcond); },
          py::arg("s"), py::arg("y"), py::arg("rcond") = reca::kDefaultRcond);
    m.def("nmse", [](const std::vector<double>& y, const std::vector<double>& y_hat) { return reca::nmse(y, y_hat); });

    m.def("sine_square", [](std::size_t waves, std::size_t points, std::uint64_t seed) {
        const auto s = reca::sine_square(waves, points, seed);
        return py::make_tuple(s.inputs, s.targets, s.split);
    }, py::arg("num_waves") = 200, py::arg("points_per_wave") = 20, py::arg("seed") = 1);
    m.def("channel_equalization", [](std::size_t n_train, std::size_t n_test, double snr_db, std::uint64_t seed) {
        const auto s = reca::channel_equalization(n_train, n_test, {snr_db}, seed);
        return py::make_tuple(s.inputs, s.targets, s.split);
    }, py::arg("n_train") = 1000, py::arg("n_test") = 100, py::arg("snr_db") = 28.0, py::arg("seed") = 1);
    m.def("iris_csv", [] { return std::string(reca::bundled_iris_csv()); });

    m.def("_run_json", [](const std::string& text) {
        py::gil_scoped_release release;
        return run_json(text);
    });
    m.def("_sweep_json", [](const std::string& text, std::size_t workers) {
        py::gil_scoped_release release;
        return sweep_json(text, workers);
    });
    m.def("_default_config_json", [](const std::string& task) {
        return reca::to_json(reca::default_config(reca::parse_task_name(task))).dump();
    });
}
