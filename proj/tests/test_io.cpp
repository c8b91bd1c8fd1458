#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "aggsim/io.hpp"
#include "aggsim/svg.hpp"
#include "testutil.hpp"

using namespace aggsim;
using namespace aggsim::io;

namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "aggsim_io_tests";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("fixed6 and quantize6 agree") {
    CHECK(fixed6(0.5) == "0.500000");
    CHECK(fixed6(1.0 / 3.0) == "0.333333");
    CHECK(quantize6(1.0 / 3.0) == doctest::Approx(0.333333).epsilon(1e-12));
    CHECK(std::stod(fixed6(0.157226666)) == quantize6(0.157226666));
}

TEST_CASE("params JSON round-trips") {
    const meanfield::ModelParams p = testutil::p_opp();
    const meanfield::ModelParams q = params_from_json(params_json(p));
    CHECK(q.alpha == doctest::Approx(p.alpha).epsilon(1e-6));
    CHECK(q.p_reply_post == doctest::Approx(p.p_reply_post).epsilon(1e-6));
    CHECK(q.p_reply_aggr == doctest::Approx(p.p_reply_aggr).epsilon(1e-6));
    CHECK(q.p_reply_nonaggr == doctest::Approx(p.p_reply_nonaggr).epsilon(1e-6));

    CHECK_THROWS_WITH_AS(params_from_json(nlohmann::json{{"alpha", 0.5}}),
                         doctest::Contains("p_reply_post"), std::runtime_error);
    CHECK_THROWS_AS(params_from_json(nlohmann::json{{"alpha", 2.0},
                                                    {"p_reply_post", 0.1},
                                                    {"p_reply_aggr", 0.1},
                                                    {"p_reply_nonaggr", 0.1}}),
                    std::invalid_argument);
}

TEST_CASE("policy JSON round-trips") {
    const meanfield::ControlPolicy p{750, 75, 30};
    const meanfield::ControlPolicy q = policy_from_json(policy_json(p));
    CHECK(q.n_per_step == 750);
    CHECK(q.add_per_step == 75);
    CHECK(q.delete_per_step == 30);
    CHECK_THROWS_AS(policy_from_json(nlohmann::json{{"add_per_step", 10}}),
                    std::runtime_error);
    CHECK_THROWS_AS(policy_from_json(nlohmann::json{{"n_per_step", 10},
                                                    {"delete_per_step", 20}}),
                    std::invalid_argument);
}

TEST_CASE("scenario: inline params, defaults, and validation") {
    const fs::path path = temp_file("scenario_inline.json");
    nlohmann::ordered_json j = {
        {"schema", 1},
        {"params", params_json(testutil::p_opp())},
        {"policy", {{"add_per_step", 75}}},
        {"sim", {{"horizon", 30}}},
        {"outputs", "outdir"},
        {"emit_svg", true},
    };
    write_text_file(path.string(), j.dump(2));
    const Scenario s = load_scenario_file(path.string());
    CHECK(s.sim.horizon == 30);
    CHECK(s.sim.n_per_step == 750);         // default
    CHECK(s.policy.n_per_step == 750);      // inherited from sim
    CHECK(s.policy.add_per_step == 75);
    CHECK(s.sim.x0 == 0.5);
    CHECK(s.outputs == "outdir");
    CHECK(s.emit_svg);
}

TEST_CASE("scenario: params given as a path") {
    const fs::path params_path = temp_file("params_opp.json");
    write_text_file(params_path.string(), params_json(testutil::p_opp()).dump());
    const fs::path path = temp_file("scenario_path.json");
    nlohmann::ordered_json j = {{"schema", 1},
                                {"params", "params_opp.json"},
                                {"sim", {{"horizon", 5}}}};
    write_text_file(path.string(), j.dump());
    const Scenario s = load_scenario_file(path.string());
    CHECK(s.params.p_reply_post == doctest::Approx(0.168).epsilon(1e-6));
}

TEST_CASE("scenario: schema and consistency errors") {
    const fs::path path = temp_file("scenario_bad.json");
    write_text_file(path.string(), "{\"params\": {}}");
    CHECK_THROWS_WITH_AS(load_scenario_file(path.string()),
                         doctest::Contains("schema"), std::runtime_error);

    nlohmann::ordered_json j = {
        {"schema", 1},
        {"params", params_json(testutil::p_opp())},
        {"policy", {{"n_per_step", 100}}},
        {"sim", {{"horizon", 5}, {"n_per_step", 750}}}};
    write_text_file(path.string(), j.dump());
    CHECK_THROWS_WITH_AS(load_scenario_file(path.string()),
                         doctest::Contains("n_per_step"), std::runtime_error);
}

TEST_CASE("trajectory CSV: emit-parse-emit is idempotent") {
    const meanfield::Trajectory t =
        meanfield::project(0.5, testutil::p_opp(), {750, 75, 0}, 12);
    const std::string text = trajectory_csv(t);
    CHECK(text.substr(0, 17) == "step,x_raw,x_pool");
    const meanfield::Trajectory back = parse_trajectory_csv(text);
    REQUIRE(back.points.size() == t.points.size());
    for (std::size_t i = 0; i < t.points.size(); ++i) {
        CHECK(back.points[i].step == t.points[i].step);
        CHECK(back.points[i].x_raw ==
              doctest::Approx(t.points[i].x_raw).epsilon(1e-6));
    }
    CHECK(trajectory_csv(back) == text);
}

TEST_CASE("ensemble CSV: emit-parse-emit is idempotent") {
    const montecarlo::SimConfig cfg{8, 200, 0.5, 10, 77};
    const montecarlo::EnsembleTrajectory e =
        montecarlo::simulate(testutil::p_opp(), {200, 10, 5}, cfg);
    const std::string text = ensemble_csv(e);
    const montecarlo::EnsembleTrajectory back = parse_ensemble_csv(text);
    CHECK(ensemble_csv(back) == text);
    CHECK_THROWS_AS(parse_ensemble_csv("bogus\n"), std::runtime_error);
}

TEST_CASE("marginals CSV carries the published shares verbatim") {
    const std::string text =
        marginals_csv(stats::marginal_distribution(testutil::fig1_fixture()));
    CHECK(text.find("logic,4,0.040000") != std::string::npos);
    CHECK(text.find("experience,7,0.070000") != std::string::npos);
    CHECK(text.find("aggr_opponent,14,0.140000") != std::string::npos);
    CHECK(text.find("aggr_other,39,0.390000") != std::string::npos);
    CHECK(text.find("overall_aggression,53,0.530000") != std::string::npos);
    CHECK(text.find("hate,17,0.170000") != std::string::npos);
}

TEST_CASE("marginals JSON keeps counts bit-exact") {
    const stats::MarginalReport r =
        stats::marginal_distribution(testutil::fig1_fixture());
    const nlohmann::ordered_json j = marginals_json(r);
    CHECK(j.at("total").get<std::uint64_t>() == 100);
    CHECK(j.at("counts").at("hate").get<std::uint64_t>() == 17);
    CHECK(j.at("counts").at("overall_aggression").get<std::uint64_t>() == 53);
    CHECK(j.at("shares").at("aggr_other").get<double>() == 0.39);
}

TEST_CASE("association CSV/JSON: labeled, symmetric, flag-preserving") {
    const stats::AssociationMatrix m =
        stats::association_matrix(testutil::fig1_fixture());
    const std::string text = association_csv(m);
    CHECK(text.find("feature,stance,logic,experience,hate,aggr_opponent,"
                    "aggr_other,stance_p") == 0);
    CHECK(testutil::count_occurrences(text, "\n") == 13);  // header + 12 rows

    const nlohmann::ordered_json j = association_json(m);
    CHECK(j.at("features").size() == 12);
    CHECK(j.at("values").at(0).size() == 12);
    // fixture has no parent features: parent-side cells are degenerate
    CHECK(j.at("degenerate").at(6).at(6).get<bool>());
    CHECK(j.at("excluded").at(6).at(6).get<std::uint64_t>() == 100);
    CHECK_FALSE(j.at("degenerate").at(0).at(1).get<bool>());
}

TEST_CASE("sweep CSV formatting") {
    const std::vector<SweepRow> rows = {
        {0, 0, 0.16, meanfield::Regime::Uncontrolled},
        {75, 0, 0.157227, meanfield::Regime::Soft},
        {0, 750, 0.134, meanfield::Regime::Clamped},
    };
    const std::string text = sweep_csv(rows);
    CHECK(text.find("add_per_step,delete_per_step,x_star,regime") == 0);
    CHECK(text.find("0,0,0.160000,uncontrolled") != std::string::npos);
    CHECK(text.find("75,0,0.157227,soft") != std::string::npos);
    CHECK(text.find("0,750,0.134000,clamped") != std::string::npos);
}

TEST_CASE("svg line chart: well-formed, one polyline per series, labeled axes") {
    svg::Series a{"x_raw", {1, 2, 3}, {0.5, 0.3, 0.2}};
    svg::Series b{"x_pool", {1, 2, 3}, {0.4, 0.25, 0.18}};
    svg::Band band{{1, 2, 3}, {0.45, 0.25, 0.15}, {0.55, 0.35, 0.25}};
    const std::string text =
        svg::line_chart("demo", "step (days)", "aggressive fraction", {a, b},
                        band);
    CHECK(testutil::xml_well_formed(text));
    CHECK(testutil::count_occurrences(text, "<polyline") == 2);
    CHECK(testutil::count_occurrences(text, "<polygon") == 1);
    CHECK(text.find("step (days)") != std::string::npos);
    CHECK(text.find("aggressive fraction") != std::string::npos);
}

TEST_CASE("svg heatmap: well-formed with degenerate cells grayed") {
    const std::vector<std::string> labels{"a", "b"};
    const std::vector<std::vector<double>> values{{1.0, 0.2}, {0.2, 0.0}};
    const std::vector<std::vector<bool>> degenerate{{false, false},
                                                    {false, true}};
    const std::string text = svg::heatmap("assoc", labels, values, degenerate);
    CHECK(testutil::xml_well_formed(text));
    CHECK(text.find("#bbbbbb") != std::string::npos);
}

TEST_CASE("read/write text file round-trip") {
    const fs::path path = temp_file("nested/dir/file.txt");
    write_text_file(path.string(), "payload\n");
    CHECK(read_text_file(path.string()) == "payload\n");
    CHECK_THROWS_AS(read_text_file("/nonexistent/nope.txt"), std::runtime_error);
}
