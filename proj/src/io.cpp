#include "aggsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aggsim::io {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

double quantize6(double v) { return std::round(v * 1e6) / 1e6; }

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw std::runtime_error("missing or non-numeric field '" + key + "'");
    return j.at(key).get<double>();
}

std::int64_t get_int(const json& j, const std::string& key,
                     std::int64_t fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer())
        throw std::runtime_error("field '" + key + "' must be an integer");
    return j.at(key).get<std::int64_t>();
}

ordered_json estimate_json(const stats::Estimate& e) {
    return {{"point", quantize6(e.point)},
            {"numerator", e.numerator},
            {"denominator", e.denominator},
            {"ci_low", quantize6(e.ci_low)},
            {"ci_high", quantize6(e.ci_high)}};
}

}  // namespace

ordered_json params_json(const meanfield::ModelParams& p) {
    return {{"alpha", quantize6(p.alpha)},
            {"p_reply_post", quantize6(p.p_reply_post)},
            {"p_reply_aggr", quantize6(p.p_reply_aggr)},
            {"p_reply_nonaggr", quantize6(p.p_reply_nonaggr)}};
}

meanfield::ModelParams params_from_json(const json& j) {
    meanfield::ModelParams p;
    p.alpha = require_number(j, "alpha");
    p.p_reply_post = require_number(j, "p_reply_post");
    p.p_reply_aggr = require_number(j, "p_reply_aggr");
    p.p_reply_nonaggr = require_number(j, "p_reply_nonaggr");
    meanfield::validate(p);
    return p;
}

meanfield::ModelParams load_params_file(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw std::runtime_error("invalid JSON in " + path + ": " + e.what());
    }
    return params_from_json(j);
}

ordered_json policy_json(const meanfield::ControlPolicy& p) {
    return {{"n_per_step", p.n_per_step},
            {"add_per_step", p.add_per_step},
            {"delete_per_step", p.delete_per_step}};
}

meanfield::ControlPolicy policy_from_json(const json& j) {
    meanfield::ControlPolicy p;
    if (!j.contains("n_per_step"))
        throw std::runtime_error("policy: missing field 'n_per_step'");
    p.n_per_step = get_int(j, "n_per_step", 0);
    p.add_per_step = get_int(j, "add_per_step", 0);
    p.delete_per_step = get_int(j, "delete_per_step", 0);
    meanfield::validate(p);
    return p;
}

ordered_json sim_config_json(const montecarlo::SimConfig& cfg) {
    return {{"horizon", cfg.horizon},
            {"n_per_step", cfg.n_per_step},
            {"x0", cfg.x0},
            {"replications", cfg.replications},
            {"seed", cfg.seed}};
}

ordered_json scenario_json(const Scenario& s) {
    return {{"schema", 1},
            {"params", params_json(s.params)},
            {"policy", policy_json(s.policy)},
            {"sim", sim_config_json(s.sim)},
            {"outputs", s.outputs},
            {"emit_svg", s.emit_svg}};
}

Scenario load_scenario_file(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw std::runtime_error("invalid JSON in " + path + ": " + e.what());
    }
    if (get_int(j, "schema", -1) != 1)
        throw std::runtime_error("scenario " + path +
                                 ": missing or unsupported \"schema\" "
                                 "(expected 1)");

    Scenario s;
    if (!j.contains("params"))
        throw std::runtime_error("scenario " + path + ": missing \"params\"");
    if (j.at("params").is_string()) {
        // Path relative to the scenario file.
        fs::path p = j.at("params").get<std::string>();
        if (p.is_relative()) p = fs::path(path).parent_path() / p;
        s.params = load_params_file(p.string());
    } else {
        s.params = params_from_json(j.at("params"));
    }

    if (!j.contains("sim"))
        throw std::runtime_error("scenario " + path + ": missing \"sim\"");
    const json& sim = j.at("sim");
    if (!sim.contains("horizon"))
        throw std::runtime_error("scenario " + path + ": sim.horizon required");
    s.sim.horizon = static_cast<int>(get_int(sim, "horizon", 0));
    s.sim.n_per_step = get_int(sim, "n_per_step", 750);
    s.sim.x0 = sim.contains("x0") ? require_number(sim, "x0") : 0.5;
    s.sim.replications = static_cast<int>(get_int(sim, "replications", 200));
    s.sim.seed = static_cast<std::uint64_t>(get_int(sim, "seed", 0));

    if (j.contains("policy")) {
        const json& pol = j.at("policy");
        s.policy.n_per_step = get_int(pol, "n_per_step", s.sim.n_per_step);
        s.policy.add_per_step = get_int(pol, "add_per_step", 0);
        s.policy.delete_per_step = get_int(pol, "delete_per_step", 0);
        if (s.policy.n_per_step != s.sim.n_per_step)
            throw std::runtime_error(
                "scenario " + path +
                ": policy.n_per_step must equal sim.n_per_step");
    } else {
        s.policy.n_per_step = s.sim.n_per_step;
    }
    meanfield::validate(s.policy);

    if (j.contains("outputs")) s.outputs = j.at("outputs").get<std::string>();
    if (j.contains("emit_svg")) s.emit_svg = j.at("emit_svg").get<bool>();
    return s;
}

ordered_json equilibrium_json(const meanfield::EquilibriumReport& r) {
    return {{"schema", 1},
            {"x_star", quantize6(r.x_star)},
            {"floor", quantize6(r.floor)},
            {"regime", std::string(meanfield::regime_name(r.regime))},
            {"offset_c", quantize6(r.composites.offset_c)},
            {"slope_s", quantize6(r.composites.slope_s)}};
}

ordered_json estimates_json(const stats::ChannelEstimates& e) {
    return {{"schema", 1},
            {"channel", std::string(corpus::channel_name(e.channel))},
            {"alpha", quantize6(e.params.alpha)},
            {"p_reply_post", quantize6(e.params.p_reply_post)},
            {"p_reply_aggr", quantize6(e.params.p_reply_aggr)},
            {"p_reply_nonaggr", quantize6(e.params.p_reply_nonaggr)},
            {"estimates",
             ordered_json{{"alpha", estimate_json(e.alpha)},
                          {"p_reply_post", estimate_json(e.p_reply_post)},
                          {"p_reply_aggr", estimate_json(e.p_reply_aggr)},
                          {"p_reply_nonaggr", estimate_json(e.p_reply_nonaggr)}}},
            {"excluded_unknown_parent", e.excluded_unknown_parent}};
}

std::string marginals_csv(const stats::MarginalReport& r) {
    std::ostringstream out;
    out << "feature,count,share\n";
    out << "total," << r.total << ",1.000000\n";
    auto row = [&](const char* name, std::uint64_t count) {
        out << name << ',' << count << ',' << fixed6(r.share(count)) << '\n';
    };
    row("stance_against", r.stance_counts[0]);
    row("stance_for", r.stance_counts[1]);
    row("stance_unclear", r.stance_counts[2]);
    row("logic", r.logic);
    row("experience", r.experience);
    row("hate", r.hate);
    row("aggr_opponent", r.aggr_opponent);
    row("aggr_other", r.aggr_other);
    row("overall_aggression", r.overall_aggression);
    return out.str();
}

ordered_json marginals_json(const stats::MarginalReport& r) {
    ordered_json counts = {{"stance_against", r.stance_counts[0]},
                           {"stance_for", r.stance_counts[1]},
                           {"stance_unclear", r.stance_counts[2]},
                           {"logic", r.logic},
                           {"experience", r.experience},
                           {"hate", r.hate},
                           {"aggr_opponent", r.aggr_opponent},
                           {"aggr_other", r.aggr_other},
                           {"overall_aggression", r.overall_aggression}};
    ordered_json shares;
    for (auto& [key, value] : counts.items())
        shares[key] = quantize6(r.share(value.get<std::uint64_t>()));
    return {{"schema", 1},
            {"total", r.total},
            {"counts", counts},
            {"shares", shares}};
}

std::string association_csv(const stats::AssociationMatrix& m) {
    std::ostringstream out;
    out << "feature";
    for (stats::Feature f : m.features) out << ',' << stats::feature_name(f);
    out << '\n';
    for (std::size_t i = 0; i < m.features.size(); ++i) {
        out << stats::feature_name(m.features[i]);
        for (std::size_t j = 0; j < m.features.size(); ++j)
            out << ',' << fixed6(m.values[i][j]);
        out << '\n';
    }
    return out.str();
}

ordered_json association_json(const stats::AssociationMatrix& m) {
    ordered_json features = ordered_json::array();
    for (stats::Feature f : m.features)
        features.push_back(std::string(stats::feature_name(f)));
    ordered_json values = ordered_json::array();
    ordered_json degenerate = ordered_json::array();
    ordered_json excluded = ordered_json::array();
    for (std::size_t i = 0; i < m.features.size(); ++i) {
        ordered_json vrow = ordered_json::array();
        ordered_json drow = ordered_json::array();
        ordered_json erow = ordered_json::array();
        for (std::size_t j = 0; j < m.features.size(); ++j) {
            vrow.push_back(quantize6(m.values[i][j]));
            drow.push_back(m.degenerate[i][j]);
            erow.push_back(m.excluded[i][j]);
        }
        values.push_back(vrow);
        degenerate.push_back(drow);
        excluded.push_back(erow);
    }
    return {{"schema", 1},
            {"features", features},
            {"values", values},
            {"degenerate", degenerate},
            {"excluded", excluded}};
}

std::string trajectory_csv(const meanfield::Trajectory& t) {
    std::ostringstream out;
    out << "step,x_raw,x_pool\n";
    for (const meanfield::TrajectoryPoint& p : t.points)
        out << p.step << ',' << fixed6(p.x_raw) << ',' << fixed6(p.x_pool)
            << '\n';
    return out.str();
}

namespace {

std::vector<std::vector<std::string>> parse_csv_rows(const std::string& text,
                                                      const std::string& header) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header)
        throw std::runtime_error("unexpected CSV header: '" + line + "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cur;
        for (char ch : line) {
            if (ch == ',') {
                cells.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(ch);
            }
        }
        cells.push_back(cur);
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

meanfield::Trajectory parse_trajectory_csv(const std::string& text) {
    meanfield::Trajectory t;
    for (const auto& cells : parse_csv_rows(text, "step,x_raw,x_pool")) {
        if (cells.size() != 3)
            throw std::runtime_error("trajectory CSV: expected 3 fields");
        t.points.push_back(
            {std::stoi(cells[0]), std::stod(cells[1]), std::stod(cells[2])});
    }
    return t;
}

std::string ensemble_csv(const montecarlo::EnsembleTrajectory& e) {
    std::ostringstream out;
    out << "step,mean_x_raw,std_x_raw,mean_x_pool\n";
    for (const montecarlo::StepStats& s : e.steps)
        out << s.step << ',' << fixed6(s.mean_x_raw) << ','
            << fixed6(s.std_x_raw) << ',' << fixed6(s.mean_x_pool) << '\n';
    return out.str();
}

montecarlo::EnsembleTrajectory parse_ensemble_csv(const std::string& text) {
    montecarlo::EnsembleTrajectory e;
    for (const auto& cells :
         parse_csv_rows(text, "step,mean_x_raw,std_x_raw,mean_x_pool")) {
        if (cells.size() != 4)
            throw std::runtime_error("ensemble CSV: expected 4 fields");
        montecarlo::StepStats s;
        s.step = std::stoi(cells[0]);
        s.mean_x_raw = std::stod(cells[1]);
        s.std_x_raw = std::stod(cells[2]);
        s.mean_x_pool = std::stod(cells[3]);
        e.steps.push_back(s);
    }
    return e;
}

std::string replication_csv(const montecarlo::Replication& r) {
    std::ostringstream out;
    out << "step,aggressive,deletions,pool_size,pool_aggressive,x_raw,x_pool\n";
    for (const montecarlo::ReplicationStep& s : r.steps)
        out << s.step << ',' << s.aggressive << ',' << s.deletions << ','
            << s.pool_size << ',' << s.pool_aggressive << ',' << fixed6(s.x_raw)
            << ',' << fixed6(s.x_pool) << '\n';
    return out.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "add_per_step,delete_per_step,x_star,regime\n";
    for (const SweepRow& r : rows)
        out << r.add_per_step << ',' << r.delete_per_step << ','
            << fixed6(r.x_star) << ',' << meanfield::regime_name(r.regime)
            << '\n';
    return out.str();
}

}  // namespace aggsim::io
