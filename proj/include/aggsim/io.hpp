#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "aggsim/meanfield.hpp"
#include "aggsim/montecarlo.hpp"
#include "aggsim/stats.hpp"

namespace aggsim::io {

// All emitted fractions use 6-decimal fixed formatting; JSON carries the
// same values quantized to 6 decimals so CSV and JSON agree. Counts are
// always exact integers.
std::string fixed6(double v);
double quantize6(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// --- model parameters / policies / scenarios -------------------------------

nlohmann::ordered_json params_json(const meanfield::ModelParams& p);
meanfield::ModelParams params_from_json(const nlohmann::json& j);
meanfield::ModelParams load_params_file(const std::string& path);

nlohmann::ordered_json policy_json(const meanfield::ControlPolicy& p);
meanfield::ControlPolicy policy_from_json(const nlohmann::json& j);

nlohmann::ordered_json sim_config_json(const montecarlo::SimConfig& cfg);

// A reproducible run description: model parameters (inline object or a path
// to a params JSON), moderation policy, simulation settings and output
// directory. Versioned with "schema": 1.
struct Scenario {
    meanfield::ModelParams params;
    meanfield::ControlPolicy policy;
    montecarlo::SimConfig sim;
    std::string outputs = ".";
    bool emit_svg = false;
};

nlohmann::ordered_json scenario_json(const Scenario& s);
Scenario load_scenario_file(const std::string& path);

// --- reports ----------------------------------------------------------------

nlohmann::ordered_json equilibrium_json(const meanfield::EquilibriumReport& r);
nlohmann::ordered_json estimates_json(const stats::ChannelEstimates& e);

std::string marginals_csv(const stats::MarginalReport& r);
nlohmann::ordered_json marginals_json(const stats::MarginalReport& r);

std::string association_csv(const stats::AssociationMatrix& m);
nlohmann::ordered_json association_json(const stats::AssociationMatrix& m);

// --- trajectories -----------------------------------------------------------

std::string trajectory_csv(const meanfield::Trajectory& t);
meanfield::Trajectory parse_trajectory_csv(const std::string& text);

std::string ensemble_csv(const montecarlo::EnsembleTrajectory& e);
montecarlo::EnsembleTrajectory parse_ensemble_csv(const std::string& text);

std::string replication_csv(const montecarlo::Replication& r);

// --- policy sweeps ----------------------------------------------------------

struct SweepRow {
    std::int64_t add_per_step = 0;
    std::int64_t delete_per_step = 0;
    double x_star = 0.0;
    meanfield::Regime regime = meanfield::Regime::Uncontrolled;
};

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace aggsim::io
