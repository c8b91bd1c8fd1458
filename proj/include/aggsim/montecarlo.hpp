#pragma once

#include <cstdint>
#include <vector>

#include "aggsim/meanfield.hpp"

namespace aggsim::montecarlo {

struct SimConfig {
    int horizon = 30;
    std::int64_t n_per_step = 750;
    double x0 = 0.5;
    int replications = 200;
    std::uint64_t seed = 0;
};

void validate(const SimConfig& cfg);  // throws std::invalid_argument

// Exact per-step bookkeeping of one replication. pool_size is always
// n_per_step - deletions + add_per_step.
struct ReplicationStep {
    int step = 0;  // 1-based
    std::int64_t aggressive = 0;
    std::int64_t deletions = 0;
    std::int64_t pool_size = 0;
    std::int64_t pool_aggressive = 0;
    double x_raw = 0.0;
    double x_pool = 0.0;
};

struct Replication {
    std::vector<ReplicationStep> steps;
};

struct StepStats {
    int step = 0;  // 1-based
    double mean_x_raw = 0.0;
    double std_x_raw = 0.0;  // sample std over replications (0 when R = 1)
    double mean_x_pool = 0.0;
};

struct EnsembleTrajectory {
    std::vector<StepStats> steps;
    // Per-replication traces; populated only when requested.
    std::vector<Replication> replications;
};

// Per-comment stochastic simulation of the reply process with moderation.
// Each of the N comments replies to the post with probability 1 - alpha
// (aggressive with p_reply_post) or to a uniform parent from the previous
// post-control pool (aggressive with p_reply_aggr / p_reply_nonaggr by the
// parent's flag); step-1 parents are a virtual pool at fraction x0. Then
// min(delete_per_step, aggressive) aggressive comments are removed and
// add_per_step non-aggressive ones injected to form the next pool.
//
// Replication r draws from an independent substream of (seed, r), so output
// is bit-identical for a fixed seed regardless of scheduling. Replications
// run concurrently; aggregation is in replication order.
EnsembleTrajectory simulate(const meanfield::ModelParams& params,
                            const meanfield::ControlPolicy& policy,
                            const SimConfig& cfg,
                            bool retain_replications = false);

// Per-step ensemble means as a plain trajectory.
meanfield::Trajectory summarize(const EnsembleTrajectory& e);

}  // namespace aggsim::montecarlo
