#include "aggsim/montecarlo.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "aggsim/rng.hpp"

namespace aggsim::montecarlo {

namespace {

using meanfield::ControlPolicy;
using meanfield::ModelParams;

// The parent pool is exchangeable, so only its size and aggressive count
// matter; a uniform pick is a Bernoulli draw at the pool fraction.
struct Pool {
    std::int64_t size = 0;
    std::int64_t aggressive = 0;
    double fraction() const {
        return size > 0 ? static_cast<double>(aggressive) /
                              static_cast<double>(size)
                        : 0.0;
    }
};

Replication run_replication(const ModelParams& params,
                            const ControlPolicy& policy, const SimConfig& cfg,
                            std::uint64_t replication_index) {
    Rng rng(cfg.seed, replication_index);
    Replication rep;
    rep.steps.reserve(static_cast<std::size_t>(cfg.horizon));

    const std::int64_t n = cfg.n_per_step;
    Pool pool;  // previous step's post-control pool; unused at step 1
    for (int t = 1; t <= cfg.horizon; ++t) {
        std::int64_t aggressive = 0;
        for (std::int64_t k = 0; k < n; ++k) {
            bool aggr;
            if (rng.bernoulli(params.alpha)) {
                const bool parent_aggr = t == 1
                                             ? rng.bernoulli(cfg.x0)
                                             : rng.bernoulli(pool.fraction());
                aggr = rng.bernoulli(parent_aggr ? params.p_reply_aggr
                                                 : params.p_reply_nonaggr);
            } else {
                aggr = rng.bernoulli(params.p_reply_post);
            }
            aggressive += aggr;
        }

        const std::int64_t deletions =
            std::min(policy.delete_per_step, aggressive);
        pool.size = n - deletions + policy.add_per_step;
        pool.aggressive = aggressive - deletions;

        ReplicationStep step;
        step.step = t;
        step.aggressive = aggressive;
        step.deletions = deletions;
        step.pool_size = pool.size;
        step.pool_aggressive = pool.aggressive;
        step.x_raw = static_cast<double>(aggressive) / static_cast<double>(n);
        step.x_pool = pool.fraction();
        rep.steps.push_back(step);
    }
    return rep;
}

}  // namespace

void validate(const SimConfig& cfg) {
    if (cfg.horizon <= 0) throw std::invalid_argument("horizon must be positive");
    if (cfg.n_per_step <= 0)
        throw std::invalid_argument("n_per_step must be positive");
    if (cfg.replications <= 0)
        throw std::invalid_argument("replications must be positive");
    if (!(cfg.x0 >= 0.0 && cfg.x0 <= 1.0))
        throw std::invalid_argument("x0 must be in [0,1]");
}

EnsembleTrajectory simulate(const ModelParams& params,
                            const ControlPolicy& policy, const SimConfig& cfg,
                            bool retain_replications) {
    meanfield::validate(params);
    meanfield::validate(policy);
    validate(cfg);
    if (policy.n_per_step != cfg.n_per_step)
        throw std::invalid_argument(
            "policy.n_per_step must equal SimConfig n_per_step");

    const std::size_t R = static_cast<std::size_t>(cfg.replications);
    std::vector<Replication> reps(R);

    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), R);
    if (workers <= 1) {
        for (std::size_t r = 0; r < R; ++r)
            reps[r] = run_replication(params, policy, cfg, r);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back([&, w] {
                for (std::size_t r = w; r < R; r += workers)
                    reps[r] = run_replication(params, policy, cfg, r);
            });
        }
        for (std::thread& th : threads) th.join();
    }

    // Reduce in replication order so results do not depend on scheduling.
    EnsembleTrajectory out;
    out.steps.resize(static_cast<std::size_t>(cfg.horizon));
    for (int t = 0; t < cfg.horizon; ++t) {
        StepStats& s = out.steps[static_cast<std::size_t>(t)];
        s.step = t + 1;
        double sum_raw = 0.0, sum_pool = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
            sum_raw += reps[r].steps[static_cast<std::size_t>(t)].x_raw;
            sum_pool += reps[r].steps[static_cast<std::size_t>(t)].x_pool;
        }
        s.mean_x_raw = sum_raw / static_cast<double>(R);
        s.mean_x_pool = sum_pool / static_cast<double>(R);
        if (R > 1) {
            double ss = 0.0;
            for (std::size_t r = 0; r < R; ++r) {
                const double d =
                    reps[r].steps[static_cast<std::size_t>(t)].x_raw -
                    s.mean_x_raw;
                ss += d * d;
            }
            s.std_x_raw = std::sqrt(ss / static_cast<double>(R - 1));
        }
    }
    if (retain_replications) out.replications = std::move(reps);
    return out;
}

meanfield::Trajectory summarize(const EnsembleTrajectory& e) {
    if (e.steps.empty())
        throw std::invalid_argument("summarize: empty ensemble");
    meanfield::Trajectory traj;
    traj.points.reserve(e.steps.size());
    for (const StepStats& s : e.steps)
        traj.points.push_back({s.step, s.mean_x_raw, s.mean_x_pool});
    return traj;
}

}  // namespace aggsim::montecarlo
