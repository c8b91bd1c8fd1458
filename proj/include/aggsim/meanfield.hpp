#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace aggsim::meanfield {

// Parameters of the aggression recurrence for one aggression channel.
// All four values are probabilities:
//   alpha           — a comment replies to another comment (else to the post)
//   p_reply_post    — an aggressive comment, given it replies to the post
//   p_reply_aggr    — an aggressive comment, given an aggressive parent
//   p_reply_nonaggr — an aggressive comment, given a non-aggressive parent
struct ModelParams {
    double alpha = 0.0;
    double p_reply_post = 0.0;
    double p_reply_aggr = 0.0;
    double p_reply_nonaggr = 0.0;
};

void validate(const ModelParams& p);  // throws std::invalid_argument

// The recurrence x' = (1-alpha)*p_reply_post
//                     + alpha*[x*p_reply_aggr + (1-x)*p_reply_nonaggr]
// regrouped as x' = offset_c + slope_s * x.
//
// offset_c is also the aggression floor: the level produced when every
// visible parent is non-aggressive.
struct Composites {
    double offset_c = 0.0;
    double slope_s = 0.0;
};

Composites composites(const ModelParams& p);

// One uncontrolled step of the recurrence. x must be in [0,1].
double step(double x, const ModelParams& p);

// Per-step moderation budgets. n_per_step is the organic comment volume N;
// add_per_step injects non-aggressive comments into the parent pool (soft
// strategy); delete_per_step removes aggressive comments from it (hard
// strategy).
struct ControlPolicy {
    std::int64_t n_per_step = 750;
    std::int64_t add_per_step = 0;
    std::int64_t delete_per_step = 0;
};

void validate(const ControlPolicy& policy);  // throws std::invalid_argument

enum class Regime { Uncontrolled, Soft, Hard, Combined, Clamped };

std::string_view regime_name(Regime r);

struct EquilibriumReport {
    double x_star = 0.0;   // long-run organic aggressive fraction
    double floor = 0.0;    // irreducible level, equals composites.offset_c
    Composites composites;
    Regime regime = Regime::Uncontrolled;
};

// Fixed point of the uncontrolled recurrence, x* = c / (1 - s).
EquilibriumReport equilibrium(const ModelParams& p);

// Minimum achievable equilibrium under any moderation budget.
double floor_level(const ModelParams& p);

struct ControlledStep {
    double x_raw_next = 0.0;  // organic aggressive fraction at the next step
    double x_pool = 0.0;      // post-control parent-pool fraction this step
};

// Applies one step of the controlled dynamics: deletions remove aggressive
// comments from the parent pool (at most the aggressive count), injections
// add non-aggressive ones, and the next organic fraction responds to the
// diluted pool.
ControlledStep controlled_step(double x_raw, const ModelParams& p,
                               const ControlPolicy& policy);

// Closed-form fixed point of the controlled map. With a = add/n, d = delete/n:
//   x* = [c*(1-d+a) - s*d] / [(1-d+a) - s]   when c >= d (the pool still
//        contains aggressive comments at equilibrium),
//   x* = c with regime Clamped               when c < d (deletion outruns
//        organic aggression; pool aggression is pinned at zero).
EquilibriumReport controlled_equilibrium(const ModelParams& p,
                                         const ControlPolicy& policy);

struct TrajectoryPoint {
    int step = 0;          // 1-based
    double x_raw = 0.0;
    double x_pool = 0.0;
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;
};

// Iterates controlled_step for `horizon` steps starting from a virtual
// parent pool at fraction x0. Row t holds x_raw(t) and the post-control
// pool x_pool(t); x0 itself is not emitted (horizon 0 gives an empty
// trajectory).
Trajectory project(double x0, const ModelParams& p, const ControlPolicy& policy,
                   int horizon);

// Smallest t >= 0 with |x(t) - x*| <= eps, following the same indexing as
// project (x(0) = x0). Exact by iteration; geometrically this is
// ceil(log(eps/|x0-x*|) / log(rate)) for the purely linear regimes.
std::int64_t convergence_time(const ModelParams& p, const ControlPolicy& policy,
                              double x0, double eps);

// Inverts the equilibrium and floor formulas: given observed (x*, c) and a
// chosen (alpha, p_reply_nonaggr), recovers the remaining probabilities.
// Any (alpha, p_reply_nonaggr) consistent with the same (c, s) yields
// identical dynamics. Throws std::invalid_argument when the solved
// probabilities leave [0,1], naming the feasible alpha interval.
ModelParams fit_from_observables(double x_star, double floor_c, double alpha,
                                 double p_nonaggr);

}  // namespace aggsim::meanfield
