#include "aggsim/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace aggsim::meanfield {

namespace {

void require_prob(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream msg;
        msg << name << " must be in [0,1], got " << v;
        throw std::invalid_argument(msg.str());
    }
}

void require_fraction(double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) {
        std::ostringstream msg;
        msg << name << " must be in [0,1], got " << x;
        throw std::invalid_argument(msg.str());
    }
}

Regime budget_regime(const ControlPolicy& policy) {
    const bool soft = policy.add_per_step > 0;
    const bool hard = policy.delete_per_step > 0;
    if (soft && hard) return Regime::Combined;
    if (soft) return Regime::Soft;
    if (hard) return Regime::Hard;
    return Regime::Uncontrolled;
}

// Raw controlled step with validation already done.
ControlledStep apply_control(double x_raw, const Composites& comp,
                             const ControlPolicy& policy) {
    const double n = static_cast<double>(policy.n_per_step);
    const double aggressive = n * x_raw;
    const double deletions =
        std::min(static_cast<double>(policy.delete_per_step), aggressive);
    const double pool_size =
        n - deletions + static_cast<double>(policy.add_per_step);
    const double pool_aggr = aggressive - deletions;
    const double x_pool = pool_size > 0.0 ? pool_aggr / pool_size : 0.0;
    return {comp.offset_c + comp.slope_s * x_pool, x_pool};
}

}  // namespace

void validate(const ModelParams& p) {
    require_prob(p.alpha, "alpha");
    require_prob(p.p_reply_post, "p_reply_post");
    require_prob(p.p_reply_aggr, "p_reply_aggr");
    require_prob(p.p_reply_nonaggr, "p_reply_nonaggr");
}

void validate(const ControlPolicy& policy) {
    if (policy.n_per_step <= 0)
        throw std::invalid_argument("n_per_step must be positive");
    if (policy.add_per_step < 0)
        throw std::invalid_argument("add_per_step must be non-negative");
    if (policy.delete_per_step < 0)
        throw std::invalid_argument("delete_per_step must be non-negative");
    if (policy.delete_per_step > policy.n_per_step)
        throw std::invalid_argument("delete_per_step must not exceed n_per_step");
}

Composites composites(const ModelParams& p) {
    validate(p);
    return {(1.0 - p.alpha) * p.p_reply_post + p.alpha * p.p_reply_nonaggr,
            p.alpha * (p.p_reply_aggr - p.p_reply_nonaggr)};
}

double step(double x, const ModelParams& p) {
    require_fraction(x, "x");
    const auto [c, s] = composites(p);
    return c + s * x;
}

std::string_view regime_name(Regime r) {
    switch (r) {
        case Regime::Uncontrolled: return "uncontrolled";
        case Regime::Soft: return "soft";
        case Regime::Hard: return "hard";
        case Regime::Combined: return "combined";
        case Regime::Clamped: return "clamped";
    }
    return "unknown";
}

EquilibriumReport equilibrium(const ModelParams& p) {
    const Composites comp = composites(p);
    if (comp.slope_s >= 1.0)
        throw std::invalid_argument("non-contracting map: slope_s = 1");
    return {comp.offset_c / (1.0 - comp.slope_s), comp.offset_c, comp,
            Regime::Uncontrolled};
}

double floor_level(const ModelParams& p) { return composites(p).offset_c; }

ControlledStep controlled_step(double x_raw, const ModelParams& p,
                               const ControlPolicy& policy) {
    require_fraction(x_raw, "x_raw");
    validate(policy);
    return apply_control(x_raw, composites(p), policy);
}

EquilibriumReport controlled_equilibrium(const ModelParams& p,
                                         const ControlPolicy& policy) {
    validate(policy);
    const Composites comp = composites(p);
    const double n = static_cast<double>(policy.n_per_step);
    const double a = static_cast<double>(policy.add_per_step) / n;
    const double d = static_cast<double>(policy.delete_per_step) / n;
    const double c = comp.offset_c;
    const double s = comp.slope_s;

    if (c < d) {
        // Deletion outruns organic aggression at equilibrium; the pool the
        // repliers see is clean and the level is pinned at the floor.
        return {c, c, comp, Regime::Clamped};
    }

    const double pool_span = 1.0 - d + a;
    if (pool_span - std::abs(s) <= 0.0)
        throw std::invalid_argument(
            "non-contracting controlled map: |slope_s| >= 1 - d + a");
    const double x_star = (c * pool_span - s * d) / (pool_span - s);
    return {x_star, c, comp, budget_regime(policy)};
}

Trajectory project(double x0, const ModelParams& p, const ControlPolicy& policy,
                   int horizon) {
    require_fraction(x0, "x0");
    validate(policy);
    if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
    const Composites comp = composites(p);

    Trajectory traj;
    traj.points.reserve(static_cast<std::size_t>(horizon));
    double pool = x0;  // virtual step-0 parent pool
    for (int t = 1; t <= horizon; ++t) {
        const double x_raw = comp.offset_c + comp.slope_s * pool;
        const ControlledStep cs = apply_control(x_raw, comp, policy);
        traj.points.push_back({t, x_raw, cs.x_pool});
        pool = cs.x_pool;
    }
    return traj;
}

std::int64_t convergence_time(const ModelParams& p, const ControlPolicy& policy,
                              double x0, double eps) {
    require_fraction(x0, "x0");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    const double x_star = controlled_equilibrium(p, policy).x_star;
    if (std::abs(x0 - x_star) <= eps) return 0;

    // Exact iteration; the contraction check in controlled_equilibrium
    // guarantees geometric convergence, so the cap below is generous.
    constexpr std::int64_t kMaxSteps = 1'000'000;
    const Composites comp = composites(p);
    double pool = x0;
    for (std::int64_t t = 1; t <= kMaxSteps; ++t) {
        const double x_raw = comp.offset_c + comp.slope_s * pool;
        if (std::abs(x_raw - x_star) <= eps) return t;
        pool = apply_control(x_raw, comp, policy).x_pool;
    }
    throw std::runtime_error("convergence_time: no convergence within 1e6 steps");
}

ModelParams fit_from_observables(double x_star, double floor_c, double alpha,
                                 double p_nonaggr) {
    if (!(x_star > 0.0 && x_star < 1.0))
        throw std::invalid_argument("x_star must be in (0,1)");
    if (!(floor_c >= 0.0 && floor_c <= x_star))
        throw std::invalid_argument("floor must satisfy 0 <= floor <= x_star");
    require_prob(alpha, "alpha");
    require_prob(p_nonaggr, "p_reply_nonaggr");

    const double s = 1.0 - floor_c / x_star;  // in [0, 1)

    // Probabilities solved within this slack of [0,1] are snapped to the
    // boundary; anything further out is reported as infeasible.
    constexpr double kTol = 1e-12;
    auto snap = [](double v) { return std::clamp(v, 0.0, 1.0); };

    double p_aggr;
    if (alpha > 0.0) {
        p_aggr = p_nonaggr + s / alpha;
    } else {
        if (s > kTol)
            throw std::invalid_argument(
                "infeasible: alpha = 0 forces x_star = floor");
        p_aggr = p_nonaggr;
    }

    double p_post;
    if (alpha < 1.0) {
        p_post = (floor_c - alpha * p_nonaggr) / (1.0 - alpha);
    } else {
        if (std::abs(floor_c - p_nonaggr) > kTol)
            throw std::invalid_argument(
                "infeasible: alpha = 1 forces p_reply_nonaggr = floor");
        p_post = 0.0;  // unused by the dynamics at alpha = 1
    }

    if (p_aggr < -kTol || p_aggr > 1.0 + kTol || p_post < -kTol ||
        p_post > 1.0 + kTol) {
        // Feasible alpha interval at this p_nonaggr:
        //   p_reply_aggr <= 1  ->  alpha >= s / (1 - p_nonaggr)
        //   p_reply_post >= 0  ->  alpha <= floor / p_nonaggr
        //   p_reply_post <= 1  ->  alpha <= (1 - floor) / (1 - p_nonaggr)
        double lo = 0.0, hi = 1.0;
        if (p_nonaggr < 1.0) {
            lo = std::max(lo, s / (1.0 - p_nonaggr));
            hi = std::min(hi, (1.0 - floor_c) / (1.0 - p_nonaggr));
        }
        if (p_nonaggr > 0.0) hi = std::min(hi, floor_c / p_nonaggr);
        std::ostringstream msg;
        msg << "infeasible observables: solved p_reply_aggr = " << p_aggr
            << ", p_reply_post = " << p_post
            << "; with p_reply_nonaggr = " << p_nonaggr;
        if (lo <= hi)
            msg << " feasible alpha lies in [" << lo << ", " << hi << "]";
        else
            msg << " no alpha is feasible";
        throw std::invalid_argument(msg.str());
    }

    ModelParams fitted{alpha, snap(p_post), snap(p_aggr), p_nonaggr};
    validate(fitted);
    return fitted;
}

}  // namespace aggsim::meanfield
