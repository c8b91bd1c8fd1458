#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aggsim/montecarlo.hpp"
#include "aggsim/rng.hpp"
#include "testutil.hpp"

using namespace aggsim;
using namespace aggsim::montecarlo;
using meanfield::ControlPolicy;
using meanfield::ModelParams;

TEST_CASE("simulate: zero reply probabilities give identically zero paths") {
    const ModelParams p{0.5, 0.0, 0.0, 0.0};
    const SimConfig cfg{10, 200, 0.9, 20, 1};
    const EnsembleTrajectory e = simulate(p, {200, 0, 0}, cfg, true);
    for (const StepStats& s : e.steps) {
        CHECK(s.mean_x_raw == 0.0);
        CHECK(s.std_x_raw == 0.0);
        CHECK(s.mean_x_pool == 0.0);
    }
    for (const Replication& r : e.replications)
        for (const ReplicationStep& s : r.steps) CHECK(s.aggressive == 0);
}

TEST_CASE("simulate: full deletion keeps the pool clean and hits the floor") {
    const ModelParams p = testutil::p_opp();
    const SimConfig cfg{30, 750, 0.5, 60, 7};
    const EnsembleTrajectory e = simulate(p, {750, 0, 750}, cfg, true);
    for (const Replication& r : e.replications)
        for (const ReplicationStep& s : r.steps) {
            CHECK(s.pool_aggressive == 0);
            CHECK(s.x_pool == 0.0);
        }
    const StepStats& last = e.steps.back();
    CHECK(std::abs(last.mean_x_raw - 0.134) <= 0.005);
}

TEST_CASE("simulate: uncontrolled ensemble settles at the published level") {
    const ModelParams p = testutil::p_opp();
    const SimConfig cfg{30, 750, 0.5, 200, 42};
    const EnsembleTrajectory e = simulate(p, {750, 0, 0}, cfg);
    double acc = 0.0;
    int used = 0;
    for (const StepStats& s : e.steps)
        if (s.step >= 10) {
            acc += s.mean_x_raw;
            ++used;
        }
    const double level = acc / used;
    CHECK(level >= 0.155);
    CHECK(level <= 0.165);
}

TEST_CASE("simulate: conservation of pool size") {
    const ModelParams p = testutil::p_oth();
    const SimConfig cfg{12, 300, 0.4, 25, 5};
    const ControlPolicy policy{300, 40, 55};
    const EnsembleTrajectory e = simulate(p, policy, cfg, true);
    for (const Replication& r : e.replications)
        for (const ReplicationStep& s : r.steps) {
            CHECK(s.pool_size == 300 - s.deletions + 40);
            CHECK(s.deletions == std::min<std::int64_t>(55, s.aggressive));
            CHECK(s.pool_aggressive == s.aggressive - s.deletions);
        }
}

TEST_CASE("simulate: bit-determinism for a fixed seed") {
    const ModelParams p = testutil::p_opp();
    const SimConfig cfg{20, 500, 0.5, 40, 1234};
    const EnsembleTrajectory a = simulate(p, {500, 30, 20}, cfg);
    const EnsembleTrajectory b = simulate(p, {500, 30, 20}, cfg);
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        CHECK(a.steps[i].mean_x_raw == b.steps[i].mean_x_raw);
        CHECK(a.steps[i].std_x_raw == b.steps[i].std_x_raw);
        CHECK(a.steps[i].mean_x_pool == b.steps[i].mean_x_pool);
    }
    SimConfig other = cfg;
    other.seed = 1235;
    const EnsembleTrajectory d = simulate(p, {500, 30, 20}, other);
    bool differs = false;
    for (std::size_t i = 0; i < a.steps.size(); ++i)
        differs |= a.steps[i].mean_x_raw != d.steps[i].mean_x_raw;
    CHECK(differs);
}

TEST_CASE("simulate: monotone coupling in p_reply_post") {
    ModelParams lo = testutil::p_opp();  // p_reply_aggr > p_reply_nonaggr
    ModelParams hi = lo;
    hi.p_reply_post = std::min(1.0, lo.p_reply_post + 0.15);
    const SimConfig cfg{15, 400, 0.3, 30, 99};
    const ControlPolicy policy{400, 25, 40};
    const EnsembleTrajectory a = simulate(lo, policy, cfg, true);
    const EnsembleTrajectory b = simulate(hi, policy, cfg, true);
    for (std::size_t r = 0; r < a.replications.size(); ++r)
        for (std::size_t t = 0; t < a.replications[r].steps.size(); ++t)
            CHECK(b.replications[r].steps[t].aggressive >=
                  a.replications[r].steps[t].aggressive);
}

TEST_CASE("simulate: validates inputs") {
    const ModelParams p = testutil::p_opp();
    CHECK_THROWS_AS(simulate(p, {750, 0, 0}, SimConfig{0, 750, 0.5, 10, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate(p, {750, 0, 0}, SimConfig{10, 750, 0.5, 0, 1}),
                    std::invalid_argument);
    // policy/config volume mismatch
    CHECK_THROWS_AS(simulate(p, {500, 0, 0}, SimConfig{10, 750, 0.5, 10, 1}),
                    std::invalid_argument);
}

TEST_CASE("summarize: single replication is its own trajectory") {
    const ModelParams p = testutil::p_opp();
    const SimConfig cfg{10, 300, 0.5, 1, 8};
    const EnsembleTrajectory e = simulate(p, {300, 0, 0}, cfg, true);
    const meanfield::Trajectory t = summarize(e);
    REQUIRE(t.points.size() == 10);
    for (std::size_t i = 0; i < t.points.size(); ++i) {
        CHECK(t.points[i].x_raw == e.replications[0].steps[i].x_raw);
        CHECK(t.points[i].x_pool == e.replications[0].steps[i].x_pool);
        CHECK(e.steps[i].std_x_raw == 0.0);
    }
}

TEST_CASE("summarize: two constant replications average") {
    EnsembleTrajectory e;
    e.steps.push_back({1, 0.3, 0.1, 0.25});
    const meanfield::Trajectory t = summarize(e);
    REQUIRE(t.points.size() == 1);
    CHECK(t.points[0].x_raw == 0.3);
    CHECK(t.points[0].x_pool == 0.25);

    // means really are (a+b)/2: two replications with constant levels
    const ModelParams det_a{0.0, 1.0, 0.0, 0.0};  // every comment aggressive? no:
    // p_reply_post = 1 and alpha = 0 -> x_raw = 1 always
    const SimConfig cfg{5, 100, 0.0, 1, 3};
    const EnsembleTrajectory ea = simulate(det_a, {100, 0, 0}, cfg);
    const ModelParams det_b{0.0, 0.0, 0.0, 0.0};  // never aggressive
    const EnsembleTrajectory eb = simulate(det_b, {100, 0, 0}, cfg);
    EnsembleTrajectory merged;
    for (std::size_t i = 0; i < ea.steps.size(); ++i) {
        StepStats s;
        s.step = ea.steps[i].step;
        s.mean_x_raw = (ea.steps[i].mean_x_raw + eb.steps[i].mean_x_raw) / 2.0;
        s.mean_x_pool = (ea.steps[i].mean_x_pool + eb.steps[i].mean_x_pool) / 2.0;
        merged.steps.push_back(s);
    }
    for (const StepStats& s : merged.steps) CHECK(s.mean_x_raw == 0.5);
    CHECK_THROWS_AS(summarize(EnsembleTrajectory{}), std::invalid_argument);
}

TEST_CASE("property: ensemble means track the mean-field trajectory") {
    Rng rng(314);
    int tested = 0;
    for (int attempt = 0; attempt < 200 && tested < 25; ++attempt) {
        const ModelParams p = testutil::random_contracting_params(rng, 0.7);
        const auto comp = meanfield::composites(p);
        const std::int64_t n = 400;
        // keep deletions clear of the binomial clamp region, where the
        // mean-field min() and the stochastic expectation diverge by O(1/n)
        const double x_low = comp.offset_c + std::min(0.0, comp.slope_s);
        const double nc = static_cast<double>(n) * x_low;
        const double margin = nc - 4.0 * std::sqrt(std::max(nc, 0.0) + 1.0);
        std::int64_t max_delete =
            margin > 1.0 ? static_cast<std::int64_t>(margin) : 0;
        const ControlPolicy policy{
            n, static_cast<std::int64_t>(rng.below(60)),
            max_delete > 0
                ? static_cast<std::int64_t>(rng.below(
                      static_cast<std::uint64_t>(max_delete)))
                : 0};
        const double x0 = rng.uniform01();
        const SimConfig cfg{15, n, x0, 60,
                            1000 + static_cast<std::uint64_t>(attempt)};
        const EnsembleTrajectory e = simulate(p, policy, cfg);
        const meanfield::Trajectory mf =
            meanfield::project(x0, p, policy, cfg.horizon);
        for (std::size_t t = 0; t < e.steps.size(); ++t) {
            const double se =
                e.steps[t].std_x_raw / std::sqrt(static_cast<double>(
                                           cfg.replications));
            CAPTURE(tested);
            CAPTURE(t);
            CHECK(std::abs(e.steps[t].mean_x_raw - mf.points[t].x_raw) <=
                  4.0 * se + 1e-9);
        }
        ++tested;
    }
    CHECK(tested == 25);
}
