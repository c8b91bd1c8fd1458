#include "aggsim/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <set>
#include <stdexcept>

#include <CLI11.hpp>

#include "aggsim/corpus.hpp"
#include "aggsim/io.hpp"
#include "aggsim/meanfield.hpp"
#include "aggsim/montecarlo.hpp"
#include "aggsim/stats.hpp"
#include "aggsim/svg.hpp"

namespace aggsim::cli {

namespace fs = std::filesystem;

std::vector<std::int64_t> parse_grid(const std::string& text) {
    auto to_int = [&](const std::string& s) {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(s, &pos);
        if (pos != s.size())
            throw std::runtime_error("invalid grid value '" + s + "'");
        return v;
    };
    const std::size_t dots = text.find("..");
    if (dots == std::string::npos) return {to_int(text)};
    const std::size_t colon = text.find(':', dots + 2);
    if (colon == std::string::npos)
        throw std::runtime_error("grid '" + text +
                                 "' must be 'lo..hi:step' or a single value");
    const std::int64_t lo = to_int(text.substr(0, dots));
    const std::int64_t hi = to_int(text.substr(dots + 2, colon - dots - 2));
    const std::int64_t step = to_int(text.substr(colon + 1));
    if (step <= 0) throw std::runtime_error("grid step must be positive");
    if (lo > hi) throw std::runtime_error("grid lower bound exceeds upper");
    std::vector<std::int64_t> out;
    for (std::int64_t v = lo; v <= hi; v += step) out.push_back(v);
    return out;
}

namespace {

void write_with_note(const std::string& path, const std::string& content,
                     std::ostream& out) {
    io::write_text_file(path, content);
    out << "wrote " << path << '\n';
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void cmd_estimate(const std::string& corpus_path, const std::string& channel,
                  const std::string& out_path, std::ostream& out) {
    const corpus::Corpus c = corpus::parse_corpus_file(corpus_path);
    const stats::ChannelEstimates est =
        stats::estimate_channel(c, corpus::parse_channel(channel));
    write_with_note(out_path, io::estimates_json(est).dump(2) + "\n", out);
}

void cmd_analyze(const std::string& corpus_path, const std::string& out_dir,
                 bool emit_svg, std::ostream& out) {
    const corpus::Corpus c = corpus::parse_corpus_file(corpus_path);
    const stats::MarginalReport marginals = stats::marginal_distribution(c);
    const stats::AssociationMatrix assoc = stats::association_matrix(c);

    write_with_note(join_path(out_dir, "marginals.csv"),
                    io::marginals_csv(marginals), out);
    write_with_note(join_path(out_dir, "marginals.json"),
                    io::marginals_json(marginals).dump(2) + "\n", out);
    write_with_note(join_path(out_dir, "associations.csv"),
                    io::association_csv(assoc), out);
    write_with_note(join_path(out_dir, "associations.json"),
                    io::association_json(assoc).dump(2) + "\n", out);
    if (emit_svg) {
        std::vector<std::string> labels;
        std::vector<std::vector<double>> values;
        std::vector<std::vector<bool>> degenerate;
        for (std::size_t i = 0; i < assoc.features.size(); ++i) {
            labels.emplace_back(stats::feature_name(assoc.features[i]));
            values.emplace_back(assoc.values[i].begin(), assoc.values[i].end());
            degenerate.emplace_back(assoc.degenerate[i].begin(),
                                    assoc.degenerate[i].end());
        }
        write_with_note(
            join_path(out_dir, "associations.svg"),
            svg::heatmap("Pairwise association (Cramer's V)", labels, values,
                         degenerate),
            out);
    }
}

void cmd_project(const std::string& scenario_path, std::ostream& out) {
    const io::Scenario s = io::load_scenario_file(scenario_path);
    const meanfield::EquilibriumReport report =
        meanfield::controlled_equilibrium(s.params, s.policy);
    const meanfield::Trajectory traj =
        meanfield::project(s.sim.x0, s.params, s.policy, s.sim.horizon);

    write_with_note(join_path(s.outputs, "trajectory.csv"),
                    io::trajectory_csv(traj), out);
    write_with_note(join_path(s.outputs, "equilibrium.json"),
                    io::equilibrium_json(report).dump(2) + "\n", out);
    if (s.emit_svg) {
        svg::Series raw{"x_raw", {}, {}};
        svg::Series pool{"x_pool", {}, {}};
        for (const meanfield::TrajectoryPoint& p : traj.points) {
            raw.x.push_back(p.step);
            raw.y.push_back(p.x_raw);
            pool.x.push_back(p.step);
            pool.y.push_back(p.x_pool);
        }
        write_with_note(join_path(s.outputs, "trajectory.svg"),
                        svg::line_chart("Aggression dynamics (mean-field)",
                                        "step (days)", "aggressive fraction",
                                        {raw, pool}),
                        out);
    }
}

void cmd_simulate(const std::string& scenario_path, bool keep_replications,
                  std::ostream& out) {
    const io::Scenario s = io::load_scenario_file(scenario_path);
    const montecarlo::EnsembleTrajectory ens =
        montecarlo::simulate(s.params, s.policy, s.sim, keep_replications);

    write_with_note(join_path(s.outputs, "ensemble.csv"), io::ensemble_csv(ens),
                    out);
    if (s.emit_svg) {
        svg::Series mean{"mean x_raw", {}, {}};
        svg::Band band;
        for (const montecarlo::StepStats& st : ens.steps) {
            mean.x.push_back(st.step);
            mean.y.push_back(st.mean_x_raw);
            band.x.push_back(st.step);
            band.lo.push_back(std::max(0.0, st.mean_x_raw - st.std_x_raw));
            band.hi.push_back(std::min(1.0, st.mean_x_raw + st.std_x_raw));
        }
        write_with_note(
            join_path(s.outputs, "ensemble.svg"),
            svg::line_chart("Aggression dynamics (simulation, mean +/- std)",
                            "step (days)", "aggressive fraction", {mean}, band),
            out);
    }
    if (keep_replications) {
        for (std::size_t r = 0; r < ens.replications.size(); ++r) {
            char name[48];
            std::snprintf(name, sizeof(name), "replication_%03zu.csv", r);
            write_with_note(join_path(s.outputs, name),
                            io::replication_csv(ens.replications[r]), out);
        }
    }
}

void cmd_sweep(const std::string& params_path, std::int64_t n,
               const std::string& add_spec, const std::string& delete_spec,
               const std::string& out_path, std::ostream& out) {
    const meanfield::ModelParams params = io::load_params_file(params_path);
    const std::vector<std::int64_t> adds = parse_grid(add_spec);
    const std::vector<std::int64_t> deletes = parse_grid(delete_spec);

    std::set<std::pair<std::int64_t, std::int64_t>> grid;
    for (std::int64_t a : adds)
        for (std::int64_t d : deletes) grid.emplace(a, d);
    grid.emplace(0, 0);  // uncontrolled baseline
    grid.emplace(0, n);  // full deletion (the floor)

    std::vector<io::SweepRow> rows;
    for (const auto& [add, del] : grid) {
        const meanfield::EquilibriumReport r =
            meanfield::controlled_equilibrium(params, {n, add, del});
        rows.push_back({add, del, r.x_star, r.regime});
    }
    write_with_note(out_path, io::sweep_csv(rows), out);
}

void cmd_synth(const std::string& params_path, int horizon, std::int64_t n,
               double x0, std::uint64_t seed, const std::string& channel,
               const std::string& out_path, std::ostream& out) {
    const meanfield::ModelParams params = io::load_params_file(params_path);
    const corpus::Corpus c = corpus::synthesize_corpus(
        params, horizon, n, x0, seed, corpus::parse_channel(channel));
    write_with_note(out_path, corpus::serialize_corpus(c), out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Aggression-spread estimation, projection and simulation "
                 "for moderated comment threads"};
    app.require_subcommand(1);

    // estimate
    std::string est_corpus, est_channel = "opponent", est_out = "params.json";
    CLI::App* estimate =
        app.add_subcommand("estimate", "Estimate model parameters from a corpus");
    estimate->add_option("corpus", est_corpus, "corpus CSV path")->required();
    estimate->add_option("--channel", est_channel, "opponent|other");
    estimate->add_option("--out", est_out, "output params JSON path");
    estimate->callback(
        [&] { cmd_estimate(est_corpus, est_channel, est_out, out); });

    // analyze
    std::string ana_corpus, ana_dir = ".";
    bool ana_svg = false;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "Marginal distribution and pairwise associations");
    analyze->add_option("corpus", ana_corpus, "corpus CSV path")->required();
    analyze->add_option("--out-dir", ana_dir, "output directory");
    analyze->add_flag("--svg", ana_svg, "emit association heatmap SVG");
    analyze->callback([&] { cmd_analyze(ana_corpus, ana_dir, ana_svg, out); });

    // project
    std::string proj_scenario;
    CLI::App* project = app.add_subcommand(
        "project", "Deterministic mean-field trajectory and equilibrium");
    project->add_option("--scenario", proj_scenario, "scenario JSON path")
        ->required();
    project->callback([&] { cmd_project(proj_scenario, out); });

    // simulate
    std::string sim_scenario;
    bool sim_keep = false;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Stochastic ensemble simulation of the reply process");
    simulate->add_option("--scenario", sim_scenario, "scenario JSON path")
        ->required();
    simulate->add_flag("--keep-replications", sim_keep,
                       "also write one CSV per replication");
    simulate->callback([&] { cmd_simulate(sim_scenario, sim_keep, out); });

    // sweep
    std::string sw_params, sw_add = "0", sw_delete = "0", sw_out = "sweep.csv";
    std::int64_t sw_n = 750;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Controlled equilibria over a grid of moderation budgets");
    sweep->add_option("--params", sw_params, "params JSON path")->required();
    sweep->add_option("--n", sw_n, "organic comments per step");
    sweep->add_option("--add", sw_add, "grid, e.g. 0..150:15 or 75");
    sweep->add_option("--delete", sw_delete, "grid, e.g. 0..150:15 or 75");
    sweep->add_option("--out", sw_out, "output CSV path");
    sweep->callback(
        [&] { cmd_sweep(sw_params, sw_n, sw_add, sw_delete, sw_out, out); });

    // synth
    std::string sy_params, sy_channel = "opponent", sy_out = "corpus.csv";
    int sy_horizon = 30;
    std::int64_t sy_n = 750;
    double sy_x0 = 0.5;
    std::uint64_t sy_seed = 42;
    CLI::App* synth = app.add_subcommand(
        "synth", "Synthesize a labeled corpus from known parameters");
    synth->add_option("--params", sy_params, "params JSON path")->required();
    synth->add_option("--horizon", sy_horizon, "steps");
    synth->add_option("--n", sy_n, "comments per step");
    synth->add_option("--x0", sy_x0, "step-1 virtual pool aggressive fraction");
    synth->add_option("--seed", sy_seed, "random seed");
    synth->add_option("--channel", sy_channel, "opponent|other");
    synth->add_option("--out", sy_out, "output corpus CSV path");
    synth->callback([&] {
        cmd_synth(sy_params, sy_horizon, sy_n, sy_x0, sy_seed, sy_channel,
                  sy_out, out);
    });

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("aggsim");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace aggsim::cli
