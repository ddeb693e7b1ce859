// Command-line front end: every subcommand prints CSV (or plain text for
// graph stats) to stdout or --out, plus an optional SVG rendering.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "colest/errors.hpp"
#include "colest/harness.hpp"

namespace {

struct OutputOpts {
    std::string out;
    std::string svg;
};

void add_output_opts(CLI::App* cmd, OutputOpts& opts, bool with_svg) {
    cmd->add_option("--out", opts.out, "write the table to this file instead of stdout");
    if (with_svg) cmd->add_option("--svg", opts.svg, "also write an SVG plot to this file");
}

void emit(const colest::ExperimentResult& res, const OutputOpts& opts) {
    if (opts.out.empty())
        std::cout << res.csv;
    else
        colest::write_text_file(opts.out, res.csv);
    if (!opts.svg.empty()) colest::write_text_file(opts.svg, colest::render_svg(res));
}

void emit_text(const std::string& text, const OutputOpts& opts) {
    if (opts.out.empty())
        std::cout << text;
    else
        colest::write_text_file(opts.out, text);
}

colest::Family parse_family(const std::string& name) {
    return colest::family_from_string(name);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"collision-channel estimation toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read defaults from an INI file (one section per subcommand)");

    std::string family = "gaussian";
    double scale = 1.0;

    // threshold
    auto* cmd_threshold = app.add_subcommand("threshold", "optimal common threshold and cost");
    int th_n = 0, th_k = 0;
    double th_tol = 1e-9;
    OutputOpts th_out;
    cmd_threshold->add_option("--n", th_n, "number of sensors")->required();
    cmd_threshold->add_option("--k", th_k, "channel capacity")->required();
    cmd_threshold->add_option("--family", family, "gaussian|laplace");
    cmd_threshold->add_option("--scale", scale, "distribution scale");
    cmd_threshold->add_option("--tol", th_tol, "relative bracket tolerance");
    add_output_opts(cmd_threshold, th_out, false);

    // lower-bound
    auto* cmd_lb = app.add_subcommand("lower-bound", "centralized top-k benchmark");
    int lb_n = 0, lb_k = 0;
    OutputOpts lb_out;
    cmd_lb->add_option("--n", lb_n, "number of sensors")->required();
    cmd_lb->add_option("--k", lb_k, "channel capacity")->required();
    cmd_lb->add_option("--family", family, "gaussian|laplace");
    cmd_lb->add_option("--scale", scale, "distribution scale");
    add_output_opts(cmd_lb, lb_out, false);

    // cost-curve
    auto* cmd_curve = app.add_subcommand("cost-curve", "cost against threshold, per scale");
    colest::CostCurveConfig curve_cfg;
    OutputOpts curve_out;
    cmd_curve->add_option("--n", curve_cfg.n, "number of sensors");
    cmd_curve->add_option("--k", curve_cfg.k, "channel capacity");
    cmd_curve->add_option("--family", family, "gaussian|laplace");
    cmd_curve->add_option("--scales", curve_cfg.scales, "list of scales");
    cmd_curve->add_option("--points", curve_cfg.points, "grid points per curve");
    add_output_opts(cmd_curve, curve_out, true);

    // capacity-sweep
    auto* cmd_sweep = app.add_subcommand("capacity-sweep", "cost against channel capacity");
    colest::CapacitySweepConfig sweep_cfg;
    OutputOpts sweep_out;
    cmd_sweep->add_option("--n", sweep_cfg.n, "number of sensors");
    cmd_sweep->add_option("--k-min", sweep_cfg.k_min, "first capacity");
    cmd_sweep->add_option("--k-max", sweep_cfg.k_max, "last capacity (0 means n)");
    cmd_sweep->add_option("--k-step", sweep_cfg.k_step, "capacity stride");
    cmd_sweep->add_option("--family", family, "gaussian|laplace");
    cmd_sweep->add_option("--scale", scale, "distribution scale");
    add_output_opts(cmd_sweep, sweep_out, true);

    // graph gen | graph stats
    auto* cmd_graph = app.add_subcommand("graph", "random graph generation and analysis");
    cmd_graph->require_subcommand(1);
    auto* cmd_gen = cmd_graph->add_subcommand("gen", "sample a connected Erdos-Renyi graph");
    int g_n = 0;
    double g_p = 0.0;
    std::uint64_t g_seed = 1;
    std::string g_out_path;
    cmd_gen->add_option("--n", g_n, "number of nodes")->required();
    cmd_gen->add_option("--p-edge", g_p, "edge probability")->required();
    cmd_gen->add_option("--seed", g_seed, "generator seed");
    cmd_gen->add_option("--out", g_out_path, "edge-list output path")->required();
    auto* cmd_stats = cmd_graph->add_subcommand("stats", "spectral summary of an edge list");
    std::string g_in_path;
    OutputOpts stats_out;
    cmd_stats->add_option("--in", g_in_path, "edge-list input path")->required();
    add_output_opts(cmd_stats, stats_out, false);

    // simulate
    auto* cmd_sim = app.add_subcommand("simulate", "run one scheme over many sample paths");
    colest::SimulateConfig sim_cfg;
    std::string sim_scheme = "hybrid";
    OutputOpts sim_out;
    cmd_sim->add_option("--scheme", sim_scheme, "consensus|quantile|hybrid");
    cmd_sim->add_option("--n", sim_cfg.n, "number of sensors");
    cmd_sim->add_option("--k", sim_cfg.k, "channel capacity");
    cmd_sim->add_option("--family", family, "gaussian|laplace");
    cmd_sim->add_option("--scale", scale, "distribution scale");
    cmd_sim->add_option("--graph", sim_cfg.graph, "edge-list path or gen:<p_edge>");
    cmd_sim->add_option("--rounds", sim_cfg.rounds, "rounds per path");
    cmd_sim->add_option("--paths", sim_cfg.paths, "number of sample paths");
    cmd_sim->add_option("--seed", sim_cfg.seed, "master seed");
    cmd_sim->add_option("--alpha", sim_cfg.params.quantile.alpha, "step-size constant");
    cmd_sim->add_option("--tau", sim_cfg.params.quantile.tau, "step-size exponent");
    cmd_sim->add_option("--delta", sim_cfg.params.delta, "hybrid switching tolerance");
    cmd_sim->add_option("--p", sim_cfg.params.quantile.p,
                        "target quantile (default: midpoint of the admissible interval)");
    add_output_opts(cmd_sim, sim_out, true);

    // switching-table
    auto* cmd_table = app.add_subcommand("switching-table", "R(delta) for a consensus rate");
    double t_dmax = 81.0, t_lambda2 = 27.35;
    std::vector<double> t_deltas{1.0, 0.1, 0.01, 0.001, 1e-4, 1e-5};
    OutputOpts table_out;
    cmd_table->add_option("--d-max", t_dmax, "maximum degree");
    cmd_table->add_option("--lambda2", t_lambda2, "algebraic connectivity");
    cmd_table->add_option("--deltas", t_deltas, "list of tolerances");
    add_output_opts(cmd_table, table_out, false);

    // mismatch
    auto* cmd_mm = app.add_subcommand(
        "mismatch", "hybrid vs pure quantile under Laplace data with Gaussian-fitting sensors");
    colest::MismatchConfig mm_cfg;
    OutputOpts mm_out;
    cmd_mm->add_option("--n", mm_cfg.n, "number of sensors");
    cmd_mm->add_option("--k", mm_cfg.k, "channel capacity");
    cmd_mm->add_option("--scale", scale, "Laplace scale of the true law");
    cmd_mm->add_option("--graph", mm_cfg.graph, "edge-list path or gen:<p_edge>");
    cmd_mm->add_option("--rounds", mm_cfg.rounds, "rounds per path");
    cmd_mm->add_option("--paths", mm_cfg.paths, "number of sample paths");
    cmd_mm->add_option("--seed", mm_cfg.seed, "master seed");
    cmd_mm->add_option("--alpha", mm_cfg.params.quantile.alpha, "step-size constant");
    cmd_mm->add_option("--tau", mm_cfg.params.quantile.tau, "step-size exponent");
    cmd_mm->add_option("--delta", mm_cfg.params.delta, "hybrid switching tolerance");
    cmd_mm->add_option("--p", mm_cfg.params.quantile.p,
                       "target quantile (default: midpoint of the admissible interval)");
    add_output_opts(cmd_mm, mm_out, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        std::cerr << "error: invalid-parameter: " << e.what() << "\n";
        return 1;
    }

    try {
        if (cmd_threshold->parsed()) {
            emit(colest::threshold_report(th_n, th_k, parse_family(family), scale, th_tol),
                 th_out);
        } else if (cmd_lb->parsed()) {
            emit(colest::lower_bound_report(lb_n, lb_k, parse_family(family), scale), lb_out);
        } else if (cmd_curve->parsed()) {
            curve_cfg.family = parse_family(family);
            emit(colest::cost_curve(curve_cfg), curve_out);
        } else if (cmd_sweep->parsed()) {
            sweep_cfg.family = parse_family(family);
            sweep_cfg.scale = scale;
            emit(colest::capacity_sweep(sweep_cfg), sweep_out);
        } else if (cmd_gen->parsed()) {
            colest::SensorGraph::erdos_renyi(g_n, g_p, g_seed).save(g_out_path);
        } else if (cmd_stats->parsed()) {
            const colest::SensorGraph g = colest::SensorGraph::load(g_in_path);
            emit_text(colest::graph_stats_text(g, t_deltas), stats_out);
        } else if (cmd_sim->parsed()) {
            sim_cfg.scheme = colest::scheme_from_string(sim_scheme);
            sim_cfg.family = parse_family(family);
            sim_cfg.scale = scale;
            emit(colest::simulate(sim_cfg), sim_out);
        } else if (cmd_table->parsed()) {
            emit(colest::switching_table(t_dmax, t_lambda2, t_deltas), table_out);
        } else if (cmd_mm->parsed()) {
            mm_cfg.scale = scale;
            emit(colest::mismatch(mm_cfg), mm_out);
        }
    } catch (const colest::error& e) {
        std::cerr << "error: " << e.category() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
