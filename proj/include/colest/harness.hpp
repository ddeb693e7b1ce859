#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "colest/lower_bound.hpp"
#include "colest/protocols.hpp"

namespace colest {

using ConfigKV = std::vector<std::pair<std::string, std::string>>;

// Shortest decimal rendering that parses back to the same double; every CSV
// cell goes through this so reruns are byte-identical and parse-exact.
std::string format_double(double v);

std::uint64_t fnv1a64(const std::string& bytes);

// Hash of the canonical (sorted key=value) config rendering.
std::uint64_t config_hash(const std::string& cmd, const ConfigKV& kv);

// "# cmd=<cmd> k1=v1 ... config_hash=<hex> master_seed=<seed>"
std::string csv_header_comment(const std::string& cmd, const ConfigKV& kv,
                               std::uint64_t master_seed);

// Nearest-rank percentile: element at index ceil(pct/100 * N) of the sorted
// sample (1-based), clamped to the first element for pct = 0.
double percentile_nearest_rank(const std::vector<double>& sorted_ascending, double pct);

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct ExperimentResult {
    std::string csv;
    std::vector<Series> series; // feed for the optional SVG rendering
    std::string title, x_label, y_label;
};

ExperimentResult threshold_report(int n, int k, Family family, double scale, double tol = 1e-9);
ExperimentResult lower_bound_report(int n, int k, Family family, double scale);

struct CostCurveConfig {
    int n = 1000;
    int k = 100;
    Family family = Family::gaussian;
    std::vector<double> scales{0.5, 1.0, 2.0};
    int points = 200;
};
// J(T) over a T grid per scale, with the optimum and the benchmark attached
// to every row: scale,T,J,J_L,T_star,J_star.
ExperimentResult cost_curve(const CostCurveConfig& cfg);

struct CapacitySweepConfig {
    int n = 1000;
    int k_min = 1;
    int k_max = 0; // 0 means n
    int k_step = 1;
    Family family = Family::gaussian;
    double scale = 1.0;
};
// k,J_star,J_L; the order-statistic moments are integrated once and reused
// across all k through suffix sums.
ExperimentResult capacity_sweep(const CapacitySweepConfig& cfg);

ExperimentResult switching_table(double d_max, double lambda2, const std::vector<double>& deltas);

struct SimulateConfig {
    Scheme scheme = Scheme::hybrid;
    int n = 1000;
    int k = 100;
    Family family = Family::gaussian;
    double scale = 1.0;
    std::string graph = "gen:0.05"; // edge-list path, or gen:<p_edge>
    int rounds = 1000;
    int paths = 100;
    std::uint64_t seed = 1;
    SchemeParams params;
};
// Per-round aggregate across sample paths:
// t,mean_cost,p5,p25,p50,p75,p95,mean_transmitters,collision_rate.
ExperimentResult simulate(const SimulateConfig& cfg);

struct MismatchConfig {
    int n = 1000;
    int k = 100;
    double scale = 1.0; // scale of the true Laplace law
    std::string graph = "gen:0.05";
    int rounds = 20000;
    int paths = 100;
    std::uint64_t seed = 1;
    SchemeParams params;
};
// Laplace measurements, Gaussian-assuming local solvers: paired hybrid and
// pure-quantile traces on matched seeds, hybrid block first.
ExperimentResult mismatch(const MismatchConfig& cfg);

// Edge-list path or "gen:<p_edge>" (generated with a sub-seed of master_seed);
// the node count must match n.
SensorGraph resolve_graph(const std::string& source, int n, std::uint64_t master_seed);

std::string graph_stats_text(const SensorGraph& g, const std::vector<double>& deltas);

// Minimal line-chart rendering of an experiment's series.
std::string render_svg(const ExperimentResult& result, int width = 900, int height = 560);

void write_text_file(const std::string& path, const std::string& content);

} // namespace colest
