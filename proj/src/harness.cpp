#include "colest/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "colest/errors.hpp"

namespace colest {

namespace {

// Runs body(0..count-1) across a small worker pool; results keyed by index so
// the outcome is independent of scheduling. First exception wins and rethrows.
template <class Body>
void parallel_for_index(int count, Body&& body) {
    const unsigned hw = std::thread::hardware_concurrency();
    const int workers = int(std::min<long>(std::max(1u, hw), count));
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed)) {
                const int i = next.fetch_add(1);
                if (i >= count) break;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(error_mutex);
                    if (!error) error = std::current_exception();
                    failed.store(true);
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::string kv_join(const ConfigKV& kv) {
    std::string out;
    for (const auto& [key, value] : kv) {
        if (!out.empty()) out += ' ';
        out += key;
        out += '=';
        out += value;
    }
    return out;
}

void append_row(std::string& csv, std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
        if (!first) csv += ',';
        csv += c;
        first = false;
    }
    csv += '\n';
}

std::string fmt_int(long long v) { return std::to_string(v); }

// Aggregates matched-length traces into the per-round CSV rows.
void aggregate_rows(std::string& csv, const std::vector<SchemeTrace>& traces,
                    const std::string& row_prefix) {
    const size_t rounds = traces.front().records.size();
    const size_t paths = traces.size();
    std::vector<double> costs(paths);
    for (size_t t = 0; t < rounds; ++t) {
        double cost_sum = 0.0, tx_sum = 0.0;
        long collisions = 0;
        for (size_t p = 0; p < paths; ++p) {
            const TraceRecord& r = traces[p].records[t];
            costs[p] = r.cost;
            cost_sum += r.cost;
            tx_sum += r.num_transmitters;
            collisions += r.collided ? 1 : 0;
        }
        std::sort(costs.begin(), costs.end());
        csv += row_prefix;
        append_row(csv, {fmt_int(long(t)), format_double(cost_sum / paths),
                         format_double(percentile_nearest_rank(costs, 5)),
                         format_double(percentile_nearest_rank(costs, 25)),
                         format_double(percentile_nearest_rank(costs, 50)),
                         format_double(percentile_nearest_rank(costs, 75)),
                         format_double(percentile_nearest_rank(costs, 95)),
                         format_double(tx_sum / paths),
                         format_double(double(collisions) / paths)});
    }
}

Series mean_cost_series(const std::vector<SchemeTrace>& traces, const std::string& label) {
    Series s;
    s.label = label;
    const size_t rounds = traces.front().records.size();
    s.points.reserve(rounds);
    for (size_t t = 0; t < rounds; ++t) {
        double acc = 0.0;
        for (const auto& tr : traces) acc += tr.records[t].cost;
        s.points.emplace_back(double(t), acc / traces.size());
    }
    return s;
}

std::vector<SchemeTrace> run_paths(Scheme scheme, const ThresholdProblem& prob,
                                   const SensorGraph& g, const SchemeParams& params,
                                   int rounds, int paths, std::uint64_t master_seed) {
    std::vector<SchemeTrace> traces(paths);
    parallel_for_index(paths, [&](int p) {
        traces[p] = run_scheme(scheme, prob, g, params, rounds, derive_seed(master_seed, p));
    });
    return traces;
}

} // namespace

std::string format_double(double v) {
    char buf[48];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t config_hash(const std::string& cmd, const ConfigKV& kv) {
    ConfigKV sorted = kv;
    std::sort(sorted.begin(), sorted.end());
    return fnv1a64(cmd + '\n' + kv_join(sorted));
}

std::string csv_header_comment(const std::string& cmd, const ConfigKV& kv,
                               std::uint64_t master_seed) {
    char hash_buf[24];
    std::snprintf(hash_buf, sizeof hash_buf, "%016llx",
                  static_cast<unsigned long long>(config_hash(cmd, kv)));
    std::string line = "# cmd=" + cmd;
    const std::string joined = kv_join(kv);
    if (!joined.empty()) line += ' ' + joined;
    line += " config_hash=";
    line += hash_buf;
    line += " master_seed=" + std::to_string(master_seed) + "\n";
    return line;
}

double percentile_nearest_rank(const std::vector<double>& sorted_ascending, double pct) {
    if (sorted_ascending.empty()) throw invalid_parameter("percentile of an empty sample");
    if (!(pct >= 0.0) || pct > 100.0)
        throw invalid_parameter("percentile level must lie in [0, 100]");
    const long n = long(sorted_ascending.size());
    long rank = long(std::ceil(pct / 100.0 * n));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    return sorted_ascending[rank - 1];
}

ExperimentResult threshold_report(int n, int k, Family family, double scale, double tol) {
    const SymmetricDistribution dist(family, scale);
    const ThresholdProblem prob(n, k, dist);
    const ThresholdSolution sol = optimal_threshold(prob, tol);
    double lo = 0.0, hi = 0.0;
    if (k < n) {
        const Bracket b = bracket(prob);
        lo = b.lo;
        hi = b.hi;
    }
    ConfigKV kv{{"n", fmt_int(n)},
                {"k", fmt_int(k)},
                {"family", family_name(family)},
                {"scale", format_double(scale)},
                {"tol", format_double(tol)}};
    ExperimentResult res;
    res.csv = csv_header_comment("threshold", kv, 0);
    res.csv += "n,k,family,scale,T_star,J_star,lo,hi\n";
    append_row(res.csv, {fmt_int(n), fmt_int(k), family_name(family), format_double(scale),
                         format_double(sol.T_star), format_double(sol.J_star),
                         format_double(lo), format_double(hi)});
    res.title = "optimal threshold";
    return res;
}

ExperimentResult lower_bound_report(int n, int k, Family family, double scale) {
    const SymmetricDistribution dist(family, scale);
    if (k < 0 || k > n) throw invalid_parameter("the benchmark needs 0 <= k <= n");
    const double jl = centralized_lower_bound(n, k, dist);
    ConfigKV kv{{"n", fmt_int(n)},
                {"k", fmt_int(k)},
                {"family", family_name(family)},
                {"scale", format_double(scale)}};
    ExperimentResult res;
    res.csv = csv_header_comment("lower-bound", kv, 0);
    res.csv += "n,k,J_L\n";
    append_row(res.csv, {fmt_int(n), fmt_int(k), format_double(jl)});
    res.title = "centralized benchmark";
    return res;
}

ExperimentResult cost_curve(const CostCurveConfig& cfg) {
    if (cfg.points < 2) throw invalid_parameter("cost curve needs at least 2 grid points");
    if (cfg.scales.empty()) throw invalid_parameter("cost curve needs at least one scale");

    ConfigKV kv{{"n", fmt_int(cfg.n)},
                {"k", fmt_int(cfg.k)},
                {"family", family_name(cfg.family)},
                {"points", fmt_int(cfg.points)}};
    std::string scales_str;
    for (double s : cfg.scales) {
        if (!scales_str.empty()) scales_str += ';';
        scales_str += format_double(s);
    }
    kv.emplace_back("scales", scales_str);

    ExperimentResult res;
    res.csv = csv_header_comment("cost-curve", kv, 0);
    res.csv += "scale,T,J,J_L,T_star,J_star\n";
    res.title = "cost against threshold";
    res.x_label = "T";
    res.y_label = "J";

    for (double scale : cfg.scales) {
        const SymmetricDistribution dist(cfg.family, scale);
        const ThresholdProblem prob(cfg.n, cfg.k, dist);
        const ThresholdSolution sol = optimal_threshold(prob);
        const double grid_hi =
            cfg.k < cfg.n ? 2.0 * bracket(prob).hi : 4.0 * scale;
        const double jl = centralized_lower_bound(cfg.n, cfg.k, dist);

        Series curve;
        curve.label = "scale=" + format_double(scale);
        curve.points.reserve(cfg.points);
        for (int i = 0; i < cfg.points; ++i) {
            const double t = grid_hi * i / (cfg.points - 1);
            const double j = cost(prob, t);
            curve.points.emplace_back(t, j);
            append_row(res.csv,
                       {format_double(scale), format_double(t), format_double(j),
                        format_double(jl), format_double(sol.T_star),
                        format_double(sol.J_star)});
        }
        res.series.push_back(std::move(curve));
    }
    return res;
}

ExperimentResult capacity_sweep(const CapacitySweepConfig& cfg) {
    const int k_max = cfg.k_max == 0 ? cfg.n : cfg.k_max;
    if (cfg.k_min < 1 || k_max > cfg.n || cfg.k_min > k_max)
        throw invalid_parameter("capacity sweep needs 1 <= k_min <= k_max <= n");
    if (cfg.k_step < 1) throw invalid_parameter("capacity sweep step must be positive");

    const SymmetricDistribution dist(cfg.family, cfg.scale);
    const std::vector<double> moments = order_stat_second_moments(cfg.n, dist);
    std::vector<double> suffix(cfg.n + 1, 0.0); // suffix[j] = sum of moments[j..n-1]
    for (int j = cfg.n - 1; j >= 0; --j) suffix[j] = suffix[j + 1] + moments[j];

    ConfigKV kv{{"n", fmt_int(cfg.n)},
                {"k_min", fmt_int(cfg.k_min)},
                {"k_max", fmt_int(k_max)},
                {"k_step", fmt_int(cfg.k_step)},
                {"family", family_name(cfg.family)},
                {"scale", format_double(cfg.scale)}};
    ExperimentResult res;
    res.csv = csv_header_comment("capacity-sweep", kv, 0);
    res.csv += "k,J_star,J_L\n";
    res.title = "cost against channel capacity";
    res.x_label = "k";
    res.y_label = "J";

    Series opt{"J_star", {}}, bound{"J_L", {}};
    for (int k = cfg.k_min; k <= k_max; k += cfg.k_step) {
        const ThresholdProblem prob(cfg.n, k, dist);
        const ThresholdSolution sol = optimal_threshold(prob);
        const double jl = suffix[k] / cfg.n;
        opt.points.emplace_back(double(k), sol.J_star);
        bound.points.emplace_back(double(k), jl);
        append_row(res.csv, {fmt_int(k), format_double(sol.J_star), format_double(jl)});
    }
    res.series.push_back(std::move(opt));
    res.series.push_back(std::move(bound));
    return res;
}

ExperimentResult switching_table(double d_max, double lambda2, const std::vector<double>& deltas) {
    if (!(d_max > 0.0)) throw invalid_parameter("d_max must be positive");
    const double rho = 1.0 - lambda2 / d_max;
    if (!(rho > 0.0) || !(rho < 1.0))
        throw invalid_parameter("1 - lambda2/d_max must lie in (0, 1)");
    if (deltas.empty()) throw invalid_parameter("need at least one delta");

    ConfigKV kv{{"d_max", format_double(d_max)}, {"lambda2", format_double(lambda2)}};
    ExperimentResult res;
    res.csv = csv_header_comment("switching-table", kv, 0);
    res.csv += "delta,R\n";
    res.title = "switching time";
    for (double delta : deltas)
        append_row(res.csv, {format_double(delta), fmt_int(switching_time(rho, delta))});
    return res;
}

SensorGraph resolve_graph(const std::string& source, int n, std::uint64_t master_seed) {
    if (source.rfind("gen:", 0) == 0) {
        const std::string arg = source.substr(4);
        char* end = nullptr;
        const double p_edge = std::strtod(arg.c_str(), &end);
        if (arg.empty() || end != arg.c_str() + arg.size())
            throw invalid_parameter("bad generator spec '" + source + "' (expected gen:<p_edge>)");
        // fixed sub-stream index far above any path index
        return SensorGraph::erdos_renyi(n, p_edge, derive_seed(master_seed, 0xffffffffull));
    }
    SensorGraph g = SensorGraph::load(source);
    if (g.n() != n)
        throw invalid_parameter("graph file has " + std::to_string(g.n()) +
                                " nodes but n=" + std::to_string(n) + " was requested");
    return g;
}

ExperimentResult simulate(const SimulateConfig& cfg) {
    if (cfg.paths < 1) throw invalid_parameter("need at least one sample path");
    const SymmetricDistribution dist(cfg.family, cfg.scale);
    const ThresholdProblem prob(cfg.n, cfg.k, dist);
    const SensorGraph g = resolve_graph(cfg.graph, cfg.n, cfg.seed);

    const auto traces =
        run_paths(cfg.scheme, prob, g, cfg.params, cfg.rounds, cfg.paths, cfg.seed);

    ConfigKV kv{{"scheme", scheme_name(cfg.scheme)},
                {"n", fmt_int(cfg.n)},
                {"k", fmt_int(cfg.k)},
                {"family", family_name(cfg.family)},
                {"scale", format_double(cfg.scale)},
                {"graph", cfg.graph},
                {"rounds", fmt_int(cfg.rounds)},
                {"paths", fmt_int(cfg.paths)},
                {"alpha", format_double(cfg.params.quantile.alpha)},
                {"tau", format_double(cfg.params.quantile.tau)},
                {"p", format_double(cfg.params.quantile.p)},
                {"delta", format_double(cfg.params.delta)}};
    ExperimentResult res;
    res.csv = csv_header_comment("simulate", kv, cfg.seed);
    res.csv += "t,mean_cost,p5,p25,p50,p75,p95,mean_transmitters,collision_rate\n";
    aggregate_rows(res.csv, traces, "");
    res.series.push_back(mean_cost_series(traces, scheme_name(cfg.scheme)));
    res.title = "scheme trace";
    res.x_label = "t";
    res.y_label = "mean cost";
    return res;
}

ExperimentResult mismatch(const MismatchConfig& cfg) {
    if (cfg.paths < 1) throw invalid_parameter("need at least one sample path");
    const SymmetricDistribution dist(Family::laplace, cfg.scale);
    const ThresholdProblem prob(cfg.n, cfg.k, dist);
    const SensorGraph g = resolve_graph(cfg.graph, cfg.n, cfg.seed);

    // matched seeds: path p of both schemes sees the same measurement draw
    const auto hybrid_traces =
        run_paths(Scheme::hybrid, prob, g, cfg.params, cfg.rounds, cfg.paths, cfg.seed);
    const auto quantile_traces =
        run_paths(Scheme::quantile, prob, g, cfg.params, cfg.rounds, cfg.paths, cfg.seed);

    ConfigKV kv{{"n", fmt_int(cfg.n)},
                {"k", fmt_int(cfg.k)},
                {"scale", format_double(cfg.scale)},
                {"graph", cfg.graph},
                {"rounds", fmt_int(cfg.rounds)},
                {"paths", fmt_int(cfg.paths)},
                {"alpha", format_double(cfg.params.quantile.alpha)},
                {"tau", format_double(cfg.params.quantile.tau)},
                {"p", format_double(cfg.params.quantile.p)},
                {"delta", format_double(cfg.params.delta)}};
    ExperimentResult res;
    res.csv = csv_header_comment("mismatch", kv, cfg.seed);
    res.csv += "scheme,t,mean_cost,p5,p25,p50,p75,p95,mean_transmitters,collision_rate\n";
    aggregate_rows(res.csv, hybrid_traces, "hybrid,");
    aggregate_rows(res.csv, quantile_traces, "quantile,");
    res.series.push_back(mean_cost_series(hybrid_traces, "hybrid"));
    res.series.push_back(mean_cost_series(quantile_traces, "quantile"));
    res.title = "model mismatch";
    res.x_label = "t";
    res.y_label = "mean cost";
    return res;
}

std::string graph_stats_text(const SensorGraph& g, const std::vector<double>& deltas) {
    std::string out;
    out += "n=" + std::to_string(g.n()) + "\n";
    out += "edges=" + std::to_string(g.num_edges()) + "\n";
    out += "d_max=" + std::to_string(g.d_max()) + "\n";
    out += "lambda2=" + (g.n() < 2 ? std::string("nan") : format_double(g.lambda2())) + "\n";
    out += "rho=" + format_double(g.slem()) + "\n";
    out += "delta,R\n";
    for (double delta : deltas) {
        out += format_double(delta);
        out += ',';
        if (g.slem() < 1.0)
            out += std::to_string(switching_time(g.slem(), delta));
        else
            out += "inf"; // periodic consensus matrix: no finite switching time
        out += '\n';
    }
    return out;
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string svg_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

} // namespace

std::string render_svg(const ExperimentResult& result, int width, int height) {
    if (result.series.empty()) throw invalid_parameter("nothing to plot");

    double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
    bool first = true;
    for (const auto& s : result.series)
        for (auto [x, y] : s.points) {
            if (first) {
                x_min = x_max = x;
                y_min = y_max = y;
                first = false;
            }
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    if (first) throw invalid_parameter("nothing to plot");
    if (x_max == x_min) x_max = x_min + 1;
    if (y_max == y_min) y_max = y_min + 1;

    const double ml = 70, mr = 20, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
    auto py = [&](double y) { return mt + ph - (y - y_min) / (y_max - y_min) * ph; };

    std::string svg;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                  "viewBox=\"0 0 %d %d\" font-family=\"sans-serif\" font-size=\"12\">\n",
                  width, height, width, height);
    svg += buf;
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // frame and ticks
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                  "stroke=\"black\"/>\n",
                  ml, mt, pw, ph);
    svg += buf;
    for (int i = 0; i <= 5; ++i) {
        const double xv = x_min + (x_max - x_min) * i / 5.0;
        const double yv = y_min + (y_max - y_min) * i / 5.0;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>"
                      "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%s</text>\n",
                      px(xv), mt + ph, px(xv), mt + ph + 5, px(xv), mt + ph + 20,
                      fmt_tick(xv).c_str());
        svg += buf;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>"
                      "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%s</text>\n",
                      ml - 5, py(yv), ml, py(yv), ml - 8, py(yv) + 4, fmt_tick(yv).c_str());
        svg += buf;
    }

    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">%s</text>\n",
                  ml + pw / 2, svg_escape(result.title).c_str());
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%d\" text-anchor=\"middle\">%s</text>\n", ml + pw / 2,
                  height - 8, svg_escape(result.x_label).c_str());
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"16\" y=\"%.1f\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
                  "%.1f)\">%s</text>\n",
                  mt + ph / 2, mt + ph / 2, svg_escape(result.y_label).c_str());
    svg += buf;

    for (size_t si = 0; si < result.series.size(); ++si) {
        const auto& s = result.series[si];
        const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : s.points) {
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(x), py(y));
            svg += buf;
        }
        svg += "\"/>\n";
        std::snprintf(buf, sizeof buf,
                      "<rect x=\"%.1f\" y=\"%.1f\" width=\"12\" height=\"4\" fill=\"%s\"/>"
                      "<text x=\"%.1f\" y=\"%.1f\">%s</text>\n",
                      ml + pw - 150.0, mt + 12.0 + 18.0 * si, color, ml + pw - 132.0,
                      mt + 17.0 + 18.0 * si, svg_escape(s.label).c_str());
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw io_error("short write to '" + path + "'");
}

} // namespace colest
