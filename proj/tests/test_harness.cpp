#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "colest/errors.hpp"
#include "colest/harness.hpp"
#include "oracles.hpp"

using colest::Family;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) out.push_back(cell);
    return out;
}

double cell(const std::string& line, size_t idx) {
    return std::strtod(split_csv(line).at(idx).c_str(), nullptr);
}

} // namespace

TEST_CASE("format_double round trips exactly") {
    for (const double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678901234567, 0.0, -2.5e17,
                           6.02214076e23, 0.9423687756468397}) {
        const std::string s = colest::format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(colest::format_double(1.0) == "1");
    CHECK(colest::format_double(0.25) == "0.25");
}

TEST_CASE("fnv1a64 known vectors") {
    CHECK(colest::fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(colest::fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(colest::fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("config hash ignores key order but not values") {
    const colest::ConfigKV a{{"n", "10"}, {"k", "3"}};
    const colest::ConfigKV b{{"k", "3"}, {"n", "10"}};
    const colest::ConfigKV c{{"k", "4"}, {"n", "10"}};
    CHECK(colest::config_hash("x", a) == colest::config_hash("x", b));
    CHECK(colest::config_hash("x", a) != colest::config_hash("x", c));
    CHECK(colest::config_hash("x", a) != colest::config_hash("y", a));
}

TEST_CASE("csv header carries command, config hash and seed") {
    const std::string h = colest::csv_header_comment("simulate", {{"n", "10"}}, 42);
    CHECK(h.rfind("# cmd=simulate n=10 config_hash=", 0) == 0);
    CHECK(h.find("master_seed=42\n") != std::string::npos);
}

TEST_CASE("nearest rank percentiles") {
    const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    CHECK(colest::percentile_nearest_rank(v, 5) == 1.0);
    CHECK(colest::percentile_nearest_rank(v, 25) == 3.0);
    CHECK(colest::percentile_nearest_rank(v, 50) == 5.0);
    CHECK(colest::percentile_nearest_rank(v, 75) == 8.0);
    CHECK(colest::percentile_nearest_rank(v, 95) == 10.0);
    CHECK(colest::percentile_nearest_rank(v, 0) == 1.0);
    CHECK(colest::percentile_nearest_rank(v, 100) == 10.0);
    CHECK_THROWS_AS((void)colest::percentile_nearest_rank({}, 50), colest::invalid_parameter);
    CHECK_THROWS_AS((void)colest::percentile_nearest_rank(v, 101), colest::invalid_parameter);

    oracle::SplitMix rng(606);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> sample(1 + rng.next() % 40);
        for (auto& s : sample) s = rng.uni();
        std::vector<double> sorted = sample;
        std::sort(sorted.begin(), sorted.end());
        const double pct = 100.0 * rng.uni();
        CHECK(colest::percentile_nearest_rank(sorted, pct) ==
              oracle::percentile_ref(sample, pct));
    }
}

TEST_CASE("threshold report row matches the solver") {
    const auto res = colest::threshold_report(30, 6, Family::gaussian, 1.0, 1e-9);
    const auto ls = lines_of(res.csv);
    REQUIRE(ls.size() == 3);
    CHECK(ls[0].rfind("# cmd=threshold", 0) == 0);
    CHECK(ls[1] == "n,k,family,scale,T_star,J_star,lo,hi");
    const auto direct = colest::optimal_threshold(
        colest::ThresholdProblem(30, 6, colest::SymmetricDistribution(Family::gaussian, 1.0)));
    CHECK(cell(ls[2], 4) == direct.T_star);
    CHECK(cell(ls[2], 5) == direct.J_star);
    CHECK(cell(ls[2], 6) <= direct.T_star);
    CHECK(cell(ls[2], 7) >= direct.T_star);

    const auto deg = colest::threshold_report(5, 5, Family::laplace, 2.0);
    CHECK(cell(lines_of(deg.csv)[2], 4) == 0.0);
}

TEST_CASE("lower bound report") {
    const auto res = colest::lower_bound_report(12, 4, Family::laplace, 0.9);
    const auto ls = lines_of(res.csv);
    REQUIRE(ls.size() == 3);
    CHECK(ls[1] == "n,k,J_L");
    const double direct = colest::centralized_lower_bound(
        12, 4, colest::SymmetricDistribution(Family::laplace, 0.9));
    CHECK(cell(ls[2], 2) == direct);
}

TEST_CASE("cost curve internal consistency") {
    colest::CostCurveConfig cfg;
    cfg.n = 25;
    cfg.k = 5;
    cfg.scales = {0.5, 1.0};
    cfg.points = 120;
    const auto res = colest::cost_curve(cfg);
    const auto ls = lines_of(res.csv);
    REQUIRE(ls.size() == 2 + 2 * 120);
    CHECK(ls[1] == "scale,T,J,J_L,T_star,J_star");
    for (const double scale : cfg.scales) {
        double grid_min = 1e300, grid_arg = 0.0, t_star = 0.0, j_star = 0.0, j_l = 0.0;
        double first_j = -1.0, last_j = -1.0, last_t = 0.0;
        double spacing = 0.0, prev_t = -1.0;
        for (size_t i = 2; i < ls.size(); ++i) {
            if (cell(ls[i], 0) != scale) continue;
            const double t = cell(ls[i], 1), j = cell(ls[i], 2);
            if (first_j < 0.0) first_j = j;
            if (prev_t >= 0.0) spacing = t - prev_t;
            prev_t = t;
            last_j = j;
            last_t = t;
            j_l = cell(ls[i], 3);
            t_star = cell(ls[i], 4);
            j_star = cell(ls[i], 5);
            if (j < grid_min) {
                grid_min = j;
                grid_arg = t;
            }
        }
        const double m2 = scale * scale;
        CHECK(std::fabs(first_j - m2) < 1e-12);          // T = 0 end
        CHECK(std::fabs(last_j - m2) < 0.05 * m2);       // far tail climbs back
        CHECK(last_t > t_star);
        CHECK(std::fabs(grid_arg - t_star) <= spacing + 1e-12);
        CHECK(j_star <= grid_min + 1e-12);
        CHECK(grid_min > j_l); // decentralized curve sits above the benchmark
    }
}

TEST_CASE("capacity sweep is monotone and bounded below") {
    colest::CapacitySweepConfig cfg;
    cfg.n = 12;
    const auto res = colest::capacity_sweep(cfg);
    const auto ls = lines_of(res.csv);
    REQUIRE(ls.size() == 2 + 12);
    double prev_j = 1e300, prev_l = 1e300;
    for (size_t i = 2; i < ls.size(); ++i) {
        const double j = cell(ls[i], 1), l = cell(ls[i], 2);
        CHECK(j >= l - 1e-10);
        CHECK(j <= prev_j + 1e-12);
        CHECK(l <= prev_l + 1e-12);
        prev_j = j;
        prev_l = l;
    }
    CHECK(cell(ls.back(), 0) == 12.0);
    CHECK(cell(ls.back(), 1) == 0.0); // k = n: everything gets through
    CHECK(cell(ls.back(), 2) == 0.0);
}

TEST_CASE("switching table output") {
    const auto res = colest::switching_table(81.0, 27.35, {1.0, 0.1, 0.01, 0.001, 1e-4, 1e-5});
    CHECK(res.csv.find("delta,R\n") != std::string::npos);
    CHECK(res.csv.find("1,1\n") != std::string::npos);
    CHECK(res.csv.find("0.1,6\n") != std::string::npos);
    CHECK(res.csv.find("0.01,12\n") != std::string::npos);
    CHECK(res.csv.find("0.001,17\n") != std::string::npos);
    CHECK(res.csv.find("0.0001,23\n") != std::string::npos);
    CHECK(res.csv.find("1e-05,28\n") != std::string::npos);
    CHECK_THROWS_AS((void)colest::switching_table(81.0, 200.0, {0.1}),
                    colest::invalid_parameter);
}

TEST_CASE("graph resolution") {
    const colest::SensorGraph g = colest::resolve_graph("gen:0.5", 12, 99);
    CHECK(g.n() == 12);
    // deterministic in the master seed
    const colest::SensorGraph h = colest::resolve_graph("gen:0.5", 12, 99);
    CHECK(g.edges() == h.edges());
    CHECK_THROWS_AS((void)colest::resolve_graph("gen:abc", 12, 1), colest::invalid_parameter);
    CHECK_THROWS_AS((void)colest::resolve_graph("gen:", 12, 1), colest::invalid_parameter);

    const std::string path = "/tmp/colest_test_resolve.txt";
    g.save(path);
    const colest::SensorGraph back = colest::resolve_graph(path, 12, 1);
    CHECK(back.edges() == g.edges());
    CHECK_THROWS_AS((void)colest::resolve_graph(path, 13, 1), colest::invalid_parameter);
    std::remove(path.c_str());
}

TEST_CASE("simulate aggregates paths deterministically") {
    colest::SimulateConfig cfg;
    cfg.scheme = colest::Scheme::consensus;
    cfg.n = 8;
    cfg.k = 2;
    cfg.graph = "gen:0.6";
    cfg.rounds = 10;
    cfg.paths = 6;
    cfg.seed = 5;
    const auto a = colest::simulate(cfg);
    const auto b = colest::simulate(cfg);
    CHECK(a.csv == b.csv);
    const auto ls = lines_of(a.csv);
    REQUIRE(ls.size() == 2 + 11);
    CHECK(ls[1] == "t,mean_cost,p5,p25,p50,p75,p95,mean_transmitters,collision_rate");
    for (size_t i = 2; i < ls.size(); ++i) {
        CHECK(cell(ls[i], 0) == double(i - 2));
        CHECK(cell(ls[i], 2) <= cell(ls[i], 4)); // p5 <= p50
        CHECK(cell(ls[i], 4) <= cell(ls[i], 6)); // p50 <= p95
        const double rate = cell(ls[i], 8);
        CHECK(rate >= 0.0);
        CHECK(rate <= 1.0);
    }
    cfg.seed = 6;
    const auto c = colest::simulate(cfg);
    CHECK(a.csv != c.csv);
}

TEST_CASE("mismatch pairs the two schemes on matched draws") {
    colest::MismatchConfig cfg;
    cfg.n = 10;
    cfg.k = 2;
    cfg.scale = 1.0;
    cfg.graph = "gen:0.5";
    cfg.rounds = 12;
    cfg.paths = 4;
    cfg.seed = 11;
    const auto res = colest::mismatch(cfg);
    const auto ls = lines_of(res.csv);
    REQUIRE(ls.size() == 2 + 2 * 13);
    CHECK(split_csv(ls[2])[0] == "hybrid");
    CHECK(split_csv(ls[2 + 13])[0] == "quantile");
    const auto res2 = colest::mismatch(cfg);
    CHECK(res.csv == res2.csv);
    REQUIRE(res.series.size() == 2);
    CHECK(res.series[0].label == "hybrid");
}

TEST_CASE("svg rendering is plain and deterministic") {
    colest::ExperimentResult r;
    r.title = "demo";
    r.x_label = "t";
    r.y_label = "J";
    r.series.push_back({"one", {{0.0, 1.0}, {1.0, 0.5}, {2.0, 0.25}}});
    r.series.push_back({"two", {{0.0, 0.2}, {1.0, 0.4}, {2.0, 0.6}}});
    const std::string svg = colest::render_svg(r);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("demo") != std::string::npos);
    CHECK(svg == colest::render_svg(r));
    colest::ExperimentResult empty;
    CHECK_THROWS_AS((void)colest::render_svg(empty), colest::invalid_parameter);
}

TEST_CASE("graph stats text") {
    const auto g = colest::SensorGraph::complete(5);
    const std::string text = colest::graph_stats_text(g, {1.0, 0.1});
    CHECK(text.find("n=5\n") != std::string::npos);
    CHECK(text.find("edges=10\n") != std::string::npos);
    CHECK(text.find("d_max=4\n") != std::string::npos);
    CHECK(text.find("lambda2=") != std::string::npos);
    CHECK(text.find("rho=") != std::string::npos);
    CHECK(text.find("delta,R\n") != std::string::npos);
}

TEST_CASE("file writing failure surfaces as io error") {
    CHECK_THROWS_AS(colest::write_text_file("/nonexistent_dir_xyz/out.csv", "data"),
                    colest::io_error);
}
