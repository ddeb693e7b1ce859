#include "colest/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "colest/errors.hpp"

namespace colest {

namespace {

bool connected(int n, const std::vector<std::vector<int>>& adj) {
    if (n <= 1) return true;
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
    }
    return reached == n;
}

} // namespace

SensorGraph::SensorGraph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
    if (n < 1) throw invalid_parameter("graph needs at least one node");

    for (auto& [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n || b >= n)
            throw invalid_parameter("edge endpoint out of range");
        if (a == b) throw invalid_parameter("self loops are not allowed");
        if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    adj_.assign(n_, {});
    for (auto [a, b] : edges_) {
        adj_[a].push_back(b);
        adj_[b].push_back(a);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());

    if (!connected(n_, adj_))
        throw invalid_parameter("graph is not connected");

    d_max_ = 0;
    for (int i = 0; i < n_; ++i) d_max_ = std::max(d_max_, degree(i));

    metropolis_.assign(n_, {});
    for (int i = 0; i < n_; ++i) {
        metropolis_[i].reserve(adj_[i].size());
        for (int j : adj_[i])
            metropolis_[i].push_back(1.0 / std::max(degree(i), degree(j)));
    }

    if (n_ == 1) {
        lambda2_ = std::numeric_limits<double>::quiet_NaN();
        laplacian_max_ = 0.0;
        slem_ = 0.0;
        return;
    }

    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i) lap(i, i) = degree(i);
    for (auto [a, b] : edges_) {
        lap(a, b) = -1.0;
        lap(b, a) = -1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw numerical_failure("Laplacian eigenvalue computation did not converge");
    const auto& ev = solver.eigenvalues(); // ascending
    lambda2_ = ev(1);
    laplacian_max_ = ev(n_ - 1);
    slem_ = std::max(std::abs(1.0 - lambda2_ / d_max_),
                     std::abs(1.0 - laplacian_max_ / d_max_));
    // Bipartite-regular graphs are exactly periodic; snap eigensolver noise
    // so the non-contracting case stays detectable by comparison with 1.
    if (std::abs(slem_ - 1.0) < 1e-12) slem_ = 1.0;
}

SensorGraph SensorGraph::erdos_renyi(int n, double p_edge, std::uint64_t seed) {
    if (n < 2) throw invalid_parameter("random graph generation needs n >= 2");
    if (!(p_edge > 0.0) || p_edge > 1.0)
        throw invalid_parameter("edge probability must lie in (0, 1]");

    RngStream rng(seed);
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.uniform01() < p_edge) edges.emplace_back(i, j);

        std::vector<std::vector<int>> adj(n);
        for (auto [a, b] : edges) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        if (connected(n, adj)) return SensorGraph(n, std::move(edges));
    }
    throw generation_failure("no connected graph in 100 draws; edge probability too small for n");
}

SensorGraph SensorGraph::complete(int n) {
    if (n < 1) throw invalid_parameter("graph needs at least one node");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(size_t(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return SensorGraph(n, std::move(edges));
}

SensorGraph SensorGraph::from_edges(int n, std::vector<std::pair<int, int>> edges) {
    return SensorGraph(n, std::move(edges));
}

SensorGraph SensorGraph::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open graph file '" + path + "'");
    std::vector<std::pair<int, int>> edges;
    int max_node = -1;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        long a, b;
        if (!(ls >> a >> b))
            throw io_error("bad edge on line " + std::to_string(lineno) + " of '" + path + "'");
        if (a < 0 || b < 0)
            throw io_error("negative node index on line " + std::to_string(lineno));
        edges.emplace_back(int(a), int(b));
        max_node = std::max(max_node, int(std::max(a, b)));
    }
    if (max_node < 0) throw io_error("graph file '" + path + "' contains no edges");
    return SensorGraph(max_node + 1, std::move(edges));
}

void SensorGraph::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write graph file '" + path + "'");
    for (auto [a, b] : edges_) out << a << ' ' << b << '\n';
    if (!out) throw io_error("short write to graph file '" + path + "'");
}

double SensorGraph::lambda2() const {
    if (n_ < 2) throw domain_error("algebraic connectivity needs at least two nodes");
    return lambda2_;
}

double SensorGraph::laplacian_max() const {
    if (n_ < 2) throw domain_error("Laplacian spectrum needs at least two nodes");
    return laplacian_max_;
}

Eigen::MatrixXd SensorGraph::consensus_matrix() const {
    Eigen::MatrixXd w = Eigen::MatrixXd::Identity(n_, n_);
    if (d_max_ == 0) return w;
    const double inv = 1.0 / d_max_;
    for (auto [a, b] : edges_) {
        w(a, b) += inv;
        w(b, a) += inv;
        w(a, a) -= inv;
        w(b, b) -= inv;
    }
    return w;
}

Eigen::MatrixXd SensorGraph::metropolis_weights() const {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i) {
        double off = 0.0;
        for (size_t t = 0; t < adj_[i].size(); ++t) {
            c(i, adj_[i][t]) = metropolis_[i][t];
            off += metropolis_[i][t];
        }
        c(i, i) = 1.0 - off;
    }
    return c;
}

void SensorGraph::apply_consensus(const std::vector<double>& y, std::vector<double>& out) const {
    out.resize(n_);
    if (d_max_ == 0) {
        out = y;
        return;
    }
    const double inv = 1.0 / d_max_;
    for (int i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (int j : adj_[i]) acc += y[j] - y[i];
        out[i] = y[i] + inv * acc;
    }
}

void SensorGraph::apply_metropolis(const std::vector<double>& psi, std::vector<double>& out) const {
    out.resize(n_);
    for (int i = 0; i < n_; ++i) {
        double acc = psi[i];
        const auto& nb = adj_[i];
        const auto& wt = metropolis_[i];
        for (size_t t = 0; t < nb.size(); ++t) acc += wt[t] * (psi[nb[t]] - psi[i]);
        out[i] = acc;
    }
}

int switching_time(double rho, double delta) {
    if (!(delta > 0.0) || delta > 1.0)
        throw invalid_parameter("switching tolerance delta must lie in (0, 1]");
    if (!(rho >= 0.0) || rho >= 1.0)
        throw numerical_failure("consensus does not contract: spectral modulus is not below 1");
    if (rho == 0.0 || delta == 1.0) return 1;

    long r = std::lround(std::max(1.0, std::ceil(std::log(delta) / std::log(rho))));
    if (r > std::numeric_limits<int>::max() / 2)
        throw numerical_failure("switching time exceeds the integer range");
    // correct for rounding at exact-power boundaries against the defining set
    while (r > 1 && std::pow(rho, double(r - 1)) <= delta) --r;
    while (std::pow(rho, double(r)) > delta) ++r;
    return int(r);
}

} // namespace colest
