#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "colest/rng.hpp"

namespace colest {

// Connected undirected communication graph. Laplacian spectrum is computed
// once at construction, so all reads (including from worker threads) are
// contention free. The single-node graph is allowed as the trivial case.
class SensorGraph {
public:
    static SensorGraph erdos_renyi(int n, double p_edge, std::uint64_t seed);
    static SensorGraph complete(int n);
    static SensorGraph from_edges(int n, std::vector<std::pair<int, int>> edges);
    static SensorGraph load(const std::string& path);

    void save(const std::string& path) const;

    int n() const noexcept { return n_; }
    long num_edges() const noexcept { return long(edges_.size()); }
    int degree(int i) const { return int(adj_[i].size()); }
    int d_max() const noexcept { return d_max_; }
    const std::vector<int>& neighbors(int i) const { return adj_[i]; }
    const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }

    // Second smallest Laplacian eigenvalue (algebraic connectivity); n >= 2.
    double lambda2() const;
    // Largest Laplacian eigenvalue.
    double laplacian_max() const;
    // Second largest eigenvalue modulus of the consensus matrix W = I - L/d_max.
    // Equals 1 on bipartite-regular corner cases such as the two-node path.
    double slem() const noexcept { return slem_; }

    Eigen::MatrixXd consensus_matrix() const;
    Eigen::MatrixXd metropolis_weights() const;

    // out = W y without materializing W.
    void apply_consensus(const std::vector<double>& y, std::vector<double>& out) const;
    // out = C psi with Metropolis weights c_ij = 1 / max(deg_i, deg_j).
    void apply_metropolis(const std::vector<double>& psi, std::vector<double>& out) const;

private:
    SensorGraph(int n, std::vector<std::pair<int, int>> edges);

    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
    std::vector<std::vector<double>> metropolis_; // parallel to adj_
    int d_max_ = 0;
    double lambda2_ = 0.0;
    double laplacian_max_ = 0.0;
    double slem_ = 0.0;
};

// Smallest t >= 1 with rho^t <= delta: the number of consensus rounds after
// which ||W^t - (1/n) 1 1^T||_2 drops below delta. rho in [0,1), delta in (0,1].
int switching_time(double rho, double delta);

} // namespace colest
