#pragma once

#include <cstdint>
#include <vector>

#include "colest/graph.hpp"
#include "colest/threshold.hpp"

namespace colest {

// One round's outcome for one measurement realization.
struct TraceRecord {
    int t = 0;
    double cost = 0.0; // instantaneous normalized MSE
    int num_transmitters = 0;
    bool collided = false;
};

struct QuantileParams {
    double p = -1.0; // target quantile; negative means the (n,k) midpoint default
    double alpha = 1000.0;
    double tau = 0.51;
};

enum class Scheme { consensus, quantile, hybrid };

Scheme scheme_from_string(const std::string& name);
const char* scheme_name(Scheme s);

struct SchemeParams {
    QuantileParams quantile;
    double delta = 1e-4; // hybrid switch tolerance on the consensus residual norm
};

// Per-sensor state for one realization. y carries variance estimates
// (consensus), w_cur/w_prev the two lags of the threshold estimate (quantile).
struct NetworkState {
    std::vector<double> x;
    std::vector<double> z; // |x|
    std::vector<double> y;
    std::vector<double> w_cur;
    std::vector<double> w_prev;
    int t = 0;
    bool variance_clamped = false;
    std::vector<double> scratch;
};

// Midpoint of the admissible quantile interval ((n-k)/n, (n-k+1)/n).
double quantile_midpoint(int n, int k);
void validate_quantile_params(int n, int k, const QuantileParams& params);

// u_i = 1(|x_i| >= thresholds_i); at most k transmissions go through, more
// than k collide and deliver nothing.
TraceRecord decide_and_score(const std::vector<double>& x,
                             const std::vector<double>& thresholds, int k);

NetworkState init_consensus_state(std::vector<double> x); // y_i(0) = x_i^2
NetworkState init_quantile_state(std::vector<double> x);  // w_i(0) = |x_i|

// y <- W y; preserves the average exactly up to roundoff.
void consensus_round(NetworkState& st, const SensorGraph& g);

// thresholds_i = sqrt(y_i) * unit_t_star: each sensor re-solves the threshold
// problem under a Gaussian fit of its variance estimate, via the scale law
// instead of n separate bisections. Nonpositive y is clamped and flagged.
void consensus_thresholds(NetworkState& st, double unit_t_star, std::vector<double>& out);

// One subgradient-plus-mixing step. The subgradient reads the previous-round
// estimate, the mixed linear term the current one; the step size is
// alpha / t^tau with t the global round index being produced.
void quantile_round(NetworkState& st, const SensorGraph& g, const QuantileParams& params);

struct SchemeTrace {
    std::vector<TraceRecord> records; // t = 0..rounds
    std::vector<double> x;            // the realization the path iterated on
    bool variance_clamped = false;
};

// Runs one sample path: draws x from the problem's law, then iterates the
// chosen scheme, scoring every round. The seed fully determines the path.
SchemeTrace run_scheme(Scheme scheme, const ThresholdProblem& prob, const SensorGraph& g,
                       const SchemeParams& params, int rounds, std::uint64_t seed);

} // namespace colest
