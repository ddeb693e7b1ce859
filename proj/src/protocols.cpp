#include "colest/protocols.hpp"

#include <cmath>

#include "colest/errors.hpp"

namespace colest {

Scheme scheme_from_string(const std::string& name) {
    if (name == "consensus") return Scheme::consensus;
    if (name == "quantile") return Scheme::quantile;
    if (name == "hybrid") return Scheme::hybrid;
    throw invalid_parameter("unknown scheme '" + name +
                            "' (expected consensus, quantile or hybrid)");
}

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::consensus: return "consensus";
        case Scheme::quantile: return "quantile";
        default: return "hybrid";
    }
}

double quantile_midpoint(int n, int k) { return (n - k + 0.5) / n; }

void validate_quantile_params(int n, int k, const QuantileParams& params) {
    const double lo = double(n - k) / n, hi = double(n - k + 1) / n;
    if (!(params.p > lo) || !(params.p < hi))
        throw invalid_parameter("quantile level p must lie strictly between (n-k)/n and (n-k+1)/n");
    if (!(params.alpha > 0.0) || !std::isfinite(params.alpha))
        throw invalid_parameter("step constant alpha must be positive");
    if (!(params.tau > 0.5) || params.tau > 1.0)
        throw invalid_parameter("step exponent tau must lie in (0.5, 1]");
}

TraceRecord decide_and_score(const std::vector<double>& x,
                             const std::vector<double>& thresholds, int k) {
    if (x.size() != thresholds.size())
        throw invalid_parameter("measurement and threshold vectors differ in length");
    const int n = int(x.size());
    double total = 0.0, silent = 0.0;
    int m = 0;
    for (int i = 0; i < n; ++i) {
        const double e = x[i] * x[i];
        total += e;
        if (std::abs(x[i]) >= thresholds[i])
            ++m;
        else
            silent += e;
    }
    TraceRecord rec;
    rec.num_transmitters = m;
    rec.collided = m > k;
    rec.cost = (rec.collided ? total : silent) / n;
    return rec;
}

NetworkState init_consensus_state(std::vector<double> x) {
    NetworkState st;
    st.x = std::move(x);
    const size_t n = st.x.size();
    st.z.resize(n);
    st.y.resize(n);
    for (size_t i = 0; i < n; ++i) {
        st.z[i] = std::abs(st.x[i]);
        st.y[i] = st.x[i] * st.x[i];
    }
    return st;
}

NetworkState init_quantile_state(std::vector<double> x) {
    NetworkState st;
    st.x = std::move(x);
    const size_t n = st.x.size();
    st.z.resize(n);
    for (size_t i = 0; i < n; ++i) st.z[i] = std::abs(st.x[i]);
    st.w_cur = st.z;
    st.w_prev = st.z;
    return st;
}

void consensus_round(NetworkState& st, const SensorGraph& g) {
    g.apply_consensus(st.y, st.scratch);
    st.y.swap(st.scratch);
    ++st.t;
}

void consensus_thresholds(NetworkState& st, double unit_t_star, std::vector<double>& out) {
    const size_t n = st.y.size();
    out.resize(n);
    for (size_t i = 0; i < n; ++i) {
        double v = st.y[i];
        if (v < 1e-300) { // degenerate input; keep the scale law defined
            v = 1e-300;
            st.variance_clamped = true;
        }
        out[i] = std::sqrt(v) * unit_t_star;
    }
}

void quantile_round(NetworkState& st, const SensorGraph& g, const QuantileParams& params) {
    if (!(params.p > 0.0 && params.p < 1.0))
        throw invalid_parameter("quantile level p must be resolved to (0, 1) before stepping");
    const int n = int(st.z.size());
    const int t_new = st.t + 1;
    const double eta = params.alpha / std::pow(double(t_new), params.tau);
    const double up = eta * params.p / n;          // applied when z_i is above the estimate
    const double down = eta * (1.0 - params.p) / n;

    std::vector<double>& psi = st.scratch;
    psi.resize(n);
    for (int i = 0; i < n; ++i) {
        const double w_ref = st.w_prev[i];
        double step = 0.0;
        if (st.z[i] > w_ref)
            step = up;
        else if (st.z[i] < w_ref)
            step = -down;
        psi[i] = st.w_cur[i] + step;
    }
    st.w_prev.swap(st.w_cur); // w_cur freed for reuse as the mixing output
    g.apply_metropolis(psi, st.w_cur);
    ++st.t;
}

SchemeTrace run_scheme(Scheme scheme, const ThresholdProblem& prob, const SensorGraph& g,
                       const SchemeParams& params, int rounds, std::uint64_t seed) {
    const int n = prob.n(), k = prob.k();
    if (g.n() != n) throw invalid_parameter("graph size does not match the sensor count");
    if (rounds < 0) throw invalid_parameter("round count must be nonnegative");

    QuantileParams qp = params.quantile;
    if (qp.p < 0.0) qp.p = quantile_midpoint(n, k);
    if (scheme != Scheme::consensus) validate_quantile_params(n, k, qp);

    int switch_round = -1;
    if (scheme == Scheme::hybrid) {
        if (!(g.slem() < 1.0))
            throw configuration_error("hybrid scheme needs a contracting consensus matrix (slem < 1)");
        switch_round = switching_time(g.slem(), params.delta);
    }

    RngStream rng(seed);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = prob.dist().sample(rng);

    // The local re-solve always assumes a Gaussian fit, whatever law the
    // measurements actually follow; thresholds then obey the scale law
    // T_i = sqrt(y_i) * T_unit.
    double unit_t = 0.0;
    if (scheme != Scheme::quantile)
        unit_t = optimal_threshold(
                     ThresholdProblem(n, k, SymmetricDistribution(Family::gaussian, 1.0)))
                     .T_star;

    NetworkState st = scheme == Scheme::quantile ? init_quantile_state(std::move(x))
                                                 : init_consensus_state(std::move(x));
    bool quantile_phase = scheme == Scheme::quantile;

    SchemeTrace out;
    out.records.reserve(rounds + 1);
    std::vector<double> thresholds;

    for (int t = 0; t <= rounds; ++t) {
        if (scheme == Scheme::hybrid && !quantile_phase && st.t == switch_round) {
            consensus_thresholds(st, unit_t, thresholds);
            st.w_cur = thresholds; // w(R) = T*(R): quantile iteration takes over
            st.w_prev = thresholds;
            quantile_phase = true;
        }
        TraceRecord rec;
        if (quantile_phase) {
            rec = decide_and_score(st.x, st.w_cur, k);
        } else {
            consensus_thresholds(st, unit_t, thresholds);
            rec = decide_and_score(st.x, thresholds, k);
        }
        rec.t = t;
        out.records.push_back(rec);
        if (t == rounds) break;
        if (quantile_phase)
            quantile_round(st, g, qp);
        else
            consensus_round(st, g);
    }
    out.x = std::move(st.x);
    out.variance_clamped = st.variance_clamped;
    return out;
}

} // namespace colest
