#pragma once

#include <vector>

#include "colest/distributions.hpp"

namespace colest {

// Problem instance: n sensors that share a collision channel of capacity k,
// each observing an i.i.d. draw from the same symmetric law, and all using a
// common transmit threshold on |x|.
class ThresholdProblem {
public:
    ThresholdProblem(int n, int k, SymmetricDistribution dist);

    int n() const noexcept { return n_; }
    int k() const noexcept { return k_; }
    const SymmetricDistribution& dist() const noexcept { return dist_; }

    // log C(n-1, l) for l = 0..k-1 and log of the derivative sum coefficients;
    // cached here so the optimizer's inner loop stays allocation and lgamma free.
    const std::vector<double>& log_choose() const noexcept { return log_choose_; }
    const std::vector<double>& log_deriv_coeff() const noexcept { return log_deriv_coeff_; }

private:
    int n_;
    int k_;
    SymmetricDistribution dist_;
    std::vector<double> log_choose_;
    std::vector<double> log_deriv_coeff_;
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double s_bar = 3.0;
};

struct ThresholdSolution {
    double T_star = 0.0;
    double J_star = 0.0;
};

// P(at most k-1 of the other n-1 sensors transmit) when everyone thresholds
// at T. Non-decreasing in T, in [0,1]. Evaluated in log space.
double binomial_tail_F(const ThresholdProblem& prob, double T);

// Normalized MSE of the common-threshold scheme:
// E[X^2] - E[X^2 1(|X| >= T)] * F(T).
double cost(const ThresholdProblem& prob, double T);

// Strictly increasing in T with the same sign as d/dT cost; its unique zero
// is the optimal threshold. Defined for T > 0 and k < n.
double root_function_h(const ThresholdProblem& prob, double T);

// Search interval with h(lo) <= 0 <= h(hi). lo is the |X|-quantile at 1 - k/n;
// hi comes from a binomial tail bound with margin s_bar, falling back to
// geometric expansion when that bound is vacuous or too tight.
Bracket bracket(const ThresholdProblem& prob, double s_bar = 3.0);

// Unique minimizer of cost via sign bisection of h on the bracket.
// k = n degenerates to (0, 0): capacity admits every sensor.
ThresholdSolution optimal_threshold(const ThresholdProblem& prob, double tol = 1e-9);

} // namespace colest
