#pragma once

#include <vector>

#include "colest/distributions.hpp"
#include "colest/threshold.hpp"

namespace colest {

// Second moment of the i-th largest magnitude among n i.i.d. draws,
// E[Z_(i)^2] with Z_(1) >= ... >= Z_(n), by adaptive quadrature of the
// order-statistic density. 1 <= i <= n.
double order_stat_second_moment(int n, int i, const SymmetricDistribution& d);

// All of E[Z_(i)^2], i = 1..n, sharing one integration cutoff. Used by sweeps
// that need every suffix sum.
std::vector<double> order_stat_second_moments(int n, const SymmetricDistribution& d);

// Benchmark MSE of the genie scheme that always delivers the k largest
// magnitudes: (1/n) sum_{i=k+1..n} E[Z_(i)^2]. Accepts k = 0 (nobody
// transmits) through k = n (empty sum).
double centralized_lower_bound(int n, int k, const SymmetricDistribution& d);

inline double centralized_lower_bound(const ThresholdProblem& prob) {
    return centralized_lower_bound(prob.n(), prob.k(), prob.dist());
}

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

// Sort-based Monte Carlo estimate of the same benchmark with its standard
// error. Quadrature stays the default; this is the escape hatch for n large
// enough that n separate integrals stop being attractive.
McEstimate centralized_lower_bound_mc(int n, int k, const SymmetricDistribution& d,
                                      long trials, RngStream& rng);

} // namespace colest
