#include "colest/lower_bound.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "colest/errors.hpp"

namespace colest {

namespace {

using quadrature = boost::math::quadrature::gauss_kronrod<double, 61>;

// Smallest cutoff with P(|X| >= z) <= tail; everything beyond contributes
// less than the quadrature target to any order-statistic moment because the
// density factor is bounded by the survival mass left in the tail.
double upper_cutoff(const SymmetricDistribution& d, double tail) {
    double hi = d.scale();
    int guard = 0;
    while (d.folded_survival(hi) > tail) {
        hi *= 2.0;
        if (++guard > 2000) throw numerical_failure("tail cutoff search failed to terminate");
    }
    double lo = hi * 0.5;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (d.folded_survival(mid) > tail ? lo : hi) = mid;
    }
    return hi;
}

double order_stat_integral(int n, int i, const SymmetricDistribution& d, double z_hi) {
    // E[Z_(i)^2] = 1/B(n-i+1, i) * int z^2 F^(n-i) (1-F)^(i-1) f_Z dz,
    // assembled in log space so the Beta normalization (huge for mid i at
    // n ~ 1000) never materializes outside the exponent.
    const double neg_log_beta =
        std::lgamma(n + 1.0) - std::lgamma(n - i + 1.0) - std::lgamma(double(i));

    auto integrand = [&](double z) -> double {
        if (z <= 0.0) return 0.0;
        const double fx = d.pdf(z);
        if (fx <= 0.0) return 0.0;
        double acc = neg_log_beta + std::log(2.0 * fx);
        if (i < n) {
            const double F = d.folded_cdf(z);
            if (F <= 0.0) return 0.0;
            acc += (n - i) * std::log(F);
        }
        if (i > 1) {
            const double S = d.folded_survival(z);
            if (S <= 0.0) return 0.0;
            acc += (i - 1) * std::log(S);
        }
        return z * z * std::exp(acc);
    };

    double err = 0.0;
    const double val = quadrature::integrate(integrand, 0.0, z_hi, 15, 1e-11, &err);
    if (!std::isfinite(val) || err > 1e-7 * std::max(1e-3, std::abs(val)))
        throw numerical_failure("order statistic quadrature did not converge");
    return val;
}

} // namespace

double order_stat_second_moment(int n, int i, const SymmetricDistribution& d) {
    if (n < 1) throw invalid_parameter("order statistics need n >= 1");
    if (i < 1 || i > n) throw invalid_parameter("order statistic index must lie in 1..n");
    const double z_hi = upper_cutoff(d, 1e-16 / n);
    return order_stat_integral(n, i, d, z_hi);
}

std::vector<double> order_stat_second_moments(int n, const SymmetricDistribution& d) {
    if (n < 1) throw invalid_parameter("order statistics need n >= 1");
    const double z_hi = upper_cutoff(d, 1e-16 / n);
    std::vector<double> out(n);
    for (int i = 1; i <= n; ++i) out[i - 1] = order_stat_integral(n, i, d, z_hi);
    return out;
}

double centralized_lower_bound(int n, int k, const SymmetricDistribution& d) {
    if (n < 1) throw invalid_parameter("the benchmark needs n >= 1");
    if (k < 0 || k > n) throw invalid_parameter("the benchmark needs 0 <= k <= n");
    if (k == n) return 0.0;
    const double z_hi = upper_cutoff(d, 1e-16 / n);
    double sum = 0.0;
    for (int i = k + 1; i <= n; ++i) sum += order_stat_integral(n, i, d, z_hi);
    return sum / n;
}

McEstimate centralized_lower_bound_mc(int n, int k, const SymmetricDistribution& d,
                                      long trials, RngStream& rng) {
    if (n < 1) throw invalid_parameter("the benchmark needs n >= 1");
    if (k < 0 || k > n) throw invalid_parameter("the benchmark needs 0 <= k <= n");
    if (trials < 2) throw invalid_parameter("need at least 2 trials");

    std::vector<double> sq(n);
    double sum = 0.0, sumsq = 0.0;
    for (long t = 0; t < trials; ++t) {
        for (int j = 0; j < n; ++j) {
            const double x = d.sample(rng);
            sq[j] = x * x;
        }
        // keep the n-k smallest squares: the genie removes the k largest
        std::nth_element(sq.begin(), sq.begin() + (n - k), sq.end());
        double acc = 0.0;
        for (int j = 0; j < n - k; ++j) acc += sq[j];
        const double cost = acc / n;
        sum += cost;
        sumsq += cost * cost;
    }
    const double mean = sum / trials;
    const double var = std::max(0.0, sumsq / trials - mean * mean);
    return McEstimate{mean, std::sqrt(var / trials)};
}

} // namespace colest
