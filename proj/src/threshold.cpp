#include "colest/threshold.hpp"

#include <cmath>
#include <limits>

#include "colest/errors.hpp"

namespace colest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

ThresholdProblem::ThresholdProblem(int n, int k, SymmetricDistribution dist)
    : n_(n), k_(k), dist_(dist) {
    if (n < 1) throw invalid_parameter("sensor count n must be at least 1");
    if (k < 1) throw invalid_parameter("channel capacity k must be at least 1");
    if (k > n) throw invalid_parameter("channel capacity k cannot exceed the sensor count");

    log_choose_.reserve(k_);
    const double lg_n = std::lgamma(double(n_));
    for (int l = 0; l < k_; ++l)
        log_choose_.push_back(lg_n - std::lgamma(l + 1.0) - std::lgamma(double(n_ - l)));

    if (k_ < n_) {
        // coefficients (k-1)! (n-1-k)! / (j! (n-1-j)!) of the derivative sum
        log_deriv_coeff_.reserve(k_);
        const double lg_k = std::lgamma(double(k_));
        const double lg_nk = std::lgamma(double(n_ - k_));
        for (int j = 0; j < k_; ++j)
            log_deriv_coeff_.push_back(lg_k + lg_nk - std::lgamma(j + 1.0) -
                                       std::lgamma(double(n_ - j)));
    }
}

double binomial_tail_F(const ThresholdProblem& prob, double T) {
    if (!(T >= 0.0)) throw domain_error("binomial tail takes a nonnegative threshold");
    const int n = prob.n(), k = prob.k();
    const double p = prob.dist().folded_cdf(T);

    // p^0 terms only survive degenerate limits; dispose of them up front so the
    // log-space pass never multiplies 0 * log(0).
    if (p == 0.0) return k == n ? 1.0 : 0.0;
    if (p == 1.0) return 1.0;

    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const auto& lc = prob.log_choose();

    double amax = -kInf;
    for (int l = 0; l < k; ++l) {
        const double a = lc[l] + l * lq + (n - 1 - l) * lp;
        if (a > amax) amax = a;
    }
    double sum = 0.0;
    for (int l = 0; l < k; ++l)
        sum += std::exp(lc[l] + l * lq + (n - 1 - l) * lp - amax);

    const double f = std::exp(amax + std::log(sum));
    return f < 1.0 ? f : 1.0;
}

double cost(const ThresholdProblem& prob, double T) {
    if (!(T >= 0.0)) throw domain_error("cost takes a nonnegative threshold");
    const double m2 = prob.dist().second_moment();
    const double g = prob.dist().truncated_second_moment(T);
    return m2 - g * binomial_tail_F(prob, T);
}

double root_function_h(const ThresholdProblem& prob, double T) {
    const int n = prob.n(), k = prob.k();
    if (k >= n) throw invalid_parameter("the root function requires k < n");
    if (!(T > 0.0)) throw domain_error("the root function is defined for T > 0");

    const auto& d = prob.dist();
    const double p = d.folded_cdf(T);
    const double g = d.truncated_second_moment(T);
    if (p == 0.0) return -g; // the positive part carries a factor of p

    const double lr = std::log(p) - std::log1p(-p); // log odds
    if (!std::isfinite(lr)) return kInf;            // p rounded to 1: far right of the root

    const auto& lc = prob.log_deriv_coeff();
    double amax = -kInf;
    for (int j = 0; j < k; ++j) {
        const double a = lc[j] + (k - 1 - j) * lr;
        if (a > amax) amax = a;
    }
    double sum = 0.0;
    for (int j = 0; j < k; ++j) sum += std::exp(lc[j] + (k - 1 - j) * lr - amax);

    const double log_pos = 2.0 * std::log(T) + std::log(p) + amax + std::log(sum);
    if (g <= 0.0) return std::exp(log_pos);

    // h = exp(log_pos) - g, evaluated as g * expm1(...) so the value keeps
    // relative accuracy near the root instead of cancelling.
    const double diff = log_pos - std::log(g);
    if (diff > 700.0) return kInf;
    return g * std::expm1(diff);
}

Bracket bracket(const ThresholdProblem& prob, double s_bar) {
    if (!(s_bar > 0.0) || !std::isfinite(s_bar))
        throw invalid_parameter("bracket margin s_bar must be positive");
    const int n = prob.n(), k = prob.k();
    if (k >= n) throw invalid_parameter("bracketing requires k < n");

    const auto& d = prob.dist();
    const double lo = d.inverse_folded_cdf(1.0 - double(k) / n);

    double hi = lo;
    double width = 0.0;
    const double arg = 1.0 - (k - s_bar * std::sqrt(2.0 * k)) / (n - 1.0);
    if (arg >= 0.0 && arg < 1.0) {
        const double cand = d.inverse_folded_cdf(arg);
        if (cand > lo) {
            hi = cand;
            width = hi - lo;
        }
    }
    if (width == 0.0) {
        width = std::max(lo, d.scale());
        hi = lo + width;
    }

    int expansions = 0;
    while (root_function_h(prob, hi) < 0.0) {
        if (++expansions > 60)
            throw numerical_failure("no sign change of the cost derivative within the expanded bracket");
        width *= 2.0;
        hi = lo + width;
    }
    return Bracket{lo, hi, s_bar};
}

ThresholdSolution optimal_threshold(const ThresholdProblem& prob, double tol) {
    if (!(tol > 0.0) || !std::isfinite(tol))
        throw invalid_parameter("solver tolerance must be positive");
    if (prob.k() == prob.n()) return ThresholdSolution{0.0, 0.0};

    const Bracket b = bracket(prob);
    double lo = b.lo, hi = b.hi;

    // h(lo) < 0 is guaranteed analytically; equality can only appear through
    // rounding, in which case lo already is the minimizer to float accuracy.
    if (root_function_h(prob, lo) >= 0.0) return ThresholdSolution{lo, cost(prob, lo)};

    while (hi - lo > tol * std::max(1.0, lo)) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (root_function_h(prob, mid) < 0.0 ? lo : hi) = mid;
    }
    const double t_star = 0.5 * (lo + hi);
    return ThresholdSolution{t_star, cost(prob, t_star)};
}

} // namespace colest
