#include "colest/distributions.hpp"

#include <cmath>

#include "colest/errors.hpp"

namespace colest {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
constexpr double kInvSqrt2 = 0.7071067811865475244008444;

double std_normal_pdf(double u) { return kInvSqrt2Pi * std::exp(-0.5 * u * u); }

} // namespace

Family family_from_string(const std::string& name) {
    if (name == "gaussian") return Family::gaussian;
    if (name == "laplace") return Family::laplace;
    throw invalid_parameter("unknown distribution family '" + name +
                            "' (expected gaussian or laplace)");
}

const char* family_name(Family f) {
    return f == Family::gaussian ? "gaussian" : "laplace";
}

SymmetricDistribution::SymmetricDistribution(Family family, double scale)
    : family_(family), scale_(scale) {
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw invalid_parameter("distribution scale must be a positive finite number");
}

double SymmetricDistribution::second_moment() const noexcept {
    return family_ == Family::gaussian ? scale_ * scale_ : 2.0 * scale_ * scale_;
}

double SymmetricDistribution::pdf(double x) const {
    if (family_ == Family::gaussian) return std_normal_pdf(x / scale_) / scale_;
    return 0.5 / scale_ * std::exp(-std::abs(x) / scale_);
}

double SymmetricDistribution::cdf(double x) const {
    if (family_ == Family::gaussian)
        return 0.5 * std::erfc(-x / scale_ * kInvSqrt2);
    if (x < 0.0) return 0.5 * std::exp(x / scale_);
    return 1.0 - 0.5 * std::exp(-x / scale_);
}

double SymmetricDistribution::folded_cdf(double t) const {
    if (!(t >= 0.0)) throw domain_error("folded cdf takes a nonnegative threshold");
    if (family_ == Family::gaussian) return std::erf(t / scale_ * kInvSqrt2);
    return -std::expm1(-t / scale_);
}

double SymmetricDistribution::folded_survival(double t) const {
    if (!(t >= 0.0)) throw domain_error("folded survival takes a nonnegative threshold");
    if (family_ == Family::gaussian) return std::erfc(t / scale_ * kInvSqrt2);
    return std::exp(-t / scale_);
}

double SymmetricDistribution::inverse_folded_cdf(double q) const {
    if (!(q >= 0.0) || q >= 1.0)
        throw domain_error("folded quantile is defined for probabilities in [0,1)");
    if (q == 0.0) return 0.0;
    if (family_ == Family::laplace) return -scale_ * std::log1p(-q);

    double hi = scale_;
    int guard = 0;
    while (folded_cdf(hi) < q) {
        hi *= 2.0;
        if (++guard > 200)
            throw numerical_failure("folded quantile bracket expansion failed");
    }
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double pm = folded_cdf(mid);
        if (std::abs(pm - q) <= 1e-12) return mid;
        (pm < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double SymmetricDistribution::truncated_second_moment(double t) const {
    if (!(t >= 0.0))
        throw domain_error("truncated second moment takes a nonnegative threshold");
    if (family_ == Family::gaussian) {
        const double u = t / scale_;
        return scale_ * scale_ * (2.0 * u * std_normal_pdf(u) + std::erfc(u * kInvSqrt2));
    }
    const double b = scale_;
    return std::exp(-t / b) * (t * t + 2.0 * b * t + 2.0 * b * b);
}

double SymmetricDistribution::sample(RngStream& rng) const {
    if (family_ == Family::gaussian) return scale_ * rng.normal();
    double u;
    do {
        u = rng.uniform01();
    } while (u == 0.0);
    const double v = u - 0.5;
    const double m = -std::log1p(-2.0 * std::abs(v));
    return (v < 0.0 ? -scale_ : scale_) * m;
}

} // namespace colest
