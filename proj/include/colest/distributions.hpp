#pragma once

#include <string>

#include "colest/rng.hpp"

namespace colest {

enum class Family { gaussian, laplace };

Family family_from_string(const std::string& name);
const char* family_name(Family f);

// Zero-mean symmetric law with strictly positive density: Gaussian(sigma) or
// Laplace(b). Immutable after construction. Folded quantities refer to the
// magnitude Z = |X|.
class SymmetricDistribution {
public:
    SymmetricDistribution(Family family, double scale);

    Family family() const noexcept { return family_; }
    double scale() const noexcept { return scale_; }

    double second_moment() const noexcept; // sigma^2, resp. 2 b^2

    double pdf(double x) const;
    double cdf(double x) const;

    double folded_cdf(double t) const;      // P(|X| < t), t >= 0
    double folded_survival(double t) const; // P(|X| >= t); accurate where folded_cdf ~ 1

    // Quantile of |X|: the t with folded_cdf(t) = q, q in [0,1). Analytic for
    // Laplace; safeguarded bisection (1e-12 on the probability scale) otherwise.
    double inverse_folded_cdf(double q) const;

    double truncated_second_moment(double t) const; // E[X^2 1(|X| >= t)]

    double sample(RngStream& rng) const;

private:
    Family family_;
    double scale_;
};

} // namespace colest
