#pragma once

#include <vector>

namespace ob {

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    bool used_inner_points = false;  // coarsest point dropped for curvature
};

// ordinary least squares of log(value) against log(eps)
RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& values);

// applies the pre-asymptotic rule: refit without the coarsest eps when the
// full fit and the inner fit disagree beyond the fit uncertainty
RateFit fit_rate_adaptive(const std::vector<double>& eps, const std::vector<double>& values);

}  // namespace ob
