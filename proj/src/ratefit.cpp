#include "ob/ratefit.hpp"

#include <cmath>

#include "ob/errors.hpp"

namespace ob {

RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& values) {
    const std::size_t n = eps.size();
    if (n < 3 || values.size() != n) throw DegenerateFit("fit_rate: need at least 3 ladder points");
    for (double v : values)
        if (v <= 0.0) throw DegenerateFit("fit_rate: nonpositive value in the ladder");

    double sx = 0.0, sy = 0.0;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::log(eps[i]);
        y[i] = std::log(values[i]);
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw DegenerateFit("fit_rate: degenerate abscissa");
    RateFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += r * r;
    }
    f.stderr_slope = n > 2 ? std::sqrt(ss_res / (static_cast<double>(n) - 2.0) / sxx) : 0.0;
    return f;
}

RateFit fit_rate_adaptive(const std::vector<double>& eps, const std::vector<double>& values) {
    RateFit full = fit_rate(eps, values);
    if (eps.size() < 4) return full;
    // drop the coarsest (largest) eps
    std::size_t imax = 0;
    for (std::size_t i = 1; i < eps.size(); ++i)
        if (eps[i] > eps[imax]) imax = i;
    std::vector<double> e2, v2;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (i == imax) continue;
        e2.push_back(eps[i]);
        v2.push_back(values[i]);
    }
    RateFit inner = fit_rate(e2, v2);
    if (std::abs(inner.slope - full.slope) > std::max(0.1, 2.0 * full.stderr_slope)) {
        inner.used_inner_points = true;
        return inner;
    }
    return full;
}

}  // namespace ob
