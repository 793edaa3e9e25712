#pragma once

#include <string>
#include <vector>

namespace ob {

struct SvgSeries {
    std::vector<double> x, y;
};

// standalone log-log scatter with a fitted power-law line
void write_loglog_svg(const std::string& path, const std::string& title, const SvgSeries& points,
                      double slope, double intercept, const std::string& fit_label);

}  // namespace ob
