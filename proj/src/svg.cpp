#include "ob/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ob/errors.hpp"

namespace ob {

void write_loglog_svg(const std::string& path, const std::string& title, const SvgSeries& pts, double slope,
                      double intercept, const std::string& fit_label) {
    if (pts.x.empty() || pts.x.size() != pts.y.size()) throw IoFailure("write_loglog_svg: empty series");
    const double W = 560, H = 420, ml = 70, mr = 20, mt = 40, mb = 50;

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (std::size_t i = 0; i < pts.x.size(); ++i) {
        xmin = std::min(xmin, std::log10(pts.x[i]));
        xmax = std::max(xmax, std::log10(pts.x[i]));
        ymin = std::min(ymin, std::log10(pts.y[i]));
        ymax = std::max(ymax, std::log10(pts.y[i]));
    }
    if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
    const double padx = 0.08 * (xmax - xmin), pady = 0.12 * (ymax - ymin);
    xmin -= padx; xmax += padx; ymin -= pady; ymax += pady;

    auto X = [&](double lx) { return ml + (lx - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto Y = [&](double ly) { return H - mb - (ly - ymin) / (ymax - ymin) * (H - mt - mb); };

    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<text x='" << W / 2 << "' y='22' text-anchor='middle' font-size='14' font-family='sans-serif'>"
       << title << "</text>\n";
    os << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='" << H - mb
       << "' stroke='black'/>\n";
    os << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << H - mb << "' stroke='black'/>\n";

    // decade ticks
    for (int d = static_cast<int>(std::ceil(xmin)); d <= static_cast<int>(std::floor(xmax)); ++d) {
        os << "<line x1='" << X(d) << "' y1='" << H - mb << "' x2='" << X(d) << "' y2='" << H - mb + 5
           << "' stroke='black'/>\n";
        os << "<text x='" << X(d) << "' y='" << H - mb + 18
           << "' text-anchor='middle' font-size='11' font-family='sans-serif'>1e" << d << "</text>\n";
    }
    for (int d = static_cast<int>(std::ceil(ymin)); d <= static_cast<int>(std::floor(ymax)); ++d) {
        os << "<line x1='" << ml - 5 << "' y1='" << Y(d) << "' x2='" << ml << "' y2='" << Y(d)
           << "' stroke='black'/>\n";
        os << "<text x='" << ml - 8 << "' y='" << Y(d) + 4
           << "' text-anchor='end' font-size='11' font-family='sans-serif'>1e" << d << "</text>\n";
    }
    os << "<text x='" << (W) / 2 << "' y='" << H - 12
       << "' text-anchor='middle' font-size='12' font-family='sans-serif'>eps</text>\n";

    // fitted line across the x-range: log10(y) = (slope*ln(x) + intercept)/ln(10)
    const double lx0 = xmin + padx / 2, lx1 = xmax - padx / 2;
    auto fit_ly = [&](double lx) { return (slope * lx * std::log(10.0) + intercept) / std::log(10.0); };
    os << "<line x1='" << X(lx0) << "' y1='" << Y(fit_ly(lx0)) << "' x2='" << X(lx1) << "' y2='"
       << Y(fit_ly(lx1)) << "' stroke='#d62728' stroke-width='1.5'/>\n";
    os << "<text x='" << W - mr - 6 << "' y='" << mt + 14
       << "' text-anchor='end' font-size='12' font-family='sans-serif' fill='#d62728'>" << fit_label
       << "</text>\n";

    for (std::size_t i = 0; i < pts.x.size(); ++i)
        os << "<circle cx='" << X(std::log10(pts.x[i])) << "' cy='" << Y(std::log10(pts.y[i]))
           << "' r='4' fill='#1f77b4'/>\n";
    os << "</svg>\n";

    std::ofstream f(path);
    if (!f) throw IoFailure("cannot open " + path);
    f << os.str();
    if (!f) throw IoFailure("short write: " + path);
}

}  // namespace ob
