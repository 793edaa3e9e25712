#include "ob/potential.hpp"

#include <cmath>

namespace ob {

double PotentialSpec::time_factor(double t) const {
    return profile == PotentialProfile::ModulatedBump ? std::cos(omega * t) : 1.0;
}

double PotentialSpec::time_factor_dot(double t) const {
    return profile == PotentialProfile::ModulatedBump ? -omega * std::sin(omega * t) : 0.0;
}

PotentialSpec PotentialSpec::rescaled(double eps, double nu) const {
    PotentialSpec out = *this;
    out.amplitude *= eps;
    const double lam = eps * nu;
    out.width /= lam;
    for (auto& c : out.center) c /= lam;
    out.omega *= eps * eps * nu;
    return out;
}

namespace {

// 1D periodized Gaussian exp(-y^2/(2w^2)) with a few images on each side
void axis_tables(const GridSpec& g, double center, double w, std::vector<double>& val,
                 std::vector<double>& dval, std::vector<double>& d2val) {
    val.resize(g.n);
    dval.resize(g.n);
    d2val.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double x = i * g.dx();
        double v = 0.0, dv = 0.0, d2v = 0.0;
        for (int img = -2; img <= 2; ++img) {
            const double y = x - center + img * g.L;
            const double e = std::exp(-0.5 * y * y / (w * w));
            v += e;
            dv += -y / (w * w) * e;
            d2v += (y * y / (w * w) - 1.0) / (w * w) * e;
        }
        val[i] = v;
        dval[i] = dv;
        d2val[i] = d2v;
    }
}

}  // namespace

PotentialOnGrid::PotentialOnGrid(const GridSpec& grid, const PotentialSpec& spec) : grid_(grid), spec_(spec) {
    const std::size_t npts = grid_.points();
    value_.assign(npts, 0.0);
    lap_.assign(npts, 0.0);
    for (int d = 0; d < 3; ++d) grad_[d].assign(npts, 0.0);
    if (spec_.is_zero()) return;

    std::array<std::vector<double>, 3> v, dv, d2v;
    for (int d = 0; d < grid_.dim; ++d) axis_tables(grid_, spec_.center[d], spec_.width, v[d], dv[d], d2v[d]);

    std::array<int, 3> idx{0, 0, 0};
    for (std::size_t flat = 0; flat < npts; ++flat) {
        std::size_t f = flat;
        for (int d = grid_.dim - 1; d >= 0; --d) {
            idx[d] = static_cast<int>(f % grid_.n);
            f /= grid_.n;
        }
        double prod = spec_.amplitude;
        for (int d = 0; d < grid_.dim; ++d) prod *= v[d][idx[d]];
        value_[flat] = prod;
        double lap = 0.0;
        for (int d = 0; d < grid_.dim; ++d) {
            double gd = spec_.amplitude;
            double ld = spec_.amplitude;
            for (int e = 0; e < grid_.dim; ++e) {
                gd *= (e == d) ? dv[e][idx[e]] : v[e][idx[e]];
                ld *= (e == d) ? d2v[e][idx[e]] : v[e][idx[e]];
            }
            grad_[d][flat] = gd;
            lap += ld;
        }
        lap_[flat] = lap;
    }
}

SpectralField PotentialOnGrid::value_field(double t) const {
    SpectralField f(grid_, 1);
    if (spec_.is_zero()) {
        f.set_zero();
        return f;
    }
    RealSamples scaled = value_;
    const double m = factor(t);
    for (auto& v : scaled) v *= m;
    f.comp(0) = fft::from_phys(grid_, scaled);
    return f;
}

}  // namespace ob
