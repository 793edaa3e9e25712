#include "ob/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ob/errors.hpp"

namespace ob {

namespace symbols {

Symbol identity() {
    return {[](const std::array<double, 3>&, double) { return cplx(1.0, 0.0); }, false, cplx(1.0, 0.0)};
}

Symbol lambda_pow(double s) {
    Symbol sym;
    sym.m = [s](const std::array<double, 3>&, double r2) { return cplx(std::pow(r2, 0.5 * s), 0.0); };
    sym.singular_at_zero = s < 0;
    sym.value_at_zero = s > 0 ? cplx(0.0, 0.0) : cplx(1.0, 0.0);
    if (s == 0) sym.value_at_zero = cplx(1.0, 0.0);
    return sym;
}

Symbol laplacian() {
    return {[](const std::array<double, 3>&, double r2) { return cplx(-r2, 0.0); }, false, cplx(0.0, 0.0)};
}

Symbol heat(double t, double coef) {
    return {[t, coef](const std::array<double, 3>&, double r2) { return cplx(std::exp(-coef * t * r2), 0.0); },
            false, cplx(1.0, 0.0)};
}

Symbol partial(int axis) {
    return {[axis](const std::array<double, 3>& xi, double) { return cplx(0.0, xi[axis]); }, false,
            cplx(0.0, 0.0)};
}

}  // namespace symbols

SpectralField apply_symbol(const SpectralField& z, const Symbol& m) {
    if (m.singular_at_zero && mean_mode_magnitude(z) > 1e-13 * (1.0 + l2_norm(z)))
        throw SingularSymbolOnMeanMode("apply_symbol: symbol undefined at xi=0 but field has a mean mode");
    SpectralField out(z.grid(), z.rank());
    for (int c = 0; c < z.rank(); ++c) {
        const auto& in = z.comp(c);
        auto& o = out.comp(c);
        for_each_mode(z.grid(), [&](std::size_t i, const std::array<int, 3>&, const std::array<double, 3>& xi,
                                    double r2) {
            if (r2 == 0.0)
                o[i] = m.singular_at_zero ? cplx(0.0, 0.0) : m.value_at_zero * in[i];
            else
                o[i] = m.m(xi, r2) * in[i];
        });
    }
    return out;
}

SpectralField leray_project(const SpectralField& u, LerayPart which) {
    const GridSpec& g = u.grid();
    SpectralField out(g, u.rank());
    for_each_mode(g, [&](std::size_t i, const std::array<int, 3>&, const std::array<double, 3>& xi, double r2) {
        if (r2 == 0.0) {
            for (int c = 0; c < u.rank(); ++c)
                out.comp(c)[i] = which == LerayPart::P ? u.comp(c)[i] : cplx(0.0, 0.0);
            return;
        }
        cplx dot(0.0, 0.0);
        for (int c = 0; c < u.rank(); ++c) dot += xi[c] * u.comp(c)[i];
        dot /= r2;
        for (int c = 0; c < u.rank(); ++c) {
            const cplx q = xi[c] * dot;
            out.comp(c)[i] = which == LerayPart::Q ? q : u.comp(c)[i] - q;
        }
    });
    return out;
}

void dealias_inplace(SpectralField& z) {
    const GridSpec& g = z.grid();
    const int cut = g.dealias_index();
    for_each_mode(g, [&](std::size_t i, const std::array<int, 3>& k, const std::array<double, 3>&, double) {
        bool kill = false;
        for (int d = 0; d < g.dim; ++d)
            if (std::abs(k[d]) > cut) kill = true;
        if (kill)
            for (int c = 0; c < z.rank(); ++c) z.comp(c)[i] = cplx(0.0, 0.0);
    });
}

SpectralField dealias(const SpectralField& z) {
    SpectralField out = z;
    dealias_inplace(out);
    return out;
}

SpectralField gradient(const SpectralField& scalar) {
    const GridSpec& g = scalar.grid();
    SpectralField out(g, g.dim);
    const auto& in = scalar.comp(0);
    for_each_mode(g, [&](std::size_t i, const std::array<int, 3>&, const std::array<double, 3>& xi, double) {
        for (int d = 0; d < g.dim; ++d) out.comp(d)[i] = cplx(0.0, 1.0) * xi[d] * in[i];
    });
    return out;
}

SpectralField divergence(const SpectralField& vec) {
    const GridSpec& g = vec.grid();
    SpectralField out(g, 1);
    for_each_mode(g, [&](std::size_t i, const std::array<int, 3>&, const std::array<double, 3>& xi, double) {
        cplx s(0.0, 0.0);
        for (int d = 0; d < g.dim; ++d) s += cplx(0.0, 1.0) * xi[d] * vec.comp(d)[i];
        out.comp(0)[i] = s;
    });
    return out;
}

double lp_norm_phys(const GridSpec& g, const std::vector<RealSamples>& comps, double p) {
    const std::size_t npts = comps[0].size();
    if (std::isinf(p)) {
        double mx = 0.0;
        for (std::size_t i = 0; i < npts; ++i) {
            double m2 = 0.0;
            for (const auto& c : comps) m2 += c[i] * c[i];
            mx = std::max(mx, m2);
        }
        return std::sqrt(mx);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < npts; ++i) {
        double m2 = 0.0;
        for (const auto& c : comps) m2 += c[i] * c[i];
        acc += std::pow(m2, 0.5 * p);
    }
    return std::pow(g.cell_volume() * acc, 1.0 / p);
}

double lp_norm(const SpectralField& z, double p) {
    return lp_norm_phys(z.grid(), to_phys_all(z), p);
}

double l2_norm(const SpectralField& z) {
    double acc = 0.0;
    for (int c = 0; c < z.rank(); ++c)
        for (const auto& v : z.comp(c)) acc += std::norm(v);
    return std::sqrt(acc * std::pow(z.grid().L, z.grid().dim));
}

double l2_inner(const SpectralField& a, const SpectralField& b) {
    double acc = 0.0;
    for (int c = 0; c < a.rank(); ++c)
        for (std::size_t i = 0; i < a.comp(c).size(); ++i)
            acc += a.comp(c)[i].real() * b.comp(c)[i].real() + a.comp(c)[i].imag() * b.comp(c)[i].imag();
    return acc * std::pow(a.grid().L, a.grid().dim);
}

double mean_mode_magnitude(const SpectralField& z) {
    double m = 0.0;
    for (int c = 0; c < z.rank(); ++c) m = std::max(m, std::abs(z.comp(c)[0]));
    return m;
}

void zero_mean(SpectralField& z) {
    for (int c = 0; c < z.rank(); ++c) z.comp(c)[0] = cplx(0.0, 0.0);
}

std::size_t conjugate_index(const GridSpec& g, std::size_t flat) {
    std::size_t out = 0;
    std::array<int, 3> idx{0, 0, 0};
    std::size_t f = flat;
    for (int d = g.dim - 1; d >= 0; --d) {
        idx[d] = static_cast<int>(f % g.n);
        f /= g.n;
    }
    for (int d = 0; d < g.dim; ++d) {
        int neg = idx[d] == 0 ? 0 : g.n - idx[d];
        out = out * g.n + static_cast<std::size_t>(neg);
    }
    return out;
}

double hermitian_defect(const SpectralField& z) {
    const GridSpec& g = z.grid();
    double mx = 0.0;
    for (int c = 0; c < z.rank(); ++c) {
        const auto& a = z.comp(c);
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::size_t j = conjugate_index(g, i);
            mx = std::max(mx, std::abs(a[j] - std::conj(a[i])));
        }
    }
    return mx;
}

double grad_sup_norm(const SpectralField& vec) {
    const GridSpec& g = vec.grid();
    std::vector<RealSamples> parts;
    for (int c = 0; c < vec.rank(); ++c) {
        SpectralField dc = gradient(vec.component(c));
        auto phys = to_phys_all(dc);
        for (auto& p : phys) parts.push_back(std::move(p));
    }
    return lp_norm_phys(g, parts, std::numeric_limits<double>::infinity());
}

}  // namespace ob
