#include "ob/randomfields.hpp"

#include <cmath>
#include <numbers>

namespace ob {

std::uint64_t FieldRng::next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double FieldRng::uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double FieldRng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u = uniform(), v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 2.0 * std::numbers::pi * v;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

SpectralField random_band_field(const GridSpec& g, int rank, std::uint64_t seed, double kmin, double kmax,
                                double amplitude, double slope) {
    SpectralField f(g, rank);
    FieldRng rng(seed);
    for (int c = 0; c < rank; ++c) {
        auto& comp = f.comp(c);
        for_each_mode(g, [&](std::size_t i, const std::array<int, 3>& k, const std::array<double, 3>&, double) {
            double kk = 0.0;
            for (int d = 0; d < g.dim; ++d) kk += static_cast<double>(k[d]) * k[d];
            kk = std::sqrt(kk);
            if (kk >= kmin && kk <= kmax) {
                const double damp = slope != 0.0 ? std::pow(kk / std::max(kmin, 1.0), -slope) : 1.0;
                comp[i] = damp * cplx(rng.normal(), rng.normal());
            } else {
                comp[i] = cplx(0.0, 0.0);
            }
        });
    }
    // hermitianize so the field is real-valued
    for (int c = 0; c < rank; ++c) {
        auto& comp = f.comp(c);
        for (std::size_t i = 0; i < comp.size(); ++i) {
            const std::size_t j = conjugate_index(g, i);
            if (j < i) continue;
            const cplx avg = 0.5 * (comp[i] + std::conj(comp[j]));
            comp[i] = avg;
            comp[j] = std::conj(avg);
        }
    }
    zero_mean(f);
    dealias_inplace(f);
    const double n = l2_norm(f);
    if (n > 0.0) f *= amplitude / n;
    return f;
}

SpectralField gaussian_bump_field(const GridSpec& g, double amplitude, double width,
                                  const std::array<double, 3>& center, bool mean_free) {
    std::array<std::vector<double>, 3> axis;
    for (int d = 0; d < g.dim; ++d) {
        axis[d].resize(g.n);
        for (int i = 0; i < g.n; ++i) {
            const double x = i * g.dx();
            double v = 0.0;
            for (int img = -2; img <= 2; ++img) {
                const double y = x - center[d] + img * g.L;
                v += std::exp(-0.5 * y * y / (width * width));
            }
            axis[d][i] = v;
        }
    }
    RealSamples phys(g.points());
    std::array<int, 3> idx{0, 0, 0};
    for (std::size_t flat = 0; flat < phys.size(); ++flat) {
        std::size_t f = flat;
        for (int d = g.dim - 1; d >= 0; --d) {
            idx[d] = static_cast<int>(f % g.n);
            f /= g.n;
        }
        double p = amplitude;
        for (int d = 0; d < g.dim; ++d) p *= axis[d][idx[d]];
        phys[flat] = p;
    }
    SpectralField out(g, 1);
    out.comp(0) = fft::from_phys(g, phys);
    dealias_inplace(out);
    if (mean_free) zero_mean(out);
    return out;
}

SpectralField gradient_bump_field(const GridSpec& g, double amplitude, double width,
                                  const std::array<double, 3>& center) {
    SpectralField psi = gaussian_bump_field(g, amplitude, width, center, true);
    return gradient(psi);
}

SpectralField solenoidal_band_field(const GridSpec& g, std::uint64_t seed, double kmin, double kmax,
                                    double amplitude) {
    SpectralField v = random_band_field(g, g.dim, seed, kmin, kmax, 1.0);
    v = leray_project(v, LerayPart::P);
    zero_mean(v);
    const double n = l2_norm(v);
    if (n > 0.0) v *= amplitude / n;
    return v;
}

}  // namespace ob
