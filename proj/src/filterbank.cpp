#include "ob/filterbank.hpp"

#include <cmath>

#include "ob/errors.hpp"
#include "ob/fft.hpp"
#include "ob/spectral_ops.hpp"

namespace ob {

namespace {

double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// smooth 0->1 ramp on [0,1]
double ramp(double t) {
    const double a = bump(t);
    const double b = bump(1.0 - t);
    return a / (a + b);
}

}  // namespace

double chi_profile(double r) {
    constexpr double lo = 0.75;
    constexpr double hi = 4.0 / 3.0;
    if (r <= lo) return 1.0;
    if (r >= hi) return 0.0;
    return 1.0 - ramp((r - lo) / (hi - lo));
}

double phi_profile(double r) { return chi_profile(0.5 * r) - chi_profile(r); }

DyadicFilterBank::DyadicFilterBank(const GridSpec& grid) : grid_(grid) {
    grid_.validate();
    const double xi1 = grid_.xi_min();
    // lowest ring entirely above the fundamental: chi(2^{-j_min} xi) = 0 for |xi| >= xi1
    j_min_ = static_cast<int>(std::floor(std::log2(0.75 * xi1)));
    // top ring caps: 2^{j_max+1} < pi n / L, and the ring must intersect the grid
    const int cap_nyquist = static_cast<int>(std::ceil(std::log2(grid_.xi_nyquist()))) - 1;
    const int cap_content = static_cast<int>(std::floor(std::log2(grid_.xi_dealias_max() / 0.75)));
    j_max_ = std::min(cap_nyquist, cap_content);
    while (std::ldexp(1.0, j_max_ + 1) >= grid_.xi_nyquist()) --j_max_;
    if (j_max_ < j_min_) throw ConfigError("DyadicFilterBank: grid too small for any dyadic block");
    coverage_radius_ = 0.75 * std::ldexp(1.0, j_max_ + 1);

    const int half = grid_.n / 2;
    k2_size_ = static_cast<std::size_t>(grid_.dim) * half * half + 1;
    phi_lut_.assign(static_cast<std::size_t>(blocks()), std::vector<double>(k2_size_));
    chi_lut_.assign(static_cast<std::size_t>(j_max_ + 3 - (j_min_ - 1) + 1), std::vector<double>(k2_size_));
    for (std::size_t k2 = 0; k2 < k2_size_; ++k2) {
        const double r = xi1 * std::sqrt(static_cast<double>(k2));
        for (int j = j_min_; j <= j_max_; ++j)
            phi_lut_[static_cast<std::size_t>(j - j_min_)][k2] = phi_profile(std::ldexp(r, -j));
        for (int j = j_min_ - 1; j <= j_max_ + 3; ++j)
            chi_lut_[static_cast<std::size_t>(j - (j_min_ - 1))][k2] = chi_profile(std::ldexp(r, -j));
    }
}

void DyadicFilterBank::check_block(int j) const {
    if (j < j_min_ || j > j_max_)
        throw BlockOutOfRange("block index " + std::to_string(j) + " outside [" + std::to_string(j_min_) + "," +
                              std::to_string(j_max_) + "]");
}

double DyadicFilterBank::block_multiplier(int j, std::size_t k2) const {
    return phi_lut_[static_cast<std::size_t>(j - j_min_)][k2];
}

double DyadicFilterBank::low_multiplier(int j, std::size_t k2) const {
    if (j > j_max_ + 3) return 1.0;
    if (j < j_min_ - 1) j = j_min_ - 1;  // no grid content below the lowest ring
    return chi_lut_[static_cast<std::size_t>(j - (j_min_ - 1))][k2];
}

namespace {

std::size_t int_k2(const std::array<int, 3>& k, int dim) {
    std::size_t s = 0;
    for (int d = 0; d < dim; ++d) s += static_cast<std::size_t>(k[d]) * k[d];
    return s;
}

template <typename Lut>
SpectralField apply_lut(const SpectralField& z, const GridSpec& g, Lut&& lut) {
    SpectralField out(g, z.rank());
    for (int c = 0; c < z.rank(); ++c) {
        const auto& in = z.comp(c);
        auto& o = out.comp(c);
        for_each_mode(g, [&](std::size_t i, const std::array<int, 3>& k, const std::array<double, 3>&, double) {
            o[i] = lut(int_k2(k, g.dim)) * in[i];
        });
    }
    return out;
}

}  // namespace

SpectralField DyadicFilterBank::block(const SpectralField& z, int j) const {
    check_block(j);
    return apply_lut(z, grid_, [&](std::size_t k2) { return block_multiplier(j, k2); });
}

SpectralField DyadicFilterBank::low_pass(const SpectralField& z, int j) const {
    return apply_lut(z, grid_, [&](std::size_t k2) { return low_multiplier(j, k2); });
}

double DyadicFilterBank::block_lp(const SpectralField& z, int j, double p) const {
    check_block(j);
    return lp_norm(block(z, j), p);
}

std::vector<double> DyadicFilterBank::all_block_lp(const SpectralField& z, double p) const {
    std::vector<double> out(static_cast<std::size_t>(blocks()));
    for (int j = j_min_; j <= j_max_; ++j) out[static_cast<std::size_t>(j - j_min_)] = block_lp(z, j, p);
    return out;
}

std::vector<std::vector<double>> DyadicFilterBank::all_block_lp_multi(const SpectralField& z,
                                                                      const std::vector<double>& ps) const {
    std::vector<std::vector<double>> out(ps.size(), std::vector<double>(static_cast<std::size_t>(blocks())));
    for (int j = j_min_; j <= j_max_; ++j) {
        const auto phys = to_phys_all(block(z, j));
        for (std::size_t ip = 0; ip < ps.size(); ++ip)
            out[ip][static_cast<std::size_t>(j - j_min_)] = lp_norm_phys(grid_, phys, ps[ip]);
    }
    return out;
}

}  // namespace ob
