#pragma once

#include <vector>

#include "ob/field.hpp"

namespace ob {

// Smooth radial cutoff chi: 1 on B(0,3/4), supported in B(0,4/3),
// non-increasing; built from the exp(-1/t) mollifier so results are
// reproducible bit-for-bit.
double chi_profile(double r);
// ring profile phi(xi) = chi(xi/2) - chi(xi), supported in 3/4 <= |xi| <= 8/3
double phi_profile(double r);

// Dyadic block family Delta_j = phi(2^{-j} D) realized on one grid.
// Multipliers are tabulated per block against the integer |k|^2 of each mode.
class DyadicFilterBank {
  public:
    explicit DyadicFilterBank(const GridSpec& grid);

    const GridSpec& grid() const { return grid_; }
    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }
    int blocks() const { return j_max_ - j_min_ + 1; }

    // Reconstruction S_{j_min} + sum_j Delta_j is exact (to roundoff) for
    // modes with |xi| below this radius.
    double coverage_radius() const { return coverage_radius_; }

    // phi(2^{-j} xi) for the mode with integer |k|^2 = k2
    double block_multiplier(int j, std::size_t k2) const;
    // chi(2^{-j} xi); valid for j in [j_min-1, j_max+3]
    double low_multiplier(int j, std::size_t k2) const;

    SpectralField block(const SpectralField& z, int j) const;
    SpectralField low_pass(const SpectralField& z, int j) const;  // S_j z

    // L^p norm of Delta_j z (vector magnitude for multi-component fields)
    double block_lp(const SpectralField& z, int j, double p) const;
    // all blocks at once (one pass over physical space per block)
    std::vector<double> all_block_lp(const SpectralField& z, double p) const;
    // several p exponents from the same block transforms: out[ip][block]
    std::vector<std::vector<double>> all_block_lp_multi(const SpectralField& z,
                                                        const std::vector<double>& ps) const;

    void check_block(int j) const;

  private:
    GridSpec grid_;
    int j_min_ = 0, j_max_ = 0;
    double coverage_radius_ = 0.0;
    std::size_t k2_size_ = 0;
    std::vector<std::vector<double>> phi_lut_;  // [j - j_min][k2]
    std::vector<std::vector<double>> chi_lut_;  // [j - (j_min-1)][k2]
};

}  // namespace ob
