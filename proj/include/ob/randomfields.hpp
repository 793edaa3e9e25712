#pragma once

#include <cstdint>

#include "ob/spectral_ops.hpp"

namespace ob {

// Deterministic pseudo-random stream (xoshiro-free: mt19937_64 + Box-Muller
// written out so results do not depend on library internals).
class FieldRng {
  public:
    explicit FieldRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    double uniform();  // in (0,1)
    double normal();

  private:
    std::uint64_t next();
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// mean-free random real field with spectral support kmin <= |k| <= kmax
// (integer mode radii), mode amplitudes damped by (|k|/kmin)^{-slope},
// normalized to unit L^2 norm then scaled
SpectralField random_band_field(const GridSpec& g, int rank, std::uint64_t seed, double kmin, double kmax,
                                double amplitude, double slope = 0.0);

// periodized Gaussian bump amplitude * exp(-|x-c|^2/(2 w^2)); mean removed
// if mean_free
SpectralField gaussian_bump_field(const GridSpec& g, double amplitude, double width,
                                  const std::array<double, 3>& center, bool mean_free);

// curl-free vector field grad(psi) from a Gaussian bump potential
SpectralField gradient_bump_field(const GridSpec& g, double amplitude, double width,
                                  const std::array<double, 3>& center);

// divergence-free projection of randomly phased band-limited vector field
SpectralField solenoidal_band_field(const GridSpec& g, std::uint64_t seed, double kmin, double kmax,
                                    double amplitude);

}  // namespace ob
