#pragma once

#include <array>

#include "ob/fft.hpp"

namespace ob {

enum class PotentialProfile { Zero, GaussianBump, ModulatedBump };

// External potential V(t,x) = m(t) * A * exp(-|x-c|^2 / (2 w^2)), periodized.
// The modulated profile uses m(t) = cos(omega t); the plain bump is static.
struct PotentialSpec {
    PotentialProfile profile = PotentialProfile::Zero;
    double amplitude = 0.0;
    double width = 1.0;
    std::array<double, 3> center{0.0, 0.0, 0.0};
    double omega = 0.0;  // time modulation frequency (ModulatedBump)

    double time_factor(double t) const;
    double time_factor_dot(double t) const;
    bool is_zero() const { return profile == PotentialProfile::Zero || amplitude == 0.0; }

    PotentialSpec rescaled(double eps, double nu) const;  // (t,x) -> (eps^2 nu t, eps nu x), x eps
};

// Grid samples of the static profile and its derivatives; time dependence is
// a scalar factor applied on use.
class PotentialOnGrid {
  public:
    PotentialOnGrid(const GridSpec& grid, const PotentialSpec& spec);

    const PotentialSpec& spec() const { return spec_; }
    const GridSpec& grid() const { return grid_; }
    bool is_zero() const { return spec_.is_zero(); }

    // physical-space samples, already scaled by the profile amplitude
    const RealSamples& profile() const { return value_; }
    const RealSamples& grad(int axis) const { return grad_[axis]; }
    const RealSamples& laplacian() const { return lap_; }

    double factor(double t) const { return spec_.time_factor(t); }
    double factor_dot(double t) const { return spec_.time_factor_dot(t); }

    SpectralField value_field(double t) const;  // V(t) as a spectral field

  private:
    GridSpec grid_;
    PotentialSpec spec_;
    RealSamples value_, lap_;
    std::array<RealSamples, 3> grad_;
};

}  // namespace ob
