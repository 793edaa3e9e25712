#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "ob/errors.hpp"

namespace ob {

// Periodic box [0,L)^dim sampled on n points per axis.  Fourier modes are
// indexed by integer wavevectors k with |k_i| <= n/2; the physical frequency
// is xi = 2*pi*k/L.
struct GridSpec {
    int dim = 3;
    int n = 32;
    double L = 2.0 * std::numbers::pi;
    double dealias_fraction = 2.0 / 3.0;

    void validate() const {
        if (dim != 2 && dim != 3) throw ConfigError("GridSpec: dim must be 2 or 3");
        if (n < 8 || n % 2 != 0) throw ConfigError("GridSpec: n must be even and >= 8");
        if (L <= 0) throw ConfigError("GridSpec: L must be positive");
        if (dealias_fraction <= 0 || dealias_fraction > 1)
            throw ConfigError("GridSpec: dealias_fraction must lie in (0,1]");
    }

    std::size_t points() const {
        std::size_t p = 1;
        for (int d = 0; d < dim; ++d) p *= static_cast<std::size_t>(n);
        return p;
    }
    double dx() const { return L / n; }
    double cell_volume() const { return std::pow(dx(), dim); }
    // fundamental frequency 2*pi/L
    double xi_min() const { return 2.0 * std::numbers::pi / L; }
    // axis Nyquist frequency pi*n/L
    double xi_nyquist() const { return std::numbers::pi * n / L; }
    // largest integer mode index kept by the dealias mask
    int dealias_index() const { return static_cast<int>(std::floor(dealias_fraction * n / 2 + 1e-12)); }
    // largest frequency magnitude surviving the dealias mask (cube corner)
    double xi_dealias_max() const { return xi_min() * dealias_index() * std::sqrt(static_cast<double>(dim)); }

    // signed integer wavenumber of axis index i in [0,n)
    int wavenumber(int i) const { return i <= n / 2 ? i : i - n; }

    // decompose a flat index (last axis fastest) into integer wavenumbers
    std::array<int, 3> wavevector(std::size_t flat) const {
        std::array<int, 3> k{0, 0, 0};
        for (int d = dim - 1; d >= 0; --d) {
            k[d] = wavenumber(static_cast<int>(flat % n));
            flat /= n;
        }
        return k;
    }

    bool operator==(const GridSpec& o) const {
        return dim == o.dim && n == o.n && L == o.L && dealias_fraction == o.dealias_fraction;
    }
};

}  // namespace ob
