#pragma once

#include <complex>
#include <vector>

#include "ob/grid.hpp"

namespace ob {

using cplx = std::complex<double>;

// Fourier-coefficient representation of a real scalar or vector field on a
// periodic grid.  Coefficients are stored full-spectrum (one complex value
// per mode and component); real-valued fields keep Hermitian symmetry
// coeff(-k) = conj(coeff(k)).
class SpectralField {
  public:
    SpectralField() = default;
    SpectralField(const GridSpec& grid, int rank)
        : grid_(grid), comps_(rank, std::vector<cplx>(grid.points())) {}

    const GridSpec& grid() const { return grid_; }
    int rank() const { return static_cast<int>(comps_.size()); }
    std::size_t modes() const { return grid_.points(); }

    std::vector<cplx>& comp(int c) { return comps_[c]; }
    const std::vector<cplx>& comp(int c) const { return comps_[c]; }

    // scalar accessors (rank 1)
    cplx& operator[](std::size_t i) { return comps_[0][i]; }
    const cplx& operator[](std::size_t i) const { return comps_[0][i]; }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double a);
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double a, SpectralField f) { return f *= a; }

    void set_zero();
    bool empty() const { return comps_.empty(); }

    // pick one component as a scalar field (copy)
    SpectralField component(int c) const;

    // stack several fields into one multi-component field (shared grid)
    static SpectralField stack(const std::vector<const SpectralField*>& parts);

  private:
    GridSpec grid_;
    std::vector<std::vector<cplx>> comps_;
};

// loop over all modes, calling fn(flat_index, k_int[3], xi[3], |xi|^2)
template <typename Fn>
void for_each_mode(const GridSpec& g, Fn&& fn) {
    const double dxi = g.xi_min();
    std::array<int, 3> k{0, 0, 0};
    std::array<double, 3> xi{0.0, 0.0, 0.0};
    if (g.dim == 2) {
        std::size_t flat = 0;
        for (int i0 = 0; i0 < g.n; ++i0) {
            k[0] = g.wavenumber(i0);
            xi[0] = dxi * k[0];
            for (int i1 = 0; i1 < g.n; ++i1, ++flat) {
                k[1] = g.wavenumber(i1);
                xi[1] = dxi * k[1];
                fn(flat, k, xi, xi[0] * xi[0] + xi[1] * xi[1]);
            }
        }
    } else {
        std::size_t flat = 0;
        for (int i0 = 0; i0 < g.n; ++i0) {
            k[0] = g.wavenumber(i0);
            xi[0] = dxi * k[0];
            for (int i1 = 0; i1 < g.n; ++i1) {
                k[1] = g.wavenumber(i1);
                xi[1] = dxi * k[1];
                for (int i2 = 0; i2 < g.n; ++i2, ++flat) {
                    k[2] = g.wavenumber(i2);
                    xi[2] = dxi * k[2];
                    fn(flat, k, xi, xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
                }
            }
        }
    }
}

}  // namespace ob
