#pragma once

#include <functional>

#include "ob/fft.hpp"

namespace ob {

// Fourier multiplier m(xi).  Real-valued symbols with m(-xi) = m(xi)
// preserve Hermitian symmetry.
struct Symbol {
    std::function<cplx(const std::array<double, 3>& xi, double r2)> m;
    bool singular_at_zero = false;
    cplx value_at_zero{0.0, 0.0};  // used when not singular
};

namespace symbols {
Symbol identity();
Symbol lambda_pow(double s);            // |xi|^s, singular at 0 for s < 0
Symbol laplacian();                     // -|xi|^2
Symbol heat(double t, double coef = 1.0);  // exp(-coef*t*|xi|^2)
Symbol partial(int axis);               // i*xi_axis
}  // namespace symbols

SpectralField apply_symbol(const SpectralField& z, const Symbol& m);

enum class LerayPart { P, Q };
// P projects onto divergence-free fields, Q onto curl-free (gradient) ones.
// Convention at k=0: P keeps the mean, Q drops it.
SpectralField leray_project(const SpectralField& u, LerayPart which);

SpectralField dealias(const SpectralField& z);
void dealias_inplace(SpectralField& z);

SpectralField gradient(const SpectralField& scalar);
SpectralField divergence(const SpectralField& vec);

// L^p norm by real-space quadrature; vector fields use the pointwise
// Euclidean magnitude.  p = infinity means the grid max.
double lp_norm(const SpectralField& z, double p);
double lp_norm_phys(const GridSpec& g, const std::vector<RealSamples>& comps, double p);

// L^2 norm via Plancherel (exact for band-limited fields)
double l2_norm(const SpectralField& z);
double l2_inner(const SpectralField& a, const SpectralField& b);

double mean_mode_magnitude(const SpectralField& z);
void zero_mean(SpectralField& z);

// max_k |coeff(-k) - conj(coeff(k))| over all components
double hermitian_defect(const SpectralField& z);
std::size_t conjugate_index(const GridSpec& g, std::size_t flat);

// sup-norm of the gradient matrix (pointwise Frobenius, grid max)
double grad_sup_norm(const SpectralField& vec);

}  // namespace ob
