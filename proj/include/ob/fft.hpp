#pragma once

#include <vector>

#include "ob/field.hpp"

namespace ob {

// Physical-space samples of one component, row-major, last axis fastest.
using RealSamples = std::vector<double>;

namespace fft {

// spectral -> physical (real part of the inverse transform)
RealSamples to_phys(const GridSpec& g, const std::vector<cplx>& coeffs);

// physical -> spectral, normalized so that coefficients are mode amplitudes:
// f(x) = sum_k c_k exp(i 2 pi k.x / L)
std::vector<cplx> from_phys(const GridSpec& g, const RealSamples& samples);

// complex in-place transforms (unnormalized backward, normalized forward)
void inverse(const GridSpec& g, const std::vector<cplx>& in, std::vector<cplx>& out);
void forward(const GridSpec& g, const std::vector<cplx>& in, std::vector<cplx>& out);

}  // namespace fft

std::vector<RealSamples> to_phys_all(const SpectralField& f);
SpectralField from_phys_all(const GridSpec& g, const std::vector<RealSamples>& samples);

}  // namespace ob
