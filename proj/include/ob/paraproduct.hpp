#pragma once

#include "ob/besov.hpp"

namespace ob {

// Bony paraproduct T_f g = sum_j S_{j-1} f . Delta_j g (products in physical
// space, dealiased).
SpectralField paraproduct(const SpectralField& f, const SpectralField& g, const DyadicFilterBank& bank);

// remainder term T'_g f = sum_j Delta_j f . S_{j+2} g, so that
// paraproduct(f,g) + remainder(g,f) = dealias(f*g) for mean-free fields
SpectralField remainder(const SpectralField& g, const SpectralField& f, const DyadicFilterBank& bank);

// paraconvection T_{v^k} d_k z
SpectralField paraconvection(const SpectralField& v, const SpectralField& z, const DyadicFilterBank& bank);

struct PairingBound {
    double lhs = 0.0;        // |< Delta_j(T_{v^k} d_k z), Delta_j z >_{L^2}|
    double rhs_bound = 0.0;  // |grad v|_inf |Delta_j z|_2 sum_{|j'-j|<=N} |Delta_j' z|_2
};

inline constexpr int kParaconvNeighborhood = 4;

PairingBound paraconv_pairing(const SpectralField& v, const SpectralField& z, int j,
                              const DyadicFilterBank& bank);

}  // namespace ob
