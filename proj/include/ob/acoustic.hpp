#pragma once

#include "ob/besov.hpp"

namespace ob {

// Exact Fourier solution of the acoustic wave system
//   dt q + sqrt(2) div Qu = 0,   dt Qu + sqrt(2) grad q = 0
// via per-mode rotation of (q, Lambda^{-1} div Qu) at angular rate sqrt(2)|xi|.
struct AcousticState {
    SpectralField q;   // scalar
    SpectralField qu;  // curl-free vector
};

AcousticState acoustic_evolve(const SpectralField& q0, const SpectralField& w0, double t);

// conserved quadratic: |q|_{L^2}^2 + |Qu|_{L^2}^2
double acoustic_energy(const AcousticState& s);

// || (q,Qu) ||_{L~^{2p/(p-2)}_T (B^{s+2/p-1}_{p,1})} / || (q0,Qu0) ||_{B^s_{2,1}}
double strichartz_ratio(const SpectralField& q0, const SpectralField& w0, double p, double s, double T,
                        int samples, const DyadicFilterBank& bank);

// heat maximal regularity: solves dt u - Delta u = f with exact per-mode
// integration (f piecewise linear between samples) and returns
// || u ||_{L~^q_T(B^{sigma+2/q})} / ( |u0|_{B^sigma} + ||f||_{L~^r_T(B^{sigma+2/r-2})} )
double heat_regularity_ratio(const SpectralField& u0, const std::vector<SpectralField>& f_traj, double q,
                             double r, double sigma, double T, const DyadicFilterBank& bank, double p = 2.0);

}  // namespace ob
