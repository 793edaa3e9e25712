#pragma once

#include "ob/boussinesq.hpp"

namespace ob {

// Oscillating / incompressible decomposition: q = (theta+b)/sqrt2 and
// Theta = (theta-b)/sqrt2 pair with Qu and Pu.
struct ModeSplit {
    SpectralField q;      // oscillating scalar (R for the kappa=0 system)
    SpectralField Theta;  // incompressible scalar
    SpectralField Qu;
    SpectralField Pu;
};

ModeSplit mode_split(const ConductingState& s);
// kappa = 0: Theta = a - R - V(t)
ModeSplit mode_split(const NonConductingState& s, const PotentialOnGrid& V);

// reconstruction b = (q - Theta)/sqrt2, theta = (q + Theta)/sqrt2, u = Pu + Qu
ConductingState mode_merge(const ModeSplit& m, double t);

// relative L^2 residual of sqrt2 P(theta grad a) = P(Theta grad V) +
// P(q grad V) + 2 P(q grad b), with a = b + V
double relation_check(const ConductingState& s, const PotentialOnGrid& V);

// change of unknown (b,u,theta)(t,x) = eps (b',u',theta')(eps^2 nu t, eps nu x):
// maps a state at coefficients (eps,nu) onto the eps=nu=1 box L' = L/(eps nu).
// Requires eps*nu to be a power of two so blocks shift exactly.
ConductingState rescale_state(const ConductingState& s, double eps, double nu);
ConductingState unrescale_state(const ConductingState& s, double eps, double nu, const GridSpec& orig);
GridSpec rescaled_grid(const GridSpec& g, double eps, double nu);

}  // namespace ob
