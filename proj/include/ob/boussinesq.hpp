#pragma once

#include "ob/solvers.hpp"

namespace ob {

enum class BoussinesqVariant {
    Conducting,  // dt Theta + v.grad Theta - (kappa/2) lap Theta = (sqrt2/2)(dt + v.grad) V
    Transport,   // dt Theta + v.grad Theta = 0,  v forced by +Theta grad V
    Tilde,       // conducting system rewritten for Theta~ = Theta - (sqrt2/2) V
};

// Incompressible limit solver: v is kept divergence-free by Leray projection,
// Theta advances with exact diffusion factors (or pure spectral advection for
// the transport variant).
class BoussinesqStepper {
  public:
    BoussinesqStepper(const GridSpec& grid, const PhysParams& par, const PotentialOnGrid* V, double dt,
                      BoussinesqVariant variant, const StepOptions& opt = {});
    BoussinesqState step(const BoussinesqState& s) const;
    double dt() const { return dt_; }

  private:
    struct Tendency {
        SpectralField Theta, v;
    };
    Tendency rhs(const BoussinesqState& s) const;

    GridSpec grid_;
    PhysParams par_;
    const PotentialOnGrid* V_;
    double dt_;
    BoussinesqVariant variant_;
    StepOptions opt_;
    std::vector<PropScalar> prop_theta_, prop_v_;
};

double divergence_residual(const SpectralField& v);

}  // namespace ob
