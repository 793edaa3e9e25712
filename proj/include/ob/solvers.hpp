#pragma once

#include <Eigen/Dense>
#include <memory>
#include <unordered_map>

#include "ob/linmodes.hpp"
#include "ob/potential.hpp"
#include "ob/spectral_ops.hpp"

namespace ob {

// Physical coefficients.  nu = lambda + 2 mu is the effective viscosity of
// the potential velocity part; reduced coefficients divide by nu.
struct PhysParams {
    double eps = 1.0;
    double mu = 0.5;
    double lambda = 0.0;
    double kappa = 1.0;

    double nu() const { return lambda + 2.0 * mu; }
    double mu_t() const { return mu / nu(); }
    double lambda_t() const { return lambda / nu(); }
    double kappa_t() const { return kappa / nu(); }

    void validate() const {
        if (eps <= 0.0) throw ConfigError("PhysParams: eps must be positive");
        if (mu <= 0.0 || nu() <= 0.0) throw ConfigError("PhysParams: need mu > 0 and lambda + 2 mu > 0");
        if (kappa < 0.0) throw ConfigError("PhysParams: kappa must be nonnegative");
    }
};

// Conducting primitive state: modified density deviation b = a - V, velocity
// u, temperature deviation theta.
struct ConductingState {
    SpectralField b, u, theta;
    double t = 0.0;
};

// Non-conducting primitive state: density deviation a, velocity u, pressure
// deviation R with P = 1 + eps (R + V).
struct NonConductingState {
    SpectralField a, u, R;
    double t = 0.0;
};

struct BoussinesqState {
    SpectralField Theta, v;
    double t = 0.0;
};

struct StepOptions {
    bool disable_nonlinearity = false;
    double cfl = 0.5;          // dt * |u|_inf / dx <= cfl
    double vacuum_floor = 0.1;  // min(1 + eps a) must stay above this
};

// phi_k(z) = (e^z - sum_{m<k} z^m/m!) / z^k
double phi1(double z);
double phi2(double z);
double phi3(double z);

// ETDRK3 coefficient tables for one 3x3 generator (cached per mode shell)
struct Prop3 {
    Eigen::Matrix3d e_half, p1_half;      // e^{Lh/2}, (h/2) phi1(Lh/2)
    Eigen::Matrix3d e_full, p1_full;      // e^{Lh},   h phi1(Lh)
    Eigen::Matrix3d w1, w2, w3;           // h (4phi3 - 3phi2 + phi1), h(4phi2 - 8phi3), h(4phi3 - phi2)
};
Prop3 make_prop3(const Eigen::Matrix3d& L, double h);

struct PropScalar {
    double e_half, p1_half, e_full, p1_full, w1, w2, w3;
};
PropScalar make_prop_scalar(double lam, double h);

// nonlinear tendency of the conducting system (everything but the
// constant-coefficient linear part)
struct ConductingTendency {
    SpectralField b, u, theta;
};
ConductingTendency rhs_conducting(const ConductingState& state, const PhysParams& par,
                                  const PotentialOnGrid& V);

struct NonConductingTendency {
    SpectralField a, u, R;
};
NonConductingTendency rhs_nonconducting(const NonConductingState& state, const PhysParams& par,
                                        const PotentialOnGrid& V);

// One ETDRK3 stepper per trajectory; the exact linear propagator per Fourier
// mode carries the whole 1/eps antisymmetric part, so dt is not constrained
// by eps.
class ConductingStepper {
  public:
    ConductingStepper(const GridSpec& grid, const PhysParams& par, const PotentialOnGrid* V, double dt,
                      const StepOptions& opt = {});
    ConductingState step(const ConductingState& s) const;
    double dt() const { return dt_; }
    const StepOptions& options() const { return opt_; }

  private:
    GridSpec grid_;
    PhysParams par_;
    const PotentialOnGrid* V_;
    double dt_;
    StepOptions opt_;
    std::vector<Prop3> props_;        // indexed by integer |k|^2
    std::vector<PropScalar> heat_w_;  // Pu heat factors
};

class NonConductingStepper {
  public:
    NonConductingStepper(const GridSpec& grid, const PhysParams& par, const PotentialOnGrid* V, double dt,
                         const StepOptions& opt = {});
    NonConductingState step(const NonConductingState& s) const;
    double dt() const { return dt_; }

  private:
    GridSpec grid_;
    PhysParams par_;
    const PotentialOnGrid* V_;
    double dt_;
    StepOptions opt_;
    std::vector<Prop3> props_;
    std::vector<PropScalar> heat_w_;
};

// largest integer |k|^2 on the grid
std::size_t max_k2(const GridSpec& g);

void check_cfl(const GridSpec& g, double dt, double u_inf, double cfl);

}  // namespace ob
