#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace ob {

enum class ModeVariant { Conducting, NonConducting };

// 3x3 generator of one Fourier mode of the linearized system at frequency
// magnitude r.  Conducting rows act on (b,d,theta), non-conducting on
// (a,d,R):
//   conducting:     b' = -r d;  d' = r b - r^2 d + r theta;  theta' = -r d - kt r^2 theta
//   nonconducting:  a' = -r d;  d' = -r^2 d + r R;           R' = -r d
struct ModeMatrix {
    double r = 1.0;
    double kappa_t = 1.0;
    ModeVariant variant = ModeVariant::Conducting;
    Eigen::Matrix3d M;
};

using ModeState = Eigen::Vector3d;

ModeMatrix mode_matrix(double r, double kappa_t, ModeVariant variant);

// exact flow s(t) = exp(t M) s0 (scaling-and-squaring matrix exponential)
ModeState propagate(const ModeMatrix& m, double t, const ModeState& s0);
Eigen::Matrix3d mode_exponential(const ModeMatrix& m, double t);

// alpha weight of the quadratic energy: 2/min(1,kt) - 1
struct EnergyWeights {
    double alpha = 1.0;
    static EnergyWeights for_kappa(double kappa_t);
};

// f^2 = alpha d^2 + (1+alpha) b^2 + (r b - d)^2 + (1+alpha) theta^2
double energy_f(const ModeState& s, double r, const EnergyWeights& w);
// H^2 = 1/2 r^2 b^2 + alpha r^2 d^2 + (kt (1+alpha) - 1/2) r^2 theta^2
double energy_H(const ModeState& s, double r, const EnergyWeights& w, double kappa_t);

struct DecayConstants {
    double C = 0.0;
    double c = 0.0;
};

struct DecaySample {
    double r = 0.0;
    double t = 0.0;
    int state = 0;        // canonical initial state index
    bool high = false;    // regime 2^{2j} min(1,kt) >= 1
    double lhs = 0.0;     // weighted norm at time t
    double rhs0 = 0.0;    // weighted norm at time 0
    double rate = 0.0;    // decay exponent multiplying c
};

struct DecaySweep {
    DecayConstants constants;
    std::vector<DecaySample> samples;
    bool admissible(double C_max, double c_min) const {
        return constants.C <= C_max && constants.c >= c_min;
    }
};

// Sweeps the exact mode flow over r_grid x t_grid x canonical states and
// reports the best lattice witness (C, c) for the regime-weighted decay
// inequalities.  Throws NoAdmissibleConstants if even (1e6, 0.001) fails.
DecaySweep verify_decay(double kappa_t, ModeVariant variant, const std::vector<double>& r_grid,
                        const std::vector<double>& t_grid, double C_budget = 10.0);

std::vector<double> log_spaced(double lo, double hi, int count);
std::vector<double> lin_spaced(double lo, double hi, int count);

// empirical constants of the time-integrated smoothing bounds, high regime
struct IntegratedBounds {
    double heat_ratio = 0.0;   // int r|(d,theta)| against its data bound
    double d_ratio = 0.0;      // r^2 int |d| against its data bound
};
IntegratedBounds integrated_bounds(double kappa_t, ModeVariant variant, double r, int state, double t_max,
                                   int steps);

void write_decay_csv(const std::string& path, ModeVariant variant, double kappa_t, const DecaySweep& sweep);

}  // namespace ob
