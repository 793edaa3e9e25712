#pragma once

#include <cstdint>
#include <functional>

#include "ob/besov.hpp"
#include "ob/boussinesq.hpp"
#include "ob/modesplit.hpp"
#include "ob/randomfields.hpp"
#include "ob/ratefit.hpp"

namespace ob {

struct MeasurePair {
    double p = 4.0;
    double s = 0.5;
};

enum class SystemVariant { Conducting, NonConducting };

// One eps-ladder experiment family: shared well-prepared limit data
// (Theta0, v0) plus eps-independent oscillatory components, simulated per eps
// together with the limit Boussinesq run in lockstep.
struct ExperimentPlan {
    SystemVariant variant = SystemVariant::Conducting;
    GridSpec grid;
    PhysParams phys;  // eps is taken from the ladder
    std::vector<double> eps_ladder;
    PotentialSpec potential;
    double T = 2.0;
    double dt = 0.0;          // 0 selects dt_factor * eps
    double dt_factor = 0.1;
    int measure_every = 1;
    std::vector<MeasurePair> pairs;
    std::uint64_t seed = 1;
    double amplitude = 0.01;
    double width = 3.0;
    bool oscillatory = true;
    bool random_bands = false;

    void validate() const;
    double dt_for(double eps) const { return dt > 0.0 ? dt : dt_factor * eps; }
};

struct InitialData {
    SpectralField Theta0, v0;  // limit pair (v0 divergence-free)
    SpectralField osc0;        // oscillatory scalar: q0 (kappa>0) or R0 (kappa=0)
    SpectralField Qu0;         // curl-free oscillatory velocity
};
InitialData make_initial_data(const ExperimentPlan& plan);

ConductingState assemble_conducting(const InitialData& d);
NonConductingState assemble_nonconducting(const InitialData& d, const PotentialOnGrid& V);

struct MeasuredValue {
    double eps = 0.0;
    double p = 0.0;
    double s = 0.0;
    std::string norm_id;
    double value = 0.0;
    double expected_slope = 0.0;
};

struct FitRecord {
    std::string norm_id;
    double p = 0.0, s = 0.0;
    double expected_slope = 0.0;
    RateFit fit;
    std::vector<double> eps;
    std::vector<double> values;
    bool accepted = true;  // participates in rate acceptance
};

struct ConvergenceReport {
    int schema_version = 1;
    std::string variant;
    std::uint64_t seed = 0;
    std::vector<MeasuredValue> values;
    std::vector<FitRecord> fits;
};

double expected_slope_osc_hybrid(double p, double s);  // 3/p - s
double expected_slope_osc_wave(double p);              // 1/2 - 1/p

// per-eps measurement bundle produced by one run
struct RunMeasurement {
    double eps = 0.0;
    std::vector<MeasuredValue> values;
};

using RunHook = std::function<void(double eps, int step, const void* state)>;

RunMeasurement run_single_eps(const ExperimentPlan& plan, double eps, const InitialData& data);

ConvergenceReport run_convergence(const ExperimentPlan& plan, int threads = 1);

// small-data boundedness monitor: the solution functional
//   X(t) = |b|_{L~inf_t(Bt^{3/2,-}_{eps nu})} + nu int |b|_{Bt^{3/2,+}}
//        + |u|_{L~inf(B^{1/2}_{2,1})}        + nu int |u|_{B^{5/2}_{2,1}}
//        + |theta|_{L~inf(Bt^{-1/2,+})}      + nu int |theta|_{Bt^{3/2,+}}
struct XTrace {
    std::vector<double> t;
    std::vector<double> X;
};
XTrace monitor_conducting_X(const ExperimentPlan& plan, double eps);

// scales the potential amplitude so the discrete smallness functional of the
// data hypotheses equals eta * nu (no-op for the zero potential)
PotentialSpec auto_scale_potential(const PotentialSpec& spec, const GridSpec& grid, const PhysParams& phys,
                                   double eps, double T, double eta);

}  // namespace ob
