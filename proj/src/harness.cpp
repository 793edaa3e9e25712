#include "ob/harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <sstream>

namespace ob {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double expected_slope_osc_hybrid(double p, double s) { return 3.0 / p - s; }
double expected_slope_osc_wave(double p) { return 0.5 - 1.0 / p; }

void ExperimentPlan::validate() const {
    grid.validate();
    phys.validate();
    if (eps_ladder.empty()) throw ConfigError("ExperimentPlan: empty eps ladder");
    for (double e : eps_ladder)
        if (e <= 0.0) throw ConfigError("ExperimentPlan: eps must be positive");
    if (T <= 0.0) throw ConfigError("ExperimentPlan: T must be positive");
    if (measure_every < 1) throw ConfigError("ExperimentPlan: measure_every must be >= 1");
    if (pairs.empty()) throw ConfigError("ExperimentPlan: no measurement pairs");
    for (const auto& pr : pairs) {
        if (pr.p < 2.0) throw ConfigError("ExperimentPlan: p must be >= 2");
        const double lo = -0.5 + 4.0 / pr.p, hi = 3.0 / pr.p;
        if (variant == SystemVariant::Conducting && (pr.s < lo - 1e-12 || pr.s > hi + 1e-12))
            throw ConfigError("ExperimentPlan: s outside the admissible range [-1/2+4/p, 3/p]");
    }
    if (variant == SystemVariant::Conducting && phys.kappa <= 0.0)
        throw ConfigError("ExperimentPlan: conducting family needs kappa > 0");
}

InitialData make_initial_data(const ExperimentPlan& plan) {
    const GridSpec& g = plan.grid;
    const double mid = 0.5 * plan.grid.L;
    const std::array<double, 3> c0{mid, mid, mid};
    const std::array<double, 3> c1{mid + 0.15 * plan.width, mid - 0.1 * plan.width, mid + 0.05 * plan.width};

    InitialData d;
    d.Theta0 = gaussian_bump_field(g, plan.amplitude, plan.width, c0, true);
    // divergence-free limit velocity from bump stream potentials
    {
        SpectralField raw(g, g.dim);
        for (int c = 0; c < g.dim; ++c) {
            std::array<double, 3> cc = c1;
            cc[c % g.dim] += 0.2 * plan.width * (c + 1);
            raw.comp(c) = gaussian_bump_field(g, plan.amplitude, plan.width, cc, true).comp(0);
        }
        d.v0 = leray_project(raw, LerayPart::P);
        zero_mean(d.v0);
    }
    if (plan.oscillatory) {
        d.osc0 = gaussian_bump_field(g, plan.amplitude, 0.8 * plan.width, c1, true);
        d.Qu0 = gradient_bump_field(g, plan.amplitude * plan.width, 0.9 * plan.width, c0);
    } else {
        d.osc0 = SpectralField(g, 1);
        d.osc0.set_zero();
        d.Qu0 = SpectralField(g, g.dim);
        d.Qu0.set_zero();
    }
    if (plan.random_bands) {
        d.Theta0 += random_band_field(g, 1, plan.seed + 11, 1.0, 4.0, 0.3 * plan.amplitude);
        d.osc0 += random_band_field(g, 1, plan.seed + 13, 1.0, 4.0, 0.3 * plan.amplitude);
    }
    return d;
}

ConductingState assemble_conducting(const InitialData& d) {
    const GridSpec& g = d.Theta0.grid();
    const double is2 = 1.0 / std::sqrt(2.0);
    ConductingState s{SpectralField(g, 1), SpectralField(g, g.dim), SpectralField(g, 1), 0.0};
    for (std::size_t i = 0; i < s.b.modes(); ++i) {
        s.b[i] = is2 * (d.osc0[i] - d.Theta0[i]);
        s.theta[i] = is2 * (d.osc0[i] + d.Theta0[i]);
    }
    s.u = d.v0 + d.Qu0;
    return s;
}

NonConductingState assemble_nonconducting(const InitialData& d, const PotentialOnGrid& V) {
    const GridSpec& g = d.Theta0.grid();
    NonConductingState s{SpectralField(g, 1), SpectralField(g, g.dim), SpectralField(g, 1), 0.0};
    s.R = d.osc0;
    s.a = d.Theta0 + s.R;
    if (!V.is_zero()) {
        SpectralField vf = V.value_field(0.0);
        zero_mean(vf);  // a stays mean-free; the mean of V sits in the background
        s.a += vf;
    }
    s.u = d.v0 + d.Qu0;
    return s;
}

namespace {

std::string norm_label(const std::string& field, const std::string& norm) { return field + ":" + norm; }

// all tracked block series for one run, keyed by (field, p)
struct SeriesBank {
    std::map<std::pair<std::string, double>, BlockSeries> series;

    BlockSeries& at(const std::string& field, double p) { return series[{field, p}]; }
    const BlockSeries& at(const std::string& field, double p) const { return series.at({field, p}); }
};

void append_series_multi(SeriesBank& bank, const DyadicFilterBank& fb, const std::string& field,
                         const std::vector<double>& ps, const SpectralField& z) {
    const auto vals = fb.all_block_lp_multi(z, ps);
    for (std::size_t ip = 0; ip < ps.size(); ++ip) bank.at(field, ps[ip]).append(vals[ip]);
}

}  // namespace

RunMeasurement run_single_eps(const ExperimentPlan& plan, double eps, const InitialData& data) {
    const GridSpec& g = plan.grid;
    const DyadicFilterBank fb(g);
    PhysParams par = plan.phys;
    par.eps = eps;
    const double nu = par.nu();
    const double alpha = eps * nu;
    const double dt = plan.dt_for(eps);
    const int steps = std::max(1, static_cast<int>(std::llround(plan.T / dt)));
    const double dt_eff = plan.T / steps;

    PotentialOnGrid V(g, plan.potential);
    const bool conducting = plan.variant == SystemVariant::Conducting;

    // distinct p values requested
    std::vector<double> ps;
    for (const auto& pr : plan.pairs)
        if (std::find(ps.begin(), ps.end(), pr.p) == ps.end()) ps.push_back(pr.p);

    SeriesBank bank;
    const double measure_dt = dt_eff * plan.measure_every;

    // limit run in lockstep (conducting kappa>0 pairs with the diffusive
    // Boussinesq; kappa=0 with the transport variant)
    BoussinesqStepper limit_stepper(g, par, &V, dt_eff,
                                    conducting ? BoussinesqVariant::Conducting : BoussinesqVariant::Transport);
    BoussinesqState limit{data.Theta0, data.v0, 0.0};

    auto measure_conducting = [&](const ConductingState& cs) {
        ModeSplit m = mode_split(cs);
        SpectralField dTheta = m.Theta - limit.Theta;
        SpectralField dv = m.Pu - limit.v;
        append_series_multi(bank, fb, "q", ps, m.q);
        append_series_multi(bank, fb, "Qu", ps, m.Qu);
        append_series_multi(bank, fb, "dTheta", ps, dTheta);
        append_series_multi(bank, fb, "dv", ps, dv);
    };
    auto measure_nonconducting = [&](const NonConductingState& ns) {
        ModeSplit m = mode_split(ns, V);
        SpectralField pair = SpectralField::stack({&m.Qu, &m.q});
        SpectralField dTheta = m.Theta - limit.Theta;
        SpectralField dv = m.Pu - limit.v;
        append_series_multi(bank, fb, "QuR", ps, pair);
        append_series_multi(bank, fb, "dTheta", ps, dTheta);
        append_series_multi(bank, fb, "dv", ps, dv);
    };

    if (conducting) {
        ConductingStepper stepper(g, par, &V, dt_eff);
        ConductingState s = assemble_conducting(data);
        measure_conducting(s);
        for (int k = 1; k <= steps; ++k) {
            s = stepper.step(s);
            limit = limit_stepper.step(limit);
            if (k % plan.measure_every == 0) measure_conducting(s);
        }
    } else {
        NonConductingStepper stepper(g, par, &V, dt_eff);
        NonConductingState s = assemble_nonconducting(data, V);
        measure_nonconducting(s);
        for (int k = 1; k <= steps; ++k) {
            s = stepper.step(s);
            limit = limit_stepper.step(limit);
            if (k % plan.measure_every == 0) measure_nonconducting(s);
        }
    }

    for (auto& [key, series] : bank.series) {
        series.j_min = fb.j_min();
        series.dt = measure_dt;
        series.p = key.second;
    }

    RunMeasurement out;
    out.eps = eps;
    auto push = [&](const MeasurePair& pr, const std::string& field, const std::string& label, double value,
                    double slope) {
        MeasuredValue v;
        v.eps = eps;
        v.p = pr.p;
        v.s = pr.s;
        v.norm_id = norm_label(field, label);
        v.value = value;
        v.expected_slope = slope;
        out.values.push_back(v);
    };

    for (const auto& pr : plan.pairs) {
        const double p = pr.p, s = pr.s;
        if (conducting) {
            const double slope = expected_slope_osc_hybrid(p, s);
            BesovParams sp_q{s - 1.0, p, HybridSign::Plus, alpha};
            push(pr, "q", "nu^{1/2} L~2(Bt^{s-1,+})", std::sqrt(nu) * time_besov_norm(bank.at("q", p), 2.0, sp_q, fb),
                 slope);
            BesovParams sp_qu{s, p, HybridSign::None, 1.0};
            push(pr, "Qu", "nu^{1/2} L~2(B^s)", std::sqrt(nu) * time_besov_norm(bank.at("Qu", p), 2.0, sp_qu, fb),
                 slope);

            BesovParams sp_t1{s - 1.0, p, HybridSign::Plus, alpha};
            BesovParams sp_t2{s - 2.0, p, HybridSign::Plus, alpha};
            BesovParams sp_v1{s, p, HybridSign::Plus, alpha};
            const double c1 = std::sqrt(nu) * time_besov_norm(bank.at("dTheta", p), 2.0, sp_t1, fb);
            const double c2 = time_besov_norm(bank.at("dTheta", p), kInf, sp_t2, fb);
            const double c3 = nu * time_besov_norm(bank.at("dv", p), 1.0, sp_v1, fb);
            const double c4 = time_besov_norm(bank.at("dv", p), kInf, sp_t2, fb);
            push(pr, "dTheta", "nu^{1/2} L~2(Bt^{s-1,+})", c1, slope);
            push(pr, "dTheta", "L~inf(Bt^{s-2,+})", c2, slope);
            push(pr, "dv", "nu L1(Bt^{s,+})", c3, slope);
            push(pr, "dv", "L~inf(Bt^{s-2,+})", c4, slope);
            push(pr, "delta", "incompressible combo", c1 + c2 + c3 + c4, slope);
        } else {
            const double slope = expected_slope_osc_wave(p);
            const double qexp = p == 2.0 ? kInf : 2.0 * p / (p - 2.0);
            BesovParams sp{2.0 / p - 0.5, p, HybridSign::None, 1.0};
            push(pr, "QuR", "L~{2p/(p-2)}(B^{2/p-1/2})", time_besov_norm(bank.at("QuR", p), qexp, sp, fb), slope);

            // local-in-time incompressible convergence, reported softly
            const double slope_inc = expected_slope_osc_hybrid(p, s);
            BesovParams sp_t{s - 2.0, p, HybridSign::None, 1.0};
            push(pr, "dTheta", "L~inf(B^{s-2})", time_besov_norm(bank.at("dTheta", p), kInf, sp_t, fb), slope_inc);
            BesovParams sp_v{s, p, HybridSign::None, 1.0};
            push(pr, "dv", "L~2(B^s)", time_besov_norm(bank.at("dv", p), 2.0, sp_v, fb), slope_inc);
        }
    }
    return out;
}

ConvergenceReport run_convergence(const ExperimentPlan& plan, int threads) {
    plan.validate();
    const InitialData data = make_initial_data(plan);

    std::vector<RunMeasurement> runs(plan.eps_ladder.size());
    const int budget = std::max(1, threads);
    std::vector<std::future<RunMeasurement>> futs;
    std::size_t next = 0;
    while (next < plan.eps_ladder.size() || !futs.empty()) {
        while (next < plan.eps_ladder.size() && futs.size() < static_cast<std::size_t>(budget)) {
            const double eps = plan.eps_ladder[next];
            futs.push_back(std::async(std::launch::async,
                                      [&plan, eps, &data] { return run_single_eps(plan, eps, data); }));
            ++next;
        }
        for (auto& f : futs) f.wait();
        for (auto& f : futs) {
            RunMeasurement r = f.get();
            for (std::size_t i = 0; i < plan.eps_ladder.size(); ++i)
                if (plan.eps_ladder[i] == r.eps) runs[i] = std::move(r);
        }
        futs.clear();
    }

    ConvergenceReport rep;
    rep.variant = plan.variant == SystemVariant::Conducting ? "conducting" : "nonconducting";
    rep.seed = plan.seed;
    for (const auto& r : runs)
        for (const auto& v : r.values) rep.values.push_back(v);

    // group by (norm_id, p, s) and fit
    std::map<std::tuple<std::string, double, double>, FitRecord> groups;
    for (const auto& v : rep.values) {
        auto& g = groups[{v.norm_id, v.p, v.s}];
        g.norm_id = v.norm_id;
        g.p = v.p;
        g.s = v.s;
        g.expected_slope = v.expected_slope;
        g.eps.push_back(v.eps);
        g.values.push_back(v.value);
    }
    for (auto& [key, g] : groups) {
        if (g.eps.size() >= 3) {
            bool positive = true;
            for (double v : g.values) positive = positive && v > 0.0;
            if (positive) {
                g.fit = fit_rate_adaptive(g.eps, g.values);
                rep.fits.push_back(g);
            }
        }
    }
    return rep;
}

XTrace monitor_conducting_X(const ExperimentPlan& plan, double eps) {
    const GridSpec& g = plan.grid;
    const DyadicFilterBank fb(g);
    PhysParams par = plan.phys;
    par.eps = eps;
    const double nu = par.nu();
    const double alpha = eps * nu;
    const double dt = plan.dt_for(eps);
    const int steps = std::max(1, static_cast<int>(std::llround(plan.T / dt)));
    const double dt_eff = plan.T / steps;

    PotentialOnGrid V(g, plan.potential);
    ConductingStepper stepper(g, par, &V, dt_eff);
    ConductingState s = assemble_conducting(make_initial_data(plan));

    const BesovParams nb{1.5, 2.0, HybridSign::Minus, alpha};
    const BesovParams nb_int{1.5, 2.0, HybridSign::Plus, alpha};
    const BesovParams nth{-0.5, 2.0, HybridSign::Plus, alpha};
    const BesovParams nth_int{1.5, 2.0, HybridSign::Plus, alpha};

    double sup_b = 0.0, sup_u = 0.0, sup_th = 0.0;
    double int_b = 0.0, int_u = 0.0, int_th = 0.0;
    double prev_b = 0.0, prev_u = 0.0, prev_th = 0.0;

    XTrace trace;
    auto sample = [&](bool first) {
        const double vb = hybrid_norm_unchecked(s.b, nb, fb);
        const double vu = besov_norm_unchecked(s.u, 0.5, 2.0, fb);
        const double vth = hybrid_norm_unchecked(s.theta, nth, fb);
        const double ib = hybrid_norm_unchecked(s.b, nb_int, fb);
        const double iu = besov_norm_unchecked(s.u, 2.5, 2.0, fb);
        const double ith = hybrid_norm_unchecked(s.theta, nth_int, fb);
        sup_b = std::max(sup_b, vb);
        sup_u = std::max(sup_u, vu);
        sup_th = std::max(sup_th, vth);
        if (!first) {
            int_b += 0.5 * dt_eff * (prev_b + ib);
            int_u += 0.5 * dt_eff * (prev_u + iu);
            int_th += 0.5 * dt_eff * (prev_th + ith);
        }
        prev_b = ib;
        prev_u = iu;
        prev_th = ith;
        trace.t.push_back(s.t);
        trace.X.push_back(sup_b + sup_u + sup_th + nu * (int_b + int_u + int_th));
    };

    sample(true);
    for (int k = 1; k <= steps; ++k) {
        s = stepper.step(s);
        sample(false);
    }
    return trace;
}

PotentialSpec auto_scale_potential(const PotentialSpec& spec, const GridSpec& grid, const PhysParams& phys,
                                   double eps, double T, double eta) {
    if (spec.is_zero() || eta <= 0.0) return spec;
    const DyadicFilterBank fb(grid);
    const double nu = phys.nu();
    const double alpha = eps * nu;
    PotentialOnGrid V(grid, spec);
    SpectralField vf = V.value_field(0.0);
    zero_mean(vf);
    const BesovParams space{1.5, 2.0, HybridSign::Minus, alpha};
    const double v_norm = hybrid_norm(vf, space, fb);
    const double gv_norm = hybrid_norm(gradient(vf), space, fb);
    // static-in-time estimate of the smallness functional
    double total = v_norm + std::sqrt(nu * T) * gv_norm;
    if (spec.profile == PotentialProfile::ModulatedBump)
        total += spec.omega * T * v_norm;  // |dt V|_{L^1} bound for cos modulation
    const double target = eta * nu;
    PotentialSpec out = spec;
    if (total > 0.0) out.amplitude *= target / total;
    return out;
}

}  // namespace ob
