#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "ob/acoustic.hpp"
#include "ob/config.hpp"
#include "ob/paraproduct.hpp"
#include "ob/report.hpp"
#include "ob/snapshot.hpp"

namespace {

using namespace ob;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerification = 2;
constexpr int kExitRuntime = 3;

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    std::string format = "csv";
};

int thread_budget(const GlobalOpts& g) {
    if (g.threads > 0) return g.threads;
    if (const char* env = std::getenv("OBERBECK_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 2;
}

Config load_config(const GlobalOpts& g) {
    if (g.config_path.empty()) throw ConfigError("missing --config");
    return Config::parse_file(g.config_path);
}

GridSpec grid_from(const Config& cfg) {
    GridSpec g;
    g.dim = cfg.get_int("grid", "dim");
    g.n = cfg.get_int("grid", "n");
    g.L = cfg.get_double("grid", "L");
    g.dealias_fraction = cfg.get_double("grid", "dealias_fraction");
    g.validate();
    return g;
}

PhysParams phys_from(const Config& cfg) {
    PhysParams p;
    p.eps = cfg.get_double("physics", "eps");
    p.mu = cfg.get_double("physics", "mu");
    p.lambda = cfg.get_double("physics", "lambda");
    p.kappa = cfg.get_double("physics", "kappa");
    p.validate();
    return p;
}

PotentialSpec potential_from(const Config& cfg, const GridSpec& g) {
    PotentialSpec v;
    const std::string prof = cfg.get("potential", "profile");
    if (prof == "zero")
        v.profile = PotentialProfile::Zero;
    else if (prof == "gaussian_bump")
        v.profile = PotentialProfile::GaussianBump;
    else if (prof == "modulated_bump")
        v.profile = PotentialProfile::ModulatedBump;
    else
        throw ConfigError("[potential] profile: unknown value '" + prof + "'");
    v.amplitude = cfg.get_double("potential", "amplitude");
    v.width = cfg.get_double("potential", "width");
    v.omega = cfg.get_double("potential", "omega");
    const std::string c = cfg.get_raw("potential", "center");
    if (c.empty()) {
        v.center = {0.5 * g.L, 0.5 * g.L, 0.5 * g.L};
    } else {
        const auto parts = cfg.get_list("potential", "center");
        if (static_cast<int>(parts.size()) != g.dim)
            throw ConfigError("[potential] center: expected " + std::to_string(g.dim) + " coordinates");
        for (std::size_t i = 0; i < parts.size(); ++i) v.center[i] = parts[i];
    }
    return v;
}

std::vector<MeasurePair> pairs_from(const Config& cfg) {
    std::vector<MeasurePair> out;
    for (const auto& item : split_list(cfg.get("measure", "pairs"))) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ConfigError("[measure] pairs: expected p:s entries");
        try {
            out.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
        } catch (const std::exception&) {
            throw ConfigError("[measure] pairs: bad entry '" + item + "'");
        }
    }
    return out;
}

ExperimentPlan plan_from(const Config& cfg, const GlobalOpts& g) {
    ExperimentPlan plan;
    plan.grid = grid_from(cfg);
    plan.phys = phys_from(cfg);
    const std::string variant = cfg.get("physics", "variant");
    if (variant == "conducting")
        plan.variant = SystemVariant::Conducting;
    else if (variant == "nonconducting")
        plan.variant = SystemVariant::NonConducting;
    else
        throw ConfigError("[physics] variant: unknown value '" + variant + "'");
    if (!cfg.get_raw("physics", "eps_ladder").empty())
        plan.eps_ladder = cfg.get_list("physics", "eps_ladder");
    else
        plan.eps_ladder = {cfg.get_double("physics", "eps")};
    plan.potential = potential_from(cfg, plan.grid);
    plan.T = cfg.get_double("time", "T");
    plan.dt = cfg.get_double("time", "dt");
    plan.dt_factor = cfg.get_double("time", "dt_factor");
    plan.measure_every = cfg.get_int("time", "measure_every");
    plan.pairs = pairs_from(cfg);
    plan.seed = g.seed_set ? g.seed : static_cast<std::uint64_t>(cfg.get_int("initial_data", "seed"));
    plan.amplitude = cfg.get_double("initial_data", "amplitude");
    plan.width = cfg.get_double("initial_data", "width");
    plan.oscillatory = cfg.get_bool("initial_data", "oscillatory");
    plan.random_bands = cfg.get_bool("initial_data", "random_bands");
    const double eta = cfg.get_double("potential", "auto_scale_eta");
    if (eta > 0.0 && !plan.potential.is_zero()) {
        const double eps_min = *std::min_element(plan.eps_ladder.begin(), plan.eps_ladder.end());
        plan.potential = auto_scale_potential(plan.potential, plan.grid, plan.phys, eps_min, plan.T, eta);
    }
    return plan;
}

int cmd_linear_verify(const GlobalOpts& g) {
    const Config cfg = load_config(g);
    const std::string variant_s = cfg.get("linear", "variant");
    ModeVariant variant;
    if (variant_s == "conducting")
        variant = ModeVariant::Conducting;
    else if (variant_s == "nonconducting")
        variant = ModeVariant::NonConducting;
    else
        throw ConfigError("[linear] variant: unknown value '" + variant_s + "'");

    const int r_count = cfg.get_int("linear", "r_count");
    const int t_count = cfg.get_int("linear", "t_count");
    if (r_count <= 0) throw ConfigError("[linear] r_count: must be positive");
    if (t_count <= 0) throw ConfigError("[linear] t_count: must be positive");
    const auto r_grid = log_spaced(cfg.get_double("linear", "r_min"), cfg.get_double("linear", "r_max"), r_count);
    const auto t_grid = lin_spaced(0.0, cfg.get_double("linear", "t_max"), t_count);
    const double C_budget = cfg.get_double("linear", "C_budget");
    const double c_min = cfg.get_double("linear", "c_min");

    bool all_ok = true;
    for (double kt : cfg.get_list("linear", "kappa_t")) {
        if (variant == ModeVariant::Conducting) {
            try {
                (void)EnergyWeights::for_kappa(kt);
            } catch (const NegativeHSquare& e) {
                std::cerr << "linear-verify: " << e.what() << "\n";
                return kExitVerification;
            }
        }
        try {
            DecaySweep sweep = verify_decay(kt, variant, r_grid, t_grid, C_budget);
            std::ostringstream name;
            name << g.out_dir << "/decay_" << variant_s << "_kt" << kt << ".csv";
            write_decay_csv(name.str(), variant, kt, sweep);
            const bool ok = sweep.admissible(C_budget, c_min);
            std::cout << "kappa_t=" << kt << " C=" << sweep.constants.C << " c=" << sweep.constants.c
                      << (ok ? " PASS" : " FAIL") << "\n";
            all_ok = all_ok && ok;
        } catch (const NoAdmissibleConstants& e) {
            std::cerr << "linear-verify: " << e.what() << "\n";
            return kExitVerification;
        }
    }
    return all_ok ? kExitOk : kExitVerification;
}

int cmd_converge(const GlobalOpts& g) {
    const Config cfg = load_config(g);
    const ExperimentPlan plan = plan_from(cfg, g);
    const double tol = cfg.get_double("measure", "slope_tol");
    if (plan.eps_ladder.size() < 3)
        throw ConfigError("converge: eps ladder must have at least 3 points for a rate fit");

    ConvergenceReport rep;
    try {
        rep = run_convergence(plan, thread_budget(g));
    } catch (const Error& e) {
        std::cerr << "converge: " << e.what() << "\n";
        return kExitRuntime;
    }

    std::filesystem::create_directories(g.out_dir);
    write_report_csv(g.out_dir + "/report.csv", rep);
    write_fits_csv(g.out_dir + "/fits.csv", rep);
    write_report_json(g.out_dir + "/report.json", rep);
    write_report_svgs(g.out_dir, "fit", rep);

    // acceptance gate: the oscillatory fits must match their expected slopes
    bool ok = true;
    const std::string osc = plan.variant == SystemVariant::Conducting ? "q:" : "QuR:";
    for (const auto& f : rep.fits) {
        if (f.norm_id.rfind(osc, 0) != 0) continue;
        const double err = std::abs(f.fit.slope - f.expected_slope);
        const bool pass = err <= tol;
        std::cout << f.norm_id << " p=" << f.p << " s=" << f.s << ": slope " << f.fit.slope << " expected "
                  << f.expected_slope << " |err| " << err << (pass ? " PASS" : " FAIL") << "\n";
        ok = ok && pass;
    }
    return ok ? kExitOk : kExitVerification;
}

int cmd_simulate(const GlobalOpts& g) {
    const Config cfg = load_config(g);
    ExperimentPlan plan = plan_from(cfg, g);
    const double eps = plan.eps_ladder.front();
    std::filesystem::create_directories(g.out_dir);

    const int snap_every = cfg.get_int("time", "snapshot_every");
    const bool write_snaps = cfg.get_bool("output", "write_snapshots") && snap_every > 0;

    if (plan.variant != SystemVariant::Conducting)
        throw ConfigError("simulate: only the conducting monitor run is wired to this command");

    XTrace trace = monitor_conducting_X(plan, eps);
    std::ofstream os(g.out_dir + "/monitor.csv");
    os << "t,X\n";
    for (std::size_t i = 0; i < trace.t.size(); ++i)
        os << format_double(trace.t[i]) << ',' << format_double(trace.X[i]) << '\n';

    if (write_snaps) {
        // re-run saving snapshots of b at the requested stride
        PhysParams par = plan.phys;
        par.eps = eps;
        PotentialOnGrid V(plan.grid, plan.potential);
        const double dt = plan.dt_for(eps);
        const int steps = std::max(1, static_cast<int>(std::llround(plan.T / dt)));
        ConductingStepper stepper(plan.grid, par, &V, plan.T / steps);
        ConductingState s = assemble_conducting(make_initial_data(plan));
        int idx = 0;
        write_snapshot(g.out_dir + "/b_" + std::to_string(idx) + ".obfld", s.b, s.t, "b");
        for (int k = 1; k <= steps; ++k) {
            s = stepper.step(s);
            if (k % snap_every == 0)
                write_snapshot(g.out_dir + "/b_" + std::to_string(++idx) + ".obfld", s.b, s.t, "b");
        }
    }
    const double ratio = trace.X.back() / trace.X.front();
    std::cout << "X(0)=" << trace.X.front() << " X(T)=" << trace.X.back() << " ratio=" << ratio << "\n";
    return ratio <= 3.0 ? kExitOk : kExitVerification;
}

int cmd_strichartz(const GlobalOpts& g) {
    const Config cfg = load_config(g);
    GridSpec grid = grid_from(cfg);
    const DyadicFilterBank bank(grid);
    const std::array<double, 3> c{0.5 * grid.L, 0.5 * grid.L, 0.5 * grid.L};

    nlohmann::ordered_json j;
    bool ok = true;

    // dispersive sup-norm decay of a Gaussian acoustic pulse
    {
        SpectralField q0 = gaussian_bump_field(grid, 1.0, 1.6, c, true);
        SpectralField w0(grid, grid.dim);
        w0.set_zero();
        double lo = 1e300, hi = 0.0;
        for (double t : lin_spaced(2.0, 10.0, 9)) {
            AcousticState st = acoustic_evolve(q0, w0, t);
            const double v = t * lp_norm(st.q, std::numeric_limits<double>::infinity());
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        j["sup_decay_spread"] = hi / lo;
        ok = ok && hi / lo < 3.0;
    }
    // Strichartz ratios across Gaussian widths
    {
        std::vector<double> ratios;
        for (double w : {1.2, 1.6, 2.2}) {
            SpectralField q0 = gaussian_bump_field(grid, 1.0, w, c, true);
            SpectralField w0(grid, grid.dim);
            w0.set_zero();
            ratios.push_back(strichartz_ratio(q0, w0, 4.0, 0.5, 8.0, 129, bank));
        }
        const double spread = *std::max_element(ratios.begin(), ratios.end()) /
                              *std::min_element(ratios.begin(), ratios.end());
        j["strichartz_ratios"] = ratios;
        j["strichartz_spread"] = spread;
        ok = ok && spread < 4.0;
    }
    // heat maximal regularity ratios
    {
        std::vector<double> ratios;
        for (double w : {1.2, 1.6, 2.2}) {
            SpectralField u0 = gaussian_bump_field(grid, 1.0, w, c, true);
            ratios.push_back(heat_regularity_ratio(u0, {}, 1.0, 1.0, 0.5, 4.0, bank));
        }
        j["heat_ratios"] = ratios;
        for (double r : ratios) ok = ok && r <= 5.0;
    }

    std::filesystem::create_directories(g.out_dir);
    std::ofstream os(g.out_dir + "/strichartz.json");
    os << j.dump(2) << '\n';
    std::cout << j.dump(2) << "\n";
    return ok ? kExitOk : kExitVerification;
}

int cmd_besov_test(const GlobalOpts& g) {
    const Config cfg = load_config(g);
    GridSpec grid = grid_from(cfg);
    const DyadicFilterBank bank(grid);
    const std::uint64_t seed = g.seed_set ? g.seed : 1;

    nlohmann::ordered_json j;
    bool ok = true;

    // Bony decomposition residual on random band-limited pairs
    {
        double worst = 0.0;
        const double band = bank.coverage_radius() / grid.xi_min();
        for (int trial = 0; trial < 5; ++trial) {
            SpectralField f = random_band_field(grid, 1, seed + 2 * trial, 1.0, band, 1.0);
            SpectralField h = random_band_field(grid, 1, seed + 2 * trial + 1, 1.0, band, 1.0);
            SpectralField sum = paraproduct(f, h, bank) + remainder(h, f, bank);
            RealSamples fp = fft::to_phys(grid, f.comp(0)), hp = fft::to_phys(grid, h.comp(0));
            for (std::size_t i = 0; i < fp.size(); ++i) fp[i] *= hp[i];
            SpectralField prod(grid, 1);
            prod.comp(0) = fft::from_phys(grid, fp);
            dealias_inplace(prod);
            worst = std::max(worst, l2_norm(sum - prod) / l2_norm(prod));
        }
        j["bony_residual"] = worst;
        ok = ok && worst < 1e-10;
    }
    // paraconvection pairing constant
    {
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const double band = bank.coverage_radius() / grid.xi_min();
            SpectralField v = solenoidal_band_field(grid, seed + 100 + trial, 1.0, 0.5 * band, 1.0);
            SpectralField z = random_band_field(grid, 1, seed + 200 + trial, 1.0, band, 1.0);
            for (int jb = bank.j_min(); jb <= bank.j_max(); ++jb) {
                PairingBound pb = paraconv_pairing(v, z, jb, bank);
                if (pb.rhs_bound > 1e-14) worst = std::max(worst, pb.lhs / pb.rhs_bound);
            }
        }
        j["paraconv_constant"] = worst;
        ok = ok && worst <= 10.0;
    }

    // sample norm records of a reference field, in the documented schema
    {
        SpectralField z = random_band_field(grid, 1, seed + 999, 1.0,
                                            bank.coverage_radius() / grid.xi_min(), 1.0, 2.5);
        auto records = nlohmann::ordered_json::array();
        for (BesovParams params : {BesovParams{0.5, 2.0, HybridSign::None, 1.0},
                                   BesovParams{1.5, 2.0, HybridSign::Minus, 0.25},
                                   BesovParams{-0.5, 2.0, HybridSign::Plus, 0.25}}) {
            const NormResult r = hybrid_norm_full(z, params, bank);
            records.push_back(nlohmann::ordered_json::parse(norm_record_json("reference_field", params, r)));
        }
        j["norm_records"] = records;
    }

    std::filesystem::create_directories(g.out_dir);
    std::ofstream os(g.out_dir + "/besov.json");
    os << j.dump(2) << '\n';
    std::cout << j.dump(2) << "\n";
    return ok ? kExitOk : kExitVerification;
}

int cmd_report(const GlobalOpts& g) {
    if (g.config_path.empty()) throw ConfigError("report: pass the report json via --config");
    ConvergenceReport rep = read_report_json(g.config_path);
    std::filesystem::create_directories(g.out_dir);
    if (g.format == "json")
        write_report_json(g.out_dir + "/report.json", rep);
    else
        write_report_csv(g.out_dir + "/report.csv", rep);
    write_fits_csv(g.out_dir + "/fits.csv", rep);
    write_report_svgs(g.out_dir, "fit", rep);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral low-Mach / Oberbeck-Boussinesq verification suite"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "configuration file (INI-style)");
    app.add_option("--out", g.out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", g.seed, "override the data seed");
    app.add_option("--threads", g.threads, "thread budget (or OBERBECK_THREADS)");
    app.add_option("--format", g.format, "csv | json");
    app.footer(ob::Config::help_text());

    auto* sub_lin = app.add_subcommand("linear-verify", "decay-constant sweep of the linearized modes");
    auto* sub_str = app.add_subcommand("strichartz", "acoustic dispersion and heat regularity suite");
    auto* sub_bes = app.add_subcommand("besov-test", "paraproduct and pairing verification suite");
    auto* sub_sim = app.add_subcommand("simulate", "single run with the solution-functional monitor");
    auto* sub_con = app.add_subcommand("converge", "eps-ladder convergence-rate experiment");
    auto* sub_rep = app.add_subcommand("report", "re-emit report files from a stored json report");
    for (auto* sc : {sub_lin, sub_str, sub_bes, sub_sim, sub_con, sub_rep}) sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitConfig : kExitOk;
    }
    g.seed_set = seed_opt->count() > 0;

    try {
        if (sub_lin->parsed()) return cmd_linear_verify(g);
        if (sub_str->parsed()) return cmd_strichartz(g);
        if (sub_bes->parsed()) return cmd_besov_test(g);
        if (sub_sim->parsed()) return cmd_simulate(g);
        if (sub_con->parsed()) return cmd_converge(g);
        if (sub_rep->parsed()) return cmd_report(g);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NegativeHSquare& e) {
        std::cerr << "verification error: " << e.what() << "\n";
        return kExitVerification;
    } catch (const NoAdmissibleConstants& e) {
        std::cerr << "verification error: " << e.what() << "\n";
        return kExitVerification;
    } catch (const Error& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}
