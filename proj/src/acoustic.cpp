#include "ob/acoustic.hpp"

#include <cmath>
#include <limits>

#include "ob/errors.hpp"
#include "ob/spectral_ops.hpp"

namespace ob {

AcousticState acoustic_evolve(const SpectralField& q0, const SpectralField& w0, double t) {
    const GridSpec& g = q0.grid();
    const double wnorm = l2_norm(w0);
    if (l2_norm(leray_project(w0, LerayPart::P)) > 1e-10 * std::max(wnorm, 1e-300))
        throw NotCurlFree("acoustic_evolve: w0 has a solenoidal part");
    if (mean_mode_magnitude(q0) > 1e-13 || mean_mode_magnitude(w0) > 1e-13)
        throw SingularSymbolOnMeanMode("acoustic_evolve: fields must be mean-free");

    AcousticState out{SpectralField(g, 1), SpectralField(g, g.dim)};
    const double c = std::sqrt(2.0);
    for_each_mode(g, [&](std::size_t i, const std::array<int, 3>&, const std::array<double, 3>& xi, double r2) {
        if (r2 == 0.0) {
            out.q[i] = cplx(0.0, 0.0);
            for (int d = 0; d < g.dim; ++d) out.qu.comp(d)[i] = cplx(0.0, 0.0);
            return;
        }
        const double r = std::sqrt(r2);
        // m = Lambda^{-1} div Qu;  (q,m)' = c r [[0,-1],[1,0]] (q,m)
        cplx m(0.0, 0.0);
        for (int d = 0; d < g.dim; ++d) m += cplx(0.0, 1.0) * xi[d] * w0.comp(d)[i];
        m /= r;
        const double ph = c * r * t;
        const double cs = std::cos(ph), sn = std::sin(ph);
        const cplx qt = cs * q0[i] - sn * m;
        const cplx mt = sn * q0[i] + cs * m;
        out.q[i] = qt;
        for (int d = 0; d < g.dim; ++d) out.qu.comp(d)[i] = cplx(0.0, -1.0) * (xi[d] / r) * mt;
    });
    return out;
}

double acoustic_energy(const AcousticState& s) {
    const double a = l2_norm(s.q);
    const double b = l2_norm(s.qu);
    return a * a + b * b;
}

double strichartz_ratio(const SpectralField& q0, const SpectralField& w0, double p, double s, double T,
                        int samples, const DyadicFilterBank& bank) {
    const double denom = besov_norm(SpectralField::stack({&q0, &w0}), s, 2.0, bank);
    if (denom == 0.0) return 0.0;
    const double q_exp = p == 2.0 ? std::numeric_limits<double>::infinity() : 2.0 * p / (p - 2.0);
    const double dt = T / (samples - 1);
    BlockSeries series;
    for (int i = 0; i < samples; ++i) {
        AcousticState st = acoustic_evolve(q0, w0, dt * i);
        series.append(bank.all_block_lp(SpectralField::stack({&st.q, &st.qu}), p));
    }
    series.j_min = bank.j_min();
    series.dt = dt;
    series.p = p;
    BesovParams space{s + 2.0 / p - 1.0, p, HybridSign::None, 1.0};
    return time_besov_norm(series, q_exp, space, bank) / denom;
}

double heat_regularity_ratio(const SpectralField& u0, const std::vector<SpectralField>& f_traj, double q,
                             double r, double sigma, double T, const DyadicFilterBank& bank, double p) {
    const GridSpec& g = u0.grid();
    const int nsamp = f_traj.empty() ? 65 : static_cast<int>(f_traj.size());
    if (nsamp < 2) throw EmptySequence("heat_regularity_ratio: need at least two samples");
    const double dt = T / (nsamp - 1);

    // u at sample times: exact semigroup on u0 plus Duhamel with trapezoid
    // sampling of f (exact per-mode integration of the exponential factor)
    std::vector<SpectralField> u(nsamp, SpectralField(g, u0.rank()));
    std::vector<SpectralField> duh(nsamp, SpectralField(g, u0.rank()));
    for (auto& f : duh) f.set_zero();
    for (int i = 0; i < nsamp; ++i) u[i].set_zero();

    for_each_mode(g, [&](std::size_t idx, const std::array<int, 3>&, const std::array<double, 3>&, double r2) {
        for (int c = 0; c < u0.rank(); ++c) {
            // step the Duhamel integral: I_{k+1} = e^{-r2 dt} I_k + int over the step
            cplx integral(0.0, 0.0);
            u[0].comp(c)[idx] = u0.comp(c)[idx];
            for (int k = 1; k < nsamp; ++k) {
                const double decay = std::exp(-r2 * dt);
                integral *= decay;
                if (!f_traj.empty()) {
                    const cplx favg = 0.5 * (f_traj[k - 1].comp(c)[idx] + f_traj[k].comp(c)[idx]);
                    const double w = r2 > 0.0 ? (1.0 - decay) / r2 : dt;
                    integral += favg * w;
                }
                u[k].comp(c)[idx] = std::exp(-r2 * dt * k) * u0.comp(c)[idx] + integral;
            }
        }
    });

    BesovParams lhs_space{sigma + 2.0 / q, p, HybridSign::None, 1.0};
    const double lhs = time_besov_norm(u, dt, q, lhs_space, bank);

    double rhs = besov_norm(u0, sigma, p, bank);
    if (!f_traj.empty()) {
        BesovParams f_space{sigma + 2.0 / r - 2.0, p, HybridSign::None, 1.0};
        rhs += time_besov_norm(f_traj, dt, r, f_space, bank);
    }
    return rhs > 0.0 ? lhs / rhs : 0.0;
}

}  // namespace ob
