#include "ob/boussinesq.hpp"

#include <cmath>
#include <limits>

namespace ob {

namespace {

void scalar_props(const GridSpec& g, double coef, double dt, std::vector<PropScalar>& out) {
    const std::size_t kmax = max_k2(g);
    out.resize(kmax + 1);
    const double dxi = g.xi_min();
    for (std::size_t k2 = 0; k2 <= kmax; ++k2) {
        const double r2 = dxi * dxi * static_cast<double>(k2);
        out[k2] = make_prop_scalar(-coef * r2, dt);
    }
}

}  // namespace

BoussinesqStepper::BoussinesqStepper(const GridSpec& grid, const PhysParams& par, const PotentialOnGrid* V,
                                     double dt, BoussinesqVariant variant, const StepOptions& opt)
    : grid_(grid), par_(par), V_(V), dt_(dt), variant_(variant), opt_(opt) {
    grid_.validate();
    par_.validate();
    if (dt <= 0.0) throw ConfigError("BoussinesqStepper: dt must be positive");
    const double theta_coef = variant == BoussinesqVariant::Transport ? 0.0 : 0.5 * par_.kappa;
    scalar_props(grid_, theta_coef, dt_, prop_theta_);
    scalar_props(grid_, par_.mu, dt_, prop_v_);
}

BoussinesqStepper::Tendency BoussinesqStepper::rhs(const BoussinesqState& s) const {
    const GridSpec& g = grid_;
    const int dim = g.dim;
    const std::size_t npts = g.points();
    const double rt2h = 0.5 * std::sqrt(2.0);

    std::vector<RealSamples> v(dim);
    for (int c = 0; c < dim; ++c) v[c] = fft::to_phys(g, s.v.comp(c));
    std::vector<RealSamples> gth(dim);
    {
        SpectralField gthf = gradient(s.Theta);
        for (int c = 0; c < dim; ++c) gth[c] = fft::to_phys(g, gthf.comp(c));
    }
    RealSamples th = fft::to_phys(g, s.Theta.comp(0));
    std::vector<RealSamples> gv(static_cast<std::size_t>(dim) * dim);
    for (int i = 0; i < dim; ++i) {
        SpectralField di = apply_symbol(s.v, symbols::partial(i));
        for (int j = 0; j < dim; ++j) gv[static_cast<std::size_t>(i) * dim + j] = fft::to_phys(g, di.comp(j));
    }

    const bool haveV = V_ && !V_->is_zero();
    const double mfac = haveV ? V_->factor(s.t) : 0.0;
    const double mdot = haveV ? V_->factor_dot(s.t) : 0.0;

    RealSamples nth(npts);
    std::vector<RealSamples> nv(dim, RealSamples(npts));
    for (std::size_t p = 0; p < npts; ++p) {
        double v_gth = 0.0, v_gV = 0.0;
        for (int c = 0; c < dim; ++c) {
            v_gth += v[c][p] * gth[c][p];
            if (haveV) v_gV += v[c][p] * mfac * V_->grad(c)[p];
        }
        switch (variant_) {
            case BoussinesqVariant::Conducting:
                nth[p] = -v_gth + rt2h * ((haveV ? mdot * V_->profile()[p] : 0.0) + v_gV);
                break;
            case BoussinesqVariant::Transport:
                nth[p] = -v_gth;
                break;
            case BoussinesqVariant::Tilde:
                nth[p] = -v_gth + (haveV ? 0.5 * rt2h * par_.kappa * mfac * V_->laplacian()[p] : 0.0);
                break;
        }
        for (int d = 0; d < dim; ++d) {
            double v_gv = 0.0;
            for (int e = 0; e < dim; ++e) v_gv += v[e][p] * gv[static_cast<std::size_t>(e) * dim + d][p];
            double force = 0.0;
            if (haveV) {
                const double gVd = mfac * V_->grad(d)[p];
                force = variant_ == BoussinesqVariant::Transport ? th[p] * gVd : -rt2h * th[p] * gVd;
            }
            nv[d][p] = -v_gv + force;
        }
    }

    Tendency out{SpectralField(g, 1), SpectralField(g, dim)};
    out.Theta.comp(0) = fft::from_phys(g, nth);
    for (int d = 0; d < dim; ++d) out.v.comp(d) = fft::from_phys(g, nv[d]);
    dealias_inplace(out.Theta);
    dealias_inplace(out.v);
    out.v = leray_project(out.v, LerayPart::P);
    return out;
}

BoussinesqState BoussinesqStepper::step(const BoussinesqState& s) const {
    const GridSpec& g = grid_;

    auto linear = [&](const BoussinesqState& st, bool half) {
        BoussinesqState out{SpectralField(g, 1), SpectralField(g, g.dim), st.t};
        for_each_mode(g, [&](std::size_t i, const std::array<int, 3>& k, const std::array<double, 3>&, double) {
            std::size_t k2 = 0;
            for (int d = 0; d < g.dim; ++d) k2 += static_cast<std::size_t>(k[d]) * k[d];
            out.Theta[i] = (half ? prop_theta_[k2].e_half : prop_theta_[k2].e_full) * st.Theta[i];
            const double ev = half ? prop_v_[k2].e_half : prop_v_[k2].e_full;
            for (int c = 0; c < g.dim; ++c) out.v.comp(c)[i] = ev * st.v.comp(c)[i];
        });
        return out;
    };
    auto add_weighted = [&](BoussinesqState& acc, const Tendency& n, int table) {
        for_each_mode(g, [&](std::size_t i, const std::array<int, 3>& k, const std::array<double, 3>&, double) {
            std::size_t k2 = 0;
            for (int d = 0; d < g.dim; ++d) k2 += static_cast<std::size_t>(k[d]) * k[d];
            const PropScalar& pt = prop_theta_[k2];
            const PropScalar& pv = prop_v_[k2];
            double wt, wv;
            switch (table) {
                case 0: wt = pt.p1_half; wv = pv.p1_half; break;
                case 1: wt = pt.p1_full; wv = pv.p1_full; break;
                case 2: wt = pt.w1; wv = pv.w1; break;
                case 3: wt = pt.w2; wv = pv.w2; break;
                default: wt = pt.w3; wv = pv.w3; break;
            }
            acc.Theta[i] += wt * n.Theta[i];
            for (int c = 0; c < g.dim; ++c) acc.v.comp(c)[i] += wv * n.v.comp(c)[i];
        });
    };

    if (opt_.disable_nonlinearity) {
        BoussinesqState out = linear(s, false);
        out.t = s.t + dt_;
        return out;
    }

    check_cfl(g, dt_, lp_norm(s.v, std::numeric_limits<double>::infinity()), opt_.cfl);

    Tendency n1 = rhs(s);
    BoussinesqState a = linear(s, true);
    add_weighted(a, n1, 0);
    a.t = s.t + 0.5 * dt_;
    Tendency n2 = rhs(a);

    Tendency comb{SpectralField(g, 1), SpectralField(g, g.dim)};
    comb.Theta = 2.0 * n2.Theta - n1.Theta;
    comb.v = 2.0 * n2.v - n1.v;
    BoussinesqState b = linear(s, false);
    add_weighted(b, comb, 1);
    b.t = s.t + dt_;
    Tendency n3 = rhs(b);

    BoussinesqState out = linear(s, false);
    add_weighted(out, n1, 2);
    add_weighted(out, n2, 3);
    add_weighted(out, n3, 4);
    out.t = s.t + dt_;
    out.v = leray_project(out.v, LerayPart::P);
    return out;
}

double divergence_residual(const SpectralField& v) {
    const double vn = l2_norm(v);
    return vn > 0.0 ? l2_norm(divergence(v)) / vn : 0.0;
}

}  // namespace ob
