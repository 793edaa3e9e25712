#include "ob/solvers.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>
#include <mutex>

namespace ob {

double phi1(double z) {
    if (std::abs(z) < 0.02)
        return 1.0 + z * (1.0 / 2 + z * (1.0 / 6 + z * (1.0 / 24 + z * (1.0 / 120 + z * (1.0 / 720 + z / 5040)))));
    return std::expm1(z) / z;
}

double phi2(double z) {
    if (std::abs(z) < 0.02)
        return 0.5 + z * (1.0 / 6 + z * (1.0 / 24 + z * (1.0 / 120 + z * (1.0 / 720 + z * (1.0 / 5040 + z / 40320)))));
    return (std::expm1(z) - z) / (z * z);
}

double phi3(double z) {
    if (std::abs(z) < 0.02)
        return 1.0 / 6 +
               z * (1.0 / 24 + z * (1.0 / 120 + z * (1.0 / 720 + z * (1.0 / 5040 + z * (1.0 / 40320 + z / 362880)))));
    return (std::expm1(z) - z - 0.5 * z * z) / (z * z * z);
}

namespace {

// top block row of exp([[hL, I, 0, 0], [0,0,I,0], [0,0,0,I], [0,0,0,0]])
// is [e^{hL}, phi1(hL), phi2(hL), phi3(hL)]
void phi_matrices(const Eigen::Matrix3d& L, double h, Eigen::Matrix3d& E, Eigen::Matrix3d& f1,
                  Eigen::Matrix3d& f2, Eigen::Matrix3d& f3) {
    Eigen::Matrix<double, 12, 12> aug = Eigen::Matrix<double, 12, 12>::Zero();
    aug.block<3, 3>(0, 0) = h * L;
    aug.block<3, 3>(0, 3) = Eigen::Matrix3d::Identity();
    aug.block<3, 3>(3, 6) = Eigen::Matrix3d::Identity();
    aug.block<3, 3>(6, 9) = Eigen::Matrix3d::Identity();
    const Eigen::Matrix<double, 12, 12> ex = aug.exp();
    E = ex.block<3, 3>(0, 0);
    f1 = ex.block<3, 3>(0, 3);
    f2 = ex.block<3, 3>(0, 6);
    f3 = ex.block<3, 3>(0, 9);
}

}  // namespace

Prop3 make_prop3(const Eigen::Matrix3d& L, double h) {
    Prop3 p;
    Eigen::Matrix3d e2, g1, g2, g3;
    phi_matrices(L, 0.5 * h, e2, g1, g2, g3);
    p.e_half = e2;
    p.p1_half = 0.5 * h * g1;
    Eigen::Matrix3d f1, f2, f3;
    phi_matrices(L, h, p.e_full, f1, f2, f3);
    p.p1_full = h * f1;
    p.w1 = h * (4.0 * f3 - 3.0 * f2 + f1);
    p.w2 = h * (4.0 * f2 - 8.0 * f3);
    p.w3 = h * (4.0 * f3 - f2);
    return p;
}

PropScalar make_prop_scalar(double lam, double h) {
    PropScalar p;
    const double zh = 0.5 * h * lam, zf = h * lam;
    p.e_half = std::exp(zh);
    p.p1_half = 0.5 * h * phi1(zh);
    p.e_full = std::exp(zf);
    p.p1_full = h * phi1(zf);
    const double f1 = phi1(zf), f2 = phi2(zf), f3 = phi3(zf);
    p.w1 = h * (4.0 * f3 - 3.0 * f2 + f1);
    p.w2 = h * (4.0 * f2 - 8.0 * f3);
    p.w3 = h * (4.0 * f3 - f2);
    return p;
}

std::size_t max_k2(const GridSpec& g) {
    const std::size_t half = static_cast<std::size_t>(g.n / 2);
    return static_cast<std::size_t>(g.dim) * half * half;
}

void check_cfl(const GridSpec& g, double dt, double u_inf, double cfl) {
    if (dt * u_inf / g.dx() > cfl)
        throw CflViolation("advective CFL exceeded: dt*|u|_inf/dx = " + std::to_string(dt * u_inf / g.dx()) +
                           " > " + std::to_string(cfl));
}

namespace {

struct PhysScratch {
    std::vector<RealSamples> u;       // velocity components
    std::vector<RealSamples> du;      // du[i*dim+j] = d_i u_j
    RealSamples divu;
    double u_inf = 0.0;
};

PhysScratch velocity_phys(const GridSpec& g, const SpectralField& u) {
    PhysScratch s;
    const int dim = g.dim;
    s.u.resize(dim);
    s.du.resize(static_cast<std::size_t>(dim) * dim);
    for (int c = 0; c < dim; ++c) s.u[c] = fft::to_phys(g, u.comp(c));
    for (int i = 0; i < dim; ++i) {
        SpectralField di = apply_symbol(u, symbols::partial(i));
        for (int j = 0; j < dim; ++j) s.du[static_cast<std::size_t>(i) * dim + j] = fft::to_phys(g, di.comp(j));
    }
    s.divu.assign(g.points(), 0.0);
    for (std::size_t p = 0; p < s.divu.size(); ++p) {
        double d = 0.0;
        for (int i = 0; i < dim; ++i) d += s.du[static_cast<std::size_t>(i) * dim + i][p];
        s.divu[p] = d;
        double m2 = 0.0;
        for (int c = 0; c < dim; ++c) m2 += s.u[c][p] * s.u[c][p];
        s.u_inf = std::max(s.u_inf, m2);
    }
    s.u_inf = std::sqrt(s.u_inf);
    return s;
}

double deformation_sq(const PhysScratch& s, int dim, std::size_t p) {
    double acc = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            const double dij = 0.5 * (s.du[static_cast<std::size_t>(i) * dim + j][p] +
                                      s.du[static_cast<std::size_t>(j) * dim + i][p]);
            acc += dij * dij;
        }
    return acc;
}

}  // namespace

ConductingTendency rhs_conducting(const ConductingState& state, const PhysParams& par,
                                  const PotentialOnGrid& V) {
    const GridSpec& g = state.b.grid();
    const int dim = g.dim;
    const std::size_t npts = g.points();
    const double eps = par.eps;

    PhysScratch vel = velocity_phys(g, state.u);
    RealSamples b = fft::to_phys(g, state.b.comp(0));
    RealSamples th = fft::to_phys(g, state.theta.comp(0));
    std::vector<RealSamples> gb(dim), gth(dim);
    {
        SpectralField gbf = gradient(state.b), gthf = gradient(state.theta);
        for (int d = 0; d < dim; ++d) {
            gb[d] = fft::to_phys(g, gbf.comp(d));
            gth[d] = fft::to_phys(g, gthf.comp(d));
        }
    }
    RealSamples lap_th = fft::to_phys(g, apply_symbol(state.theta, symbols::laplacian()).comp(0));
    std::vector<RealSamples> au(dim);  // A u = mu lap u + (lambda+mu) grad div u
    {
        SpectralField auf(g, dim);
        for_each_mode(g, [&](std::size_t i, const std::array<int, 3>&, const std::array<double, 3>& xi,
                             double r2) {
            cplx div(0.0, 0.0);
            for (int d = 0; d < dim; ++d) div += cplx(0.0, 1.0) * xi[d] * state.u.comp(d)[i];
            for (int d = 0; d < dim; ++d)
                auf.comp(d)[i] =
                    -par.mu * r2 * state.u.comp(d)[i] + (par.lambda + par.mu) * cplx(0.0, 1.0) * xi[d] * div;
        });
        for (int d = 0; d < dim; ++d) au[d] = fft::to_phys(g, auf.comp(d));
    }

    const double mfac = V.factor(state.t);
    const double mdot = V.factor_dot(state.t);

    RealSamples nb(npts), nth(npts);
    std::vector<RealSamples> nu(dim, RealSamples(npts));
    double min_density = 1e300;
    for (std::size_t p = 0; p < npts; ++p) {
        const double Vp = V.is_zero() ? 0.0 : mfac * V.profile()[p];
        const double a = b[p] + Vp;
        const double dens = 1.0 + eps * a;
        min_density = std::min(min_density, dens);
        const double ginv = 1.0 / dens;

        double u_gb = 0.0, u_gth = 0.0, u_gV = 0.0;
        for (int d = 0; d < dim; ++d) {
            u_gb += vel.u[d][p] * gb[d][p];
            u_gth += vel.u[d][p] * gth[d][p];
            if (!V.is_zero()) u_gV += vel.u[d][p] * mfac * V.grad(d)[p];
        }
        const double dtV = V.is_zero() ? 0.0 : mdot * V.profile()[p];

        nb[p] = -u_gb - b[p] * vel.divu[p] - dtV - (Vp * vel.divu[p] + u_gV);

        const double heating = 2.0 * par.mu * deformation_sq(vel, dim, p) +
                               par.lambda * vel.divu[p] * vel.divu[p];
        nth[p] = -u_gth - th[p] * vel.divu[p] + eps * ginv * heating -
                 par.kappa * eps * a * ginv * lap_th[p];

        const double coef = (a - th[p]) * ginv;
        const double acoef = eps * a * ginv;
        for (int d = 0; d < dim; ++d) {
            double u_gu = 0.0;
            for (int e = 0; e < dim; ++e) u_gu += vel.u[e][p] * vel.du[static_cast<std::size_t>(e) * dim + d][p];
            const double ga = gb[d][p] + (V.is_zero() ? 0.0 : mfac * V.grad(d)[p]);
            nu[d][p] = -u_gu + coef * ga - acoef * au[d][p];
        }
    }
    if (min_density < 0.1)
        throw VacuumApproached("rhs_conducting: min(1 + eps a) = " + std::to_string(min_density));

    ConductingTendency out{SpectralField(g, 1), SpectralField(g, dim), SpectralField(g, 1)};
    out.b.comp(0) = fft::from_phys(g, nb);
    out.theta.comp(0) = fft::from_phys(g, nth);
    for (int d = 0; d < dim; ++d) out.u.comp(d) = fft::from_phys(g, nu[d]);
    dealias_inplace(out.b);
    dealias_inplace(out.u);
    dealias_inplace(out.theta);
    return out;
}

NonConductingTendency rhs_nonconducting(const NonConductingState& state, const PhysParams& par,
                                        const PotentialOnGrid& V) {
    const GridSpec& g = state.a.grid();
    const int dim = g.dim;
    const std::size_t npts = g.points();
    const double eps = par.eps;

    PhysScratch vel = velocity_phys(g, state.u);
    RealSamples a = fft::to_phys(g, state.a.comp(0));
    RealSamples R = fft::to_phys(g, state.R.comp(0));
    std::vector<RealSamples> ga(dim), gR(dim);
    {
        SpectralField gaf = gradient(state.a), gRf = gradient(state.R);
        for (int d = 0; d < dim; ++d) {
            ga[d] = fft::to_phys(g, gaf.comp(d));
            gR[d] = fft::to_phys(g, gRf.comp(d));
        }
    }
    std::vector<RealSamples> au(dim);
    {
        SpectralField auf(g, dim);
        for_each_mode(g, [&](std::size_t i, const std::array<int, 3>&, const std::array<double, 3>& xi,
                             double r2) {
            cplx div(0.0, 0.0);
            for (int d = 0; d < dim; ++d) div += cplx(0.0, 1.0) * xi[d] * state.u.comp(d)[i];
            for (int d = 0; d < dim; ++d)
                auf.comp(d)[i] =
                    -par.mu * r2 * state.u.comp(d)[i] + (par.lambda + par.mu) * cplx(0.0, 1.0) * xi[d] * div;
        });
        for (int d = 0; d < dim; ++d) au[d] = fft::to_phys(g, auf.comp(d));
    }

    const double mfac = V.factor(state.t);
    const double mdot = V.factor_dot(state.t);

    RealSamples na(npts), nR(npts);
    std::vector<RealSamples> nu(dim, RealSamples(npts));
    double min_density = 1e300;
    for (std::size_t p = 0; p < npts; ++p) {
        const double dens = 1.0 + eps * a[p];
        min_density = std::min(min_density, dens);
        const double ginv = 1.0 / dens;
        const double Vp = V.is_zero() ? 0.0 : mfac * V.profile()[p];

        double u_ga = 0.0, u_gR = 0.0, u_gV = 0.0;
        for (int d = 0; d < dim; ++d) {
            u_ga += vel.u[d][p] * ga[d][p];
            u_gR += vel.u[d][p] * gR[d][p];
            if (!V.is_zero()) u_gV += vel.u[d][p] * mfac * V.grad(d)[p];
        }
        na[p] = -u_ga - a[p] * vel.divu[p];

        const double heating = 2.0 * par.mu * deformation_sq(vel, dim, p) +
                               par.lambda * vel.divu[p] * vel.divu[p];
        const double dtV = V.is_zero() ? 0.0 : mdot * V.profile()[p];
        nR[p] = -u_gR - R[p] * vel.divu[p] + eps * heating - dtV - (Vp * vel.divu[p] + u_gV);

        const double acoef = eps * a[p] * ginv;
        const double fcoef = a[p] * ginv;
        for (int d = 0; d < dim; ++d) {
            double u_gu = 0.0;
            for (int e = 0; e < dim; ++e) u_gu += vel.u[e][p] * vel.du[static_cast<std::size_t>(e) * dim + d][p];
            const double gVd = V.is_zero() ? 0.0 : mfac * V.grad(d)[p];
            nu[d][p] = -u_gu - acoef * au[d][p] + fcoef * (gR[d][p] + gVd);
        }
    }
    if (min_density < 0.1)
        throw VacuumApproached("rhs_nonconducting: min(1 + eps a) = " + std::to_string(min_density));

    NonConductingTendency out{SpectralField(g, 1), SpectralField(g, dim), SpectralField(g, 1)};
    out.a.comp(0) = fft::from_phys(g, na);
    out.R.comp(0) = fft::from_phys(g, nR);
    for (int d = 0; d < dim; ++d) out.u.comp(d) = fft::from_phys(g, nu[d]);
    dealias_inplace(out.a);
    dealias_inplace(out.u);
    dealias_inplace(out.R);
    return out;
}

namespace {

// mode-space representation (b|a, d, theta|R) + solenoidal w
struct ModeArrays {
    std::vector<cplx> s0, d, s2;
    std::vector<std::vector<cplx>> w;
};

ModeArrays to_modes(const GridSpec& g, const SpectralField& s0f, const SpectralField& uf,
                    const SpectralField& s2f) {
    ModeArrays m;
    const std::size_t n = g.points();
    m.s0 = s0f.comp(0);
    m.s2 = s2f.comp(0);
    m.d.assign(n, cplx(0.0, 0.0));
    m.w.assign(g.dim, std::vector<cplx>(n));
    for_each_mode(g, [&](std::size_t i, const std::array<int, 3>&, const std::array<double, 3>& xi, double r2) {
        if (r2 == 0.0) {
            for (int c = 0; c < g.dim; ++c) m.w[c][i] = uf.comp(c)[i];
            return;
        }
        const double r = std::sqrt(r2);
        cplx dot(0.0, 0.0);
        for (int c = 0; c < g.dim; ++c) dot += xi[c] * uf.comp(c)[i];
        m.d[i] = cplx(0.0, 1.0) * dot / r;
        for (int c = 0; c < g.dim; ++c) m.w[c][i] = uf.comp(c)[i] - xi[c] * dot / r2;
    });
    return m;
}

void from_modes(const GridSpec& g, const ModeArrays& m, SpectralField& s0f, SpectralField& uf,
                SpectralField& s2f) {
    s0f.comp(0) = m.s0;
    s2f.comp(0) = m.s2;
    for_each_mode(g, [&](std::size_t i, const std::array<int, 3>&, const std::array<double, 3>& xi, double r2) {
        if (r2 == 0.0) {
            for (int c = 0; c < g.dim; ++c) uf.comp(c)[i] = m.w[c][i];
            return;
        }
        const double r = std::sqrt(r2);
        for (int c = 0; c < g.dim; ++c)
            uf.comp(c)[i] = m.w[c][i] - cplx(0.0, 1.0) * (xi[c] / r) * m.d[i];
    });
}

// y += M v for a real 3x3 matrix acting on a complex 3-vector
inline void accum3(const Eigen::Matrix3d& M, const cplx& a, const cplx& b, const cplx& c, cplx* y) {
    y[0] += M(0, 0) * a + M(0, 1) * b + M(0, 2) * c;
    y[1] += M(1, 0) * a + M(1, 1) * b + M(1, 2) * c;
    y[2] += M(2, 0) * a + M(2, 1) * b + M(2, 2) * c;
}

// U <- E*U + sum_k W_k * N_k applied shell-wise; which selects the stage
// tables (0: half step, 1: full step with phi1, 2: final combination)
struct StageOp {
    const GridSpec& g;
    const std::vector<Prop3>& props;
    const std::vector<PropScalar>& heat;

    void combine(ModeArrays& out, const ModeArrays& u0, int which,
                 const std::vector<const ModeArrays*>& tendencies) const {
        for_each_mode(g, [&](std::size_t i, const std::array<int, 3>& k, const std::array<double, 3>&, double) {
            std::size_t k2 = 0;
            for (int d = 0; d < g.dim; ++d) k2 += static_cast<std::size_t>(k[d]) * k[d];
            const Prop3& P = props[k2];
            const PropScalar& H = heat[k2];

            cplx acc[3] = {cplx(0, 0), cplx(0, 0), cplx(0, 0)};
            accum3(which == 0 ? P.e_half : P.e_full, u0.s0[i], u0.d[i], u0.s2[i], acc);
            const double Es = which == 0 ? H.e_half : H.e_full;
            for (std::size_t t = 0; t < tendencies.size(); ++t) {
                const ModeArrays& N = *tendencies[t];
                const Eigen::Matrix3d* W;
                double Ws;
                if (which == 0) {
                    W = &P.p1_half;
                    Ws = H.p1_half;
                } else if (which == 1) {
                    W = &P.p1_full;
                    Ws = H.p1_full;
                } else {
                    W = t == 0 ? &P.w1 : (t == 1 ? &P.w2 : &P.w3);
                    Ws = t == 0 ? H.w1 : (t == 1 ? H.w2 : H.w3);
                }
                accum3(*W, N.s0[i], N.d[i], N.s2[i], acc);
                for (int c = 0; c < g.dim; ++c) out.w[c][i] += Ws * N.w[c][i];
            }
            out.s0[i] = acc[0];
            out.d[i] = acc[1];
            out.s2[i] = acc[2];
            for (int c = 0; c < g.dim; ++c) out.w[c][i] += Es * u0.w[c][i];
        });
    }
};

ModeArrays zero_like(const GridSpec& g, const ModeArrays& a) {
    ModeArrays z;
    z.s0.assign(a.s0.size(), cplx(0.0, 0.0));
    z.d.assign(a.d.size(), cplx(0.0, 0.0));
    z.s2.assign(a.s2.size(), cplx(0.0, 0.0));
    z.w.assign(g.dim, std::vector<cplx>(a.s0.size(), cplx(0.0, 0.0)));
    return z;
}

// per-shell generators: conducting (b,d,theta), nonconducting (a,d,R)
Eigen::Matrix3d linear_block(double r, const PhysParams& par, ModeVariant variant) {
    const double re = r / par.eps;
    const double nr2 = par.nu() * r * r;
    Eigen::Matrix3d L;
    if (variant == ModeVariant::Conducting) {
        L << 0.0, -re, 0.0,
             re, -nr2, re,
             0.0, -re, -par.kappa * r * r;
    } else {
        L << 0.0, -re, 0.0,
             0.0, -nr2, re,
             0.0, -re, 0.0;
    }
    return L;
}

void build_props(const GridSpec& g, const PhysParams& par, ModeVariant variant, double dt,
                 std::vector<Prop3>& props, std::vector<PropScalar>& heat) {
    const std::size_t kmax = max_k2(g);
    props.resize(kmax + 1);
    heat.resize(kmax + 1);
    const double dxi = g.xi_min();
    for (std::size_t k2 = 0; k2 <= kmax; ++k2) {
        const double r = dxi * std::sqrt(static_cast<double>(k2));
        props[k2] = make_prop3(k2 == 0 ? Eigen::Matrix3d::Zero() : linear_block(r, par, variant), dt);
        heat[k2] = make_prop_scalar(-par.mu * r * r, dt);
    }
}

}  // namespace

ConductingStepper::ConductingStepper(const GridSpec& grid, const PhysParams& par, const PotentialOnGrid* V,
                                     double dt, const StepOptions& opt)
    : grid_(grid), par_(par), V_(V), dt_(dt), opt_(opt) {
    grid_.validate();
    par_.validate();
    if (dt <= 0.0) throw ConfigError("ConductingStepper: dt must be positive");
    build_props(grid_, par_, ModeVariant::Conducting, dt_, props_, heat_w_);
}

NonConductingStepper::NonConductingStepper(const GridSpec& grid, const PhysParams& par,
                                           const PotentialOnGrid* V, double dt, const StepOptions& opt)
    : grid_(grid), par_(par), V_(V), dt_(dt), opt_(opt) {
    grid_.validate();
    par_.validate();
    if (dt <= 0.0) throw ConfigError("NonConductingStepper: dt must be positive");
    build_props(grid_, par_, ModeVariant::NonConducting, dt_, props_, heat_w_);
}

namespace {

const PotentialOnGrid& zero_potential(const GridSpec& g) {
    static std::unordered_map<long long, std::unique_ptr<PotentialOnGrid>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    const long long key = static_cast<long long>(g.dim) * 1000000 + g.n;
    auto& slot = cache[key];
    if (!slot) slot = std::make_unique<PotentialOnGrid>(g, PotentialSpec{});
    return *slot;
}

}  // namespace

ConductingState ConductingStepper::step(const ConductingState& s) const {
    const GridSpec& g = grid_;
    const PotentialOnGrid& V = V_ ? *V_ : zero_potential(g);
    StageOp op{g, props_, heat_w_};
    ModeArrays u0 = to_modes(g, s.b, s.u, s.theta);

    auto tendency_modes = [&](const ConductingState& st) {
        ConductingTendency n = rhs_conducting(st, par_, V);
        return to_modes(g, n.b, n.u, n.theta);
    };
    auto assemble = [&](const ModeArrays& m, double t) {
        ConductingState st{SpectralField(g, 1), SpectralField(g, g.dim), SpectralField(g, 1), t};
        from_modes(g, m, st.b, st.u, st.theta);
        return st;
    };

    if (opt_.disable_nonlinearity) {
        ModeArrays out = zero_like(g, u0);
        op.combine(out, u0, 1, {});
        return assemble(out, s.t + dt_);
    }

    check_cfl(g, dt_, lp_norm(s.u, std::numeric_limits<double>::infinity()), opt_.cfl);

    ModeArrays n1 = tendency_modes(s);
    ModeArrays am = zero_like(g, u0);
    op.combine(am, u0, 0, {&n1});
    ModeArrays n2 = tendency_modes(assemble(am, s.t + 0.5 * dt_));

    // b-stage: E u0 + h phi1 (2 N2 - N1)
    ModeArrays comb = zero_like(g, u0);
    for (std::size_t i = 0; i < comb.s0.size(); ++i) {
        comb.s0[i] = 2.0 * n2.s0[i] - n1.s0[i];
        comb.d[i] = 2.0 * n2.d[i] - n1.d[i];
        comb.s2[i] = 2.0 * n2.s2[i] - n1.s2[i];
        for (int c = 0; c < g.dim; ++c) comb.w[c][i] = 2.0 * n2.w[c][i] - n1.w[c][i];
    }
    ModeArrays bm = zero_like(g, u0);
    op.combine(bm, u0, 1, {&comb});
    ModeArrays n3 = tendency_modes(assemble(bm, s.t + dt_));

    ModeArrays out = zero_like(g, u0);
    op.combine(out, u0, 2, {&n1, &n2, &n3});
    return assemble(out, s.t + dt_);
}

NonConductingState NonConductingStepper::step(const NonConductingState& s) const {
    const GridSpec& g = grid_;
    const PotentialOnGrid& V = V_ ? *V_ : zero_potential(g);
    StageOp op{g, props_, heat_w_};
    ModeArrays u0 = to_modes(g, s.a, s.u, s.R);

    auto tendency_modes = [&](const NonConductingState& st) {
        NonConductingTendency n = rhs_nonconducting(st, par_, V);
        return to_modes(g, n.a, n.u, n.R);
    };
    auto assemble = [&](const ModeArrays& m, double t) {
        NonConductingState st{SpectralField(g, 1), SpectralField(g, g.dim), SpectralField(g, 1), t};
        from_modes(g, m, st.a, st.u, st.R);
        return st;
    };

    if (opt_.disable_nonlinearity) {
        ModeArrays out = zero_like(g, u0);
        op.combine(out, u0, 1, {});
        return assemble(out, s.t + dt_);
    }

    check_cfl(g, dt_, lp_norm(s.u, std::numeric_limits<double>::infinity()), opt_.cfl);

    ModeArrays n1 = tendency_modes(s);
    ModeArrays am = zero_like(g, u0);
    op.combine(am, u0, 0, {&n1});
    ModeArrays n2 = tendency_modes(assemble(am, s.t + 0.5 * dt_));

    ModeArrays comb = zero_like(g, u0);
    for (std::size_t i = 0; i < comb.s0.size(); ++i) {
        comb.s0[i] = 2.0 * n2.s0[i] - n1.s0[i];
        comb.d[i] = 2.0 * n2.d[i] - n1.d[i];
        comb.s2[i] = 2.0 * n2.s2[i] - n1.s2[i];
        for (int c = 0; c < g.dim; ++c) comb.w[c][i] = 2.0 * n2.w[c][i] - n1.w[c][i];
    }
    ModeArrays bm = zero_like(g, u0);
    op.combine(bm, u0, 1, {&comb});
    ModeArrays n3 = tendency_modes(assemble(bm, s.t + dt_));

    ModeArrays out = zero_like(g, u0);
    op.combine(out, u0, 2, {&n1, &n2, &n3});
    return assemble(out, s.t + dt_);
}

}  // namespace ob
