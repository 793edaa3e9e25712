#include "ob/modesplit.hpp"

#include <cmath>

namespace ob {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

ModeSplit mode_split(const ConductingState& s) {
    const GridSpec& g = s.b.grid();
    ModeSplit m{SpectralField(g, 1), SpectralField(g, 1), SpectralField(g, g.dim), SpectralField(g, g.dim)};
    for (std::size_t i = 0; i < s.b.modes(); ++i) {
        m.q[i] = kInvSqrt2 * (s.theta[i] + s.b[i]);
        m.Theta[i] = kInvSqrt2 * (s.theta[i] - s.b[i]);
    }
    m.Qu = leray_project(s.u, LerayPart::Q);
    m.Pu = leray_project(s.u, LerayPart::P);
    return m;
}

ModeSplit mode_split(const NonConductingState& s, const PotentialOnGrid& V) {
    const GridSpec& g = s.a.grid();
    ModeSplit m{SpectralField(g, 1), SpectralField(g, 1), SpectralField(g, g.dim), SpectralField(g, g.dim)};
    m.q = s.R;
    m.Theta = s.a - s.R;
    if (!V.is_zero()) m.Theta -= V.value_field(s.t);
    m.Qu = leray_project(s.u, LerayPart::Q);
    m.Pu = leray_project(s.u, LerayPart::P);
    return m;
}

ConductingState mode_merge(const ModeSplit& m, double t) {
    const GridSpec& g = m.q.grid();
    ConductingState s{SpectralField(g, 1), SpectralField(g, g.dim), SpectralField(g, 1), t};
    for (std::size_t i = 0; i < m.q.modes(); ++i) {
        s.b[i] = kInvSqrt2 * (m.q[i] - m.Theta[i]);
        s.theta[i] = kInvSqrt2 * (m.q[i] + m.Theta[i]);
    }
    s.u = m.Pu + m.Qu;
    return s;
}

namespace {

// P(f * grad s) with the product formed in physical space and dealiased
SpectralField projected_product(const SpectralField& f, const SpectralField& grad_s) {
    const GridSpec& g = f.grid();
    RealSamples fp = fft::to_phys(g, f.comp(0));
    SpectralField prod(g, g.dim);
    for (int d = 0; d < g.dim; ++d) {
        RealSamples gp = fft::to_phys(g, grad_s.comp(d));
        for (std::size_t i = 0; i < gp.size(); ++i) gp[i] *= fp[i];
        prod.comp(d) = fft::from_phys(g, gp);
    }
    dealias_inplace(prod);
    return leray_project(prod, LerayPart::P);
}

}  // namespace

double relation_check(const ConductingState& s, const PotentialOnGrid& V) {
    const double rt2 = std::sqrt(2.0);

    SpectralField Vf = V.value_field(s.t);
    dealias_inplace(Vf);
    SpectralField a = s.b + Vf;
    SpectralField grad_a = gradient(a);
    SpectralField grad_b = gradient(s.b);
    SpectralField grad_V = gradient(Vf);

    ModeSplit m = mode_split(s);

    SpectralField lhs = rt2 * projected_product(s.theta, grad_a);
    SpectralField rhs = projected_product(m.Theta, grad_V);
    rhs += projected_product(m.q, grad_V);
    rhs += 2.0 * projected_product(m.q, grad_b);

    const double ln = l2_norm(lhs);
    const double diff = l2_norm(lhs - rhs);
    return ln > 0.0 ? diff / ln : diff;
}

GridSpec rescaled_grid(const GridSpec& g, double eps, double nu) {
    const double lam = eps * nu;
    const double l2 = std::log2(lam);
    if (std::abs(l2 - std::round(l2)) > 1e-12)
        throw IncompatibleScale("rescale: eps*nu = " + std::to_string(lam) + " must be a power of two");
    GridSpec out = g;
    out.L = g.L / lam;
    return out;
}

ConductingState rescale_state(const ConductingState& s, double eps, double nu) {
    const GridSpec ng = rescaled_grid(s.b.grid(), eps, nu);
    ConductingState out{SpectralField(ng, 1), SpectralField(ng, ng.dim), SpectralField(ng, 1),
                        s.t / (eps * eps * nu)};
    // grid samples coincide: z'(x') = eps z(eps nu x') is a relabeling of the
    // same points, so coefficients just scale by eps
    out.b.comp(0) = s.b.comp(0);
    out.theta.comp(0) = s.theta.comp(0);
    for (int c = 0; c < ng.dim; ++c) out.u.comp(c) = s.u.comp(c);
    out.b *= eps;
    out.u *= eps;
    out.theta *= eps;
    return out;
}

ConductingState unrescale_state(const ConductingState& s, double eps, double nu, const GridSpec& orig) {
    ConductingState out{SpectralField(orig, 1), SpectralField(orig, orig.dim), SpectralField(orig, 1),
                        s.t * eps * eps * nu};
    out.b.comp(0) = s.b.comp(0);
    out.theta.comp(0) = s.theta.comp(0);
    for (int c = 0; c < orig.dim; ++c) out.u.comp(c) = s.u.comp(c);
    const double inv = 1.0 / eps;
    out.b *= inv;
    out.u *= inv;
    out.theta *= inv;
    return out;
}

}  // namespace ob
