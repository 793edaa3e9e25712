#include "ob/paraproduct.hpp"

#include <algorithm>

#include "ob/spectral_ops.hpp"

namespace ob {

namespace {

// accumulate sum_j phys(A_j f) * phys(B_j g) and transform back
template <typename LeftOp, typename RightOp>
SpectralField bilinear_sum(const SpectralField& f, const DyadicFilterBank& bank,
                           LeftOp&& left, RightOp&& right) {
    const GridSpec& grid = f.grid();
    RealSamples acc(grid.points(), 0.0);
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        RealSamples a = fft::to_phys(grid, left(j).comp(0));
        RealSamples b = fft::to_phys(grid, right(j).comp(0));
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += a[i] * b[i];
    }
    SpectralField out(grid, 1);
    out.comp(0) = fft::from_phys(grid, acc);
    dealias_inplace(out);
    return out;
}

}  // namespace

SpectralField paraproduct(const SpectralField& f, const SpectralField& g, const DyadicFilterBank& bank) {
    return bilinear_sum(
        f, bank, [&](int j) { return bank.low_pass(f, j - 1); }, [&](int j) { return bank.block(g, j); });
}

SpectralField remainder(const SpectralField& g, const SpectralField& f, const DyadicFilterBank& bank) {
    return bilinear_sum(
        f, bank, [&](int j) { return bank.block(f, j); }, [&](int j) { return bank.low_pass(g, j + 2); });
}

SpectralField paraconvection(const SpectralField& v, const SpectralField& z, const DyadicFilterBank& bank) {
    const GridSpec& grid = z.grid();
    SpectralField out(grid, 1);
    out.set_zero();
    for (int c = 0; c < v.rank(); ++c) {
        SpectralField dz = apply_symbol(z, symbols::partial(c));
        out += paraproduct(v.component(c), dz, bank);
    }
    return out;
}

PairingBound paraconv_pairing(const SpectralField& v, const SpectralField& z, int j,
                              const DyadicFilterBank& bank) {
    bank.check_block(j);
    SpectralField tz = paraconvection(v, z, bank);
    PairingBound out;
    out.lhs = std::abs(l2_inner(bank.block(tz, j), bank.block(z, j)));
    const double grad_v = grad_sup_norm(v);
    const double zj = bank.block_lp(z, j, 2.0);
    double neighbors = 0.0;
    for (int jp = std::max(bank.j_min(), j - kParaconvNeighborhood);
         jp <= std::min(bank.j_max(), j + kParaconvNeighborhood); ++jp)
        neighbors += bank.block_lp(z, jp, 2.0);
    out.rhs_bound = grad_v * zj * neighbors;
    return out;
}

}  // namespace ob
