#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <numbers>

#include "ob/paraproduct.hpp"
#include "ob/randomfields.hpp"
#include "oracles.hpp"

using namespace ob;

namespace {

GridSpec grid2(int n, double L) {
    GridSpec g;
    g.dim = 2;
    g.n = n;
    g.L = L;
    return g;
}

GridSpec grid3(int n, double L) {
    GridSpec g;
    g.dim = 3;
    g.n = n;
    g.L = L;
    return g;
}

// plane wave cos(xi . x) at integer mode k along the x-axis
SpectralField plane_wave(const GridSpec& g, int kx) {
    SpectralField f(g, 1);
    f.set_zero();
    for_each_mode(g, [&](std::size_t i, const std::array<int, 3>& k, const std::array<double, 3>&, double) {
        if (std::abs(k[0]) == kx) {
            bool rest = true;
            for (int d = 1; d < g.dim; ++d) rest = rest && k[d] == 0;
            if (rest) f[i] = cplx(0.5, 0.0);
        }
    });
    return f;
}

// Fourier-side Gaussian family, L^2-normalized: scaling sigma -> sigma/2
// shifts every dyadic block up by one
SpectralField gaussian_l2(const GridSpec& g, double sigma) {
    SpectralField f(g, 1);
    for_each_mode(g, [&](std::size_t i, const std::array<int, 3>&, const std::array<double, 3>&, double r2) {
        f[i] = cplx(std::exp(-0.5 * sigma * sigma * r2), 0.0);
    });
    zero_mean(f);
    const double n = l2_norm(f);
    f *= 1.0 / n;
    return f;
}

}  // namespace

TEST_CASE("chi profile satisfies the support constraints") {
    CHECK(chi_profile(0.0) == 1.0);
    CHECK(chi_profile(0.75) == 1.0);
    CHECK(chi_profile(4.0 / 3.0) == 0.0);
    CHECK(chi_profile(2.0) == 0.0);
    double prev = 1.0;
    for (double r = 0.0; r <= 2.0; r += 0.01) {
        const double v = chi_profile(r);
        CHECK(v <= prev + 1e-15);  // non-increasing
        prev = v;
    }
}

TEST_CASE("partition of unity on covered modes") {
    const GridSpec g = grid2(64, 2.0 * std::numbers::pi);
    const DyadicFilterBank bank(g);
    // sum of ring profiles telescopes to chi(2^{-(jmax+1)} xi) - chi(2^{-jmin} xi)
    for_each_mode(g, [&](std::size_t, const std::array<int, 3>& k, const std::array<double, 3>&, double r2) {
        const double r = std::sqrt(r2);
        if (r == 0.0 || r > bank.coverage_radius()) return;
        std::size_t k2 = 0;
        for (int d = 0; d < g.dim; ++d) k2 += static_cast<std::size_t>(k[d]) * k[d];
        double sum = 0.0;
        for (int j = bank.j_min(); j <= bank.j_max(); ++j) sum += bank.block_multiplier(j, k2);
        CHECK(std::abs(sum - 1.0) < 1e-10);
    });
}

TEST_CASE("reconstruction from blocks for band-limited mean-free fields") {
    const GridSpec g = grid2(64, 2.0 * std::numbers::pi);
    const DyadicFilterBank bank(g);
    SpectralField z = random_band_field(g, 1, 17, 1.0, bank.coverage_radius() / g.xi_min(), 1.0);
    SpectralField sum(g, 1);
    sum.set_zero();
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) sum += bank.block(z, j);
    CHECK(l2_norm(sum - z) < 1e-10 * l2_norm(z));
}

TEST_CASE("single plane wave touches at most two blocks") {
    const GridSpec g = grid2(64, 2.0 * std::numbers::pi);  // xi = k on this box
    const DyadicFilterBank bank(g);
    SpectralField z = plane_wave(g, 1);  // |xi| = 1
    int nonzero = 0;
    for (int j = bank.j_min(); j <= bank.j_max(); ++j)
        if (bank.block_lp(z, j, 2.0) > 1e-14) ++nonzero;
    CHECK(nonzero >= 1);
    CHECK(nonzero <= 2);
}

TEST_CASE("block energies of a Gaussian peak near j = log2(1/sigma)") {
    const GridSpec g = grid2(128, 2.0 * std::numbers::pi);
    const DyadicFilterBank bank(g);
    const double sigma = 0.25;  // expect peak around j = 2
    SpectralField z = gaussian_l2(g, sigma);
    // oracle: direct Fourier sum of |phi(2^-j xi)|^2 |z^(xi)|^2 per block
    int best_j = 0;
    double best = -1.0;
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        double acc = 0.0;
        for_each_mode(g, [&](std::size_t i, const std::array<int, 3>&, const std::array<double, 3>&, double r2) {
            const double r = std::sqrt(r2);
            const double m = phi_profile(std::ldexp(r, -j));
            acc += m * m * std::norm(z[i]);
        });
        if (acc > best) {
            best = acc;
            best_j = j;
        }
        // the library block energy must match the direct sum
        const double lib = bank.block_lp(z, j, 2.0);
        CHECK(lib * lib == doctest::Approx(acc * std::pow(g.L, g.dim)).epsilon(1e-10));
    }
    const double expect = std::log2(1.0 / sigma);
    CHECK(std::abs(best_j - expect) <= 1.0);
}

TEST_CASE("low/high split") {
    const GridSpec g = grid2(64, 2.0 * std::numbers::pi);
    const DyadicFilterBank bank(g);
    SpectralField z = random_band_field(g, 1, 23, 1.0, bank.coverage_radius() / g.xi_min(), 1.0);

    SUBCASE("alpha below 2^-jmax leaves no high part") {
        auto [lo, hi] = low_high_split(z, std::ldexp(1.0, -bank.j_max() - 1), bank);
        CHECK(l2_norm(hi) == 0.0);
    }
    SUBCASE("alpha = 1 splits at j = 0") {
        auto [lo, hi] = low_high_split(z, 1.0, bank);
        for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
            const double l = bank.block_lp(lo, j, 2.0);
            const double h = bank.block_lp(hi, j, 2.0);
            // blocks overlap neighbours, so check two rings away from the cut
            if (j < -1) CHECK(h < 1e-12);
            if (j > 1) CHECK(l < 1e-12);
        }
    }
    SUBCASE("Plancherel reconstruction") {
        auto [lo, hi] = low_high_split(z, 0.1, bank);
        SpectralField sum = lo + hi;
        CHECK(l2_norm(sum - z) < 1e-10 * l2_norm(z));
        // direct summation cross-check of the energies
        const double a = l2_norm(lo), b = l2_norm(hi), c = l2_norm(z);
        const double cross = l2_inner(lo, hi);
        CHECK(a * a + b * b + 2.0 * cross == doctest::Approx(c * c).epsilon(1e-10));
    }
}

TEST_CASE("besov norm of zero field") {
    const GridSpec g = grid2(32, 2.0 * std::numbers::pi);
    const DyadicFilterBank bank(g);
    SpectralField z(g, 1);
    z.set_zero();
    CHECK(besov_norm(z, 0.5, 2.0, bank) == 0.0);
}

TEST_CASE("besov norm of a mid-ring plane wave matches the direct block evaluation") {
    const GridSpec g = grid2(64, 2.0 * std::numbers::pi);
    const DyadicFilterBank bank(g);
    const int k0 = 4;  // 2^2, mid-ring for j = 2
    SpectralField z = plane_wave(g, k0);
    const double s = 0.7, p = 2.0;
    const double norm = besov_norm(z, s, p, bank);
    // direct evaluation: sum over the blocks that see |xi| = 4
    double direct = 0.0;
    for (int j = bank.j_min(); j <= bank.j_max(); ++j)
        direct += std::pow(2.0, j * s) * lp_norm(bank.block(z, j), p);
    CHECK(norm == doctest::Approx(direct).epsilon(1e-12));
    // within the ring-overlap factor of the single-block value
    const double single = std::pow(2.0, 2 * s) * lp_norm(z, p);
    CHECK(norm >= 0.5 * single);
    CHECK(norm <= 2.0 * single);
}

TEST_CASE("Gaussian family: norm(sigma/2)/norm(sigma) tracks 2^s") {
    const GridSpec g = grid2(128, 16.0);
    const DyadicFilterBank bank(g);
    for (double s : {0.5, 1.5}) {
        double prev = 0.0;
        for (double sigma : {1.0, 0.5, 0.25}) {
            // rescale x -> 2x with the L^2-preserving factor 2^{d/2}
            const double norm = besov_norm(gaussian_l2(g, sigma), s, 2.0, bank);
            if (prev > 0.0) {
                const double ratio = norm / prev;
                CHECK(ratio == doctest::Approx(std::pow(2.0, s)).epsilon(0.05));
            }
            prev = norm;
        }
    }
}

TEST_CASE("mean-free precondition for nonpositive s") {
    const GridSpec g = grid2(32, 2.0 * std::numbers::pi);
    const DyadicFilterBank bank(g);
    SpectralField z(g, 1);
    z.set_zero();
    z[0] = cplx(1.0, 0.0);
    CHECK_THROWS_AS(besov_norm(z, -0.5, 2.0, bank), SingularSymbolOnMeanMode);
}

TEST_CASE("hybrid norm: split form equals the direct weighted sum") {
    const GridSpec g = grid2(64, 2.0 * std::numbers::pi);
    const DyadicFilterBank bank(g);
    SpectralField z = random_band_field(g, 1, 31, 1.0, bank.coverage_radius() / g.xi_min(), 2.0, 2.5);
    for (HybridSign sign : {HybridSign::Plus, HybridSign::Minus}) {
        for (double alpha : {0.125, 0.3}) {
            BesovParams params{0.8, 2.0, sign, alpha};
            const double direct = hybrid_norm(z, params, bank);
            const double split = hybrid_norm_split_form(z, params, bank);
            CHECK(direct == doctest::Approx(split).epsilon(1e-10));
        }
    }
}

TEST_CASE("hybrid norm: purely low-frequency field with sign minus") {
    const GridSpec g = grid2(64, 2.0 * std::numbers::pi);
    const DyadicFilterBank bank(g);
    // field supported strictly below the alpha threshold 1/alpha = 2^3
    SpectralField z = random_band_field(g, 1, 37, 1.0, 3.9, 1.0);
    const double alpha = 0.125;
    BesovParams hy{1.0, 2.0, HybridSign::Minus, alpha};
    // weight min(1/alpha, 2^j)^{-1} = 2^{-j} on low blocks: equals B^{s-1}
    CHECK(hybrid_norm(z, hy, bank) == doctest::Approx(besov_norm(z, 0.0, 2.0, bank)).epsilon(1e-10));
}

TEST_CASE("hybrid norms with different alpha are equivalent within the alpha ratio") {
    const GridSpec g = grid2(64, 2.0 * std::numbers::pi);
    const DyadicFilterBank bank(g);
    SpectralField z = random_band_field(g, 1, 41, 1.0, bank.coverage_radius() / g.xi_min(), 1.0, 2.5);
    const double a1 = 0.1, a2 = 0.35;
    for (HybridSign sign : {HybridSign::Plus, HybridSign::Minus}) {
        const double n1 = hybrid_norm(z, {0.5, 2.0, sign, a1}, bank);
        const double n2 = hybrid_norm(z, {0.5, 2.0, sign, a2}, bank);
        const double bound = std::max(a1 / a2, a2 / a1);
        CHECK(n1 / n2 <= bound * (1.0 + 1e-12));
        CHECK(n2 / n1 <= bound * (1.0 + 1e-12));
    }
}

TEST_CASE("time besov norms") {
    const GridSpec g = grid2(32, 2.0 * std::numbers::pi);
    const DyadicFilterBank bank(g);
    SpectralField z = random_band_field(g, 1, 51, 1.0, 8.0, 1.0, 2.5);
    BesovParams sp{0.5, 2.0, HybridSign::None, 1.0};

    SUBCASE("single snapshot, q = inf equals the static norm") {
        const double v = time_besov_norm({z}, 0.1, std::numeric_limits<double>::infinity(), sp, bank);
        CHECK(v == doctest::Approx(besov_norm(z, 0.5, 2.0, bank)).epsilon(1e-13));
    }
    SUBCASE("constant trajectory, q = 1 gives T times the static norm") {
        std::vector<SpectralField> traj(9, z);
        const double dt = 0.25;  // T = 2
        const double v = time_besov_norm(traj, dt, 1.0, sp, bank);
        CHECK(v == doctest::Approx(2.0 * besov_norm(z, 0.5, 2.0, bank)).epsilon(1e-12));
    }
    SUBCASE("Minkowski ordering against the plain time norm") {
        std::vector<SpectralField> traj;
        for (int i = 0; i < 8; ++i) {
            SpectralField zi = random_band_field(g, 1, 60 + i, 1.0, 8.0, 1.0, 2.5);
            traj.push_back(zi);
        }
        const double dt = 0.1;
        const double tilde2 = time_besov_norm(traj, dt, 2.0, sp, bank);
        const double plain2 = lq_besov_norm(traj, dt, 2.0, sp, bank);
        CHECK(plain2 <= tilde2 * (1.0 + 1e-12));
        const double tilde1 = time_besov_norm(traj, dt, 1.0, sp, bank);
        const double plain1 = lq_besov_norm(traj, dt, 1.0, sp, bank);
        CHECK(tilde1 == doctest::Approx(plain1).epsilon(1e-12));
    }
    SUBCASE("empty sequence throws") {
        std::vector<SpectralField> traj;
        CHECK_THROWS_AS(time_besov_norm(traj, 0.1, 2.0, sp, bank), EmptySequence);
    }
}

TEST_CASE("paraproduct") {
    const GridSpec g = grid2(64, 2.0 * std::numbers::pi);
    const DyadicFilterBank bank(g);

    SUBCASE("constant left factor reproduces the field") {
        SpectralField c(g, 1);
        c.set_zero();
        c[0] = cplx(3.0, 0.0);
        SpectralField z = random_band_field(g, 1, 71, 1.0, bank.coverage_radius() / g.xi_min(), 1.0);
        SpectralField tg = paraproduct(c, z, bank);
        CHECK(l2_norm(tg - 3.0 * z) < 1e-10 * l2_norm(z));
    }
    SUBCASE("zero right factor") {
        SpectralField z(g, 1);
        z.set_zero();
        SpectralField f = random_band_field(g, 1, 72, 1.0, 8.0, 1.0);
        CHECK(l2_norm(paraproduct(f, z, bank)) == 0.0);
    }
    SUBCASE("Bony identity on random band-limited fields") {
        const double band = bank.coverage_radius() / g.xi_min();
        for (int trial = 0; trial < 3; ++trial) {
            SpectralField f = random_band_field(g, 1, 80 + trial, 1.0, band, 1.0);
            SpectralField h = random_band_field(g, 1, 90 + trial, 1.0, band, 1.0);
            SpectralField sum = paraproduct(f, h, bank) + remainder(h, f, bank);
            RealSamples fp = fft::to_phys(g, f.comp(0)), hp = fft::to_phys(g, h.comp(0));
            for (std::size_t i = 0; i < fp.size(); ++i) fp[i] *= hp[i];
            SpectralField prod(g, 1);
            prod.comp(0) = fft::from_phys(g, fp);
            dealias_inplace(prod);
            CHECK(l2_norm(sum - prod) < 1e-10 * l2_norm(prod));
        }
    }
}

TEST_CASE("paraconvection pairing") {
    const GridSpec g = grid2(64, 2.0 * std::numbers::pi);
    const DyadicFilterBank bank(g);

    SUBCASE("zero velocity") {
        SpectralField v(g, g.dim);
        v.set_zero();
        SpectralField z = random_band_field(g, 1, 99, 1.0, 8.0, 1.0);
        PairingBound pb = paraconv_pairing(v, z, 0, bank);
        CHECK(pb.lhs == 0.0);
    }
    SUBCASE("constant velocity gives vanishing pairing") {
        SpectralField v(g, g.dim);
        v.set_zero();
        for (int c = 0; c < g.dim; ++c) v.comp(c)[0] = cplx(0.7 - 0.2 * c, 0.0);
        SpectralField z = random_band_field(g, 1, 101, 1.0, 8.0, 1.0);
        for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
            PairingBound pb = paraconv_pairing(v, z, j, bank);
            const double zj = bank.block_lp(z, j, 2.0);
            CHECK(pb.lhs <= 1e-10 * std::max(1.0, zj * l2_norm(z)));
        }
    }
    SUBCASE("random pairs stay within a bounded constant") {
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            SpectralField v = solenoidal_band_field(g, 300 + trial, 1.0, g.n / 6.0, 1.0);
            SpectralField z = random_band_field(g, 1, 400 + trial, 1.0, g.n / 3.0, 1.0);
            for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
                PairingBound pb = paraconv_pairing(v, z, j, bank);
                if (pb.rhs_bound > 1e-13) worst = std::max(worst, pb.lhs / pb.rhs_bound);
            }
        }
        CHECK(worst <= 10.0);
        CHECK(worst > 0.0);
    }
    SUBCASE("block out of range") {
        SpectralField v(g, g.dim), z(g, 1);
        v.set_zero();
        z.set_zero();
        CHECK_THROWS_AS(paraconv_pairing(v, z, bank.j_max() + 1, bank), BlockOutOfRange);
    }
}

TEST_CASE("product law constants stay bounded") {
    const GridSpec g = grid3(32, 2.0 * std::numbers::pi);
    const DyadicFilterBank bank(g);
    const double alpha = 0.25;
    // products spread to twice the band; keep them inside the top ring
    const double band = 0.5 * bank.coverage_radius() / g.xi_min();

    struct Cfg {
        double s, beta, p;
        HybridSign sign;
    };
    const std::vector<Cfg> cfgs = {
        {1.5, 0.0, 2.0, HybridSign::Minus}, {1.5, 1.0, 2.0, HybridSign::Minus},
        {1.0, 0.5, 4.0, HybridSign::Minus}, {0.5, 0.0, 2.0, HybridSign::Plus},
        {0.5, 1.0, 2.0, HybridSign::Plus},  {-0.25, 0.5, 4.0, HybridSign::Plus},
    };
    for (const auto& c : cfgs) {
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            SpectralField f = random_band_field(g, 1, 500 + trial, 1.0, band, 1.0, 2.0);
            SpectralField h = random_band_field(g, 1, 600 + trial, 1.0, band, 1.0, 2.0);
            RealSamples fp = fft::to_phys(g, f.comp(0)), hp = fft::to_phys(g, h.comp(0));
            for (std::size_t i = 0; i < fp.size(); ++i) fp[i] *= hp[i];
            SpectralField prod(g, 1);
            prod.comp(0) = fft::from_phys(g, fp);
            dealias_inplace(prod);
            zero_mean(prod);
            const double lhs = hybrid_norm(prod, {c.s - c.beta, c.p, c.sign, alpha}, bank);
            const double rhs = hybrid_norm(f, {c.s, c.p, c.sign, alpha}, bank) *
                               besov_norm(h, 1.5 - c.beta, 2.0, bank);
            if (rhs > 0.0) worst = std::max(worst, lhs / rhs);
        }
        CAPTURE(c.s);
        CAPTURE(c.beta);
        CAPTURE(c.p);
        CHECK(worst <= 50.0);
    }
}
