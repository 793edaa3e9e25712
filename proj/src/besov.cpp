#include "ob/besov.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ob/errors.hpp"
#include "ob/spectral_ops.hpp"

namespace ob {

void BesovParams::validate() const {
    if (p < 1.0) throw ConfigError("BesovParams: p must be >= 1");
    if (sign != HybridSign::None && alpha <= 0.0) throw ConfigError("BesovParams: alpha must be positive");
}

double BesovParams::block_weight(int j) const {
    const double two_j = std::ldexp(1.0, j);
    double w = std::pow(two_j, s);
    if (sign != HybridSign::None) {
        const double m = std::min(1.0 / alpha, two_j);
        w *= sign == HybridSign::Plus ? m : 1.0 / m;
    }
    return w;
}

std::string BesovParams::to_string() const {
    std::ostringstream os;
    if (sign == HybridSign::None) {
        os << "B^" << s << "_{" << p << ",1}";
    } else {
        os << "Bt^{" << s << "," << (sign == HybridSign::Plus ? "+" : "-") << "}_{" << p << ",alpha=" << alpha
           << "}";
    }
    return os.str();
}

SpectralField dyadic_block(const SpectralField& z, int j, const DyadicFilterBank& bank) {
    return bank.block(z, j);
}

std::pair<SpectralField, SpectralField> low_high_split(const SpectralField& z, double alpha,
                                                       const DyadicFilterBank& bank) {
    if (alpha <= 0.0) throw ConfigError("low_high_split: alpha must be positive");
    SpectralField low(z.grid(), z.rank()), high(z.grid(), z.rank());
    low.set_zero();
    high.set_zero();
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        SpectralField b = bank.block(z, j);
        if (std::ldexp(1.0, j) * alpha <= 1.0)
            low += b;
        else
            high += b;
    }
    return {std::move(low), std::move(high)};
}

namespace {

void require_mean_free_if(double s, const SpectralField& z, const char* who) {
    if (s <= 0.0 && mean_mode_magnitude(z) > 1e-12 * (1.0 + l2_norm(z)))
        throw SingularSymbolOnMeanMode(std::string(who) + ": s <= 0 requires a mean-free field");
}

NormResult weighted_sum(const std::vector<double>& block_lp, const BesovParams& params,
                        const DyadicFilterBank& bank, bool cauchy_check = true) {
    double total = 0.0, top = 0.0;
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        const double w = params.block_weight(j) * block_lp[static_cast<std::size_t>(j - bank.j_min())];
        total += w;
        if (j == bank.j_max()) top = w;
    }
    NormResult r;
    r.value = total;
    r.tail_ratio = total > 0.0 ? top / total : 0.0;
    if (cauchy_check && r.tail_ratio > 0.5 && total > 0.0)
        throw NormDivergent("besov norm: top block carries ratio " + std::to_string(r.tail_ratio) +
                            " of the sum (Cauchy check failed at j_max)");
    return r;
}

}  // namespace

NormResult besov_norm_full(const SpectralField& z, double s, double p, const DyadicFilterBank& bank) {
    require_mean_free_if(s, z, "besov_norm");
    BesovParams params{s, p, HybridSign::None, 1.0};
    params.validate();
    return weighted_sum(bank.all_block_lp(z, p), params, bank);
}

double besov_norm(const SpectralField& z, double s, double p, const DyadicFilterBank& bank) {
    return besov_norm_full(z, s, p, bank).value;
}

NormResult hybrid_norm_full(const SpectralField& z, const BesovParams& params, const DyadicFilterBank& bank) {
    require_mean_free_if(params.s, z, "hybrid_norm");
    params.validate();
    return weighted_sum(bank.all_block_lp(z, params.p), params, bank);
}

double hybrid_norm(const SpectralField& z, const BesovParams& params, const DyadicFilterBank& bank) {
    return hybrid_norm_full(z, params, bank).value;
}

double hybrid_norm_unchecked(const SpectralField& z, const BesovParams& params, const DyadicFilterBank& bank) {
    params.validate();
    return weighted_sum(bank.all_block_lp(z, params.p), params, bank, false).value;
}

double besov_norm_unchecked(const SpectralField& z, double s, double p, const DyadicFilterBank& bank) {
    BesovParams params{s, p, HybridSign::None, 1.0};
    params.validate();
    return weighted_sum(bank.all_block_lp(z, p), params, bank, false).value;
}

double hybrid_norm_split_form(const SpectralField& z, const BesovParams& params, const DyadicFilterBank& bank) {
    // |z^l|_{B^{s+-1}} + alpha^{-+1} |z^h|_{B^s}, with the block sums grouped
    // by the threshold 2^j alpha <= 1 (blocks of z^l are blocks of z there)
    const double shift = params.sign == HybridSign::Plus ? 1.0 : -1.0;
    const double apow = params.sign == HybridSign::Plus ? 1.0 / params.alpha : params.alpha;
    const auto block_lp = bank.all_block_lp(z, params.p);
    double low = 0.0, high = 0.0;
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        const double lp = block_lp[static_cast<std::size_t>(j - bank.j_min())];
        if (std::ldexp(1.0, j) * params.alpha <= 1.0)
            low += std::pow(2.0, j * (params.s + shift)) * lp;
        else
            high += std::pow(2.0, j * params.s) * lp;
    }
    return low + apow * high;
}

void BlockSeries::append(const std::vector<double>& block_lp) {
    if (values.empty()) values.resize(block_lp.size());
    for (std::size_t b = 0; b < block_lp.size(); ++b) values[b].push_back(block_lp[b]);
}

BlockSeries make_block_series(const std::vector<SpectralField>& snapshots, double dt, double p,
                              const DyadicFilterBank& bank) {
    if (snapshots.empty()) throw EmptySequence("make_block_series: no snapshots");
    BlockSeries s;
    s.j_min = bank.j_min();
    s.dt = dt;
    s.p = p;
    for (const auto& snap : snapshots) s.append(bank.all_block_lp(snap, p));
    return s;
}

double lq_time_norm(const std::vector<double>& samples, double dt, double q) {
    if (samples.empty()) throw EmptySequence("lq_time_norm: no samples");
    if (std::isinf(q)) {
        double mx = 0.0;
        for (double v : samples) mx = std::max(mx, v);
        return mx;
    }
    if (samples.size() == 1) return 0.0;  // zero-length window
    double acc = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double w = (i == 0 || i + 1 == samples.size()) ? 0.5 : 1.0;
        acc += w * std::pow(samples[i], q);
    }
    return std::pow(dt * acc, 1.0 / q);
}

double time_besov_norm(const BlockSeries& series, double q, const BesovParams& params,
                       const DyadicFilterBank& bank) {
    if (series.samples() == 0) throw EmptySequence("time_besov_norm: empty series");
    params.validate();
    double total = 0.0;
    for (int j = bank.j_min(); j <= bank.j_max(); ++j)
        total += params.block_weight(j) * lq_time_norm(series.values[static_cast<std::size_t>(j - series.j_min)],
                                                       series.dt, q);
    return total;
}

double time_besov_norm(const std::vector<SpectralField>& snapshots, double dt, double q,
                       const BesovParams& params, const DyadicFilterBank& bank) {
    return time_besov_norm(make_block_series(snapshots, dt, params.p, bank), q, params, bank);
}

double lq_besov_norm(const std::vector<SpectralField>& snapshots, double dt, double q, const BesovParams& params,
                     const DyadicFilterBank& bank) {
    if (snapshots.empty()) throw EmptySequence("lq_besov_norm: no snapshots");
    std::vector<double> per_time;
    per_time.reserve(snapshots.size());
    for (const auto& snap : snapshots)
        per_time.push_back(weighted_sum(bank.all_block_lp(snap, params.p), params, bank).value);
    return lq_time_norm(per_time, dt, q);
}

}  // namespace ob
