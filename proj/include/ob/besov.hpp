#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ob/filterbank.hpp"

namespace ob {

enum class HybridSign { None, Plus, Minus };

// Space descriptor: plain homogeneous Besov B^s_{p,1} or the hybrid variant
// with block weight min(alpha^{-1}, 2^j)^{+-1}.
struct BesovParams {
    double s = 0.0;
    double p = 2.0;
    HybridSign sign = HybridSign::None;
    double alpha = 1.0;  // hybrid threshold (ignored for plain)

    void validate() const;
    double block_weight(int j) const;  // 2^{js} * min(alpha^{-1},2^j)^{+-1}
    std::string to_string() const;
};

struct NormResult {
    double value = 0.0;
    double tail_ratio = 0.0;  // top-block share of the dyadic sum
};

SpectralField dyadic_block(const SpectralField& z, int j, const DyadicFilterBank& bank);

std::pair<SpectralField, SpectralField> low_high_split(const SpectralField& z, double alpha,
                                                       const DyadicFilterBank& bank);

NormResult besov_norm_full(const SpectralField& z, double s, double p, const DyadicFilterBank& bank);
double besov_norm(const SpectralField& z, double s, double p, const DyadicFilterBank& bank);

NormResult hybrid_norm_full(const SpectralField& z, const BesovParams& params, const DyadicFilterBank& bank);
double hybrid_norm(const SpectralField& z, const BesovParams& params, const DyadicFilterBank& bank);
// no Cauchy tail check: for internal monitors that accumulate truncated sums
double hybrid_norm_unchecked(const SpectralField& z, const BesovParams& params, const DyadicFilterBank& bank);
double besov_norm_unchecked(const SpectralField& z, double s, double p, const DyadicFilterBank& bank);
// equivalent split form |z^l|_{B^{s+-1}} + alpha^{-+1} |z^h|_{B^s}
double hybrid_norm_split_form(const SpectralField& z, const BesovParams& params, const DyadicFilterBank& bank);

// Per-block L^p time series of a trajectory, the raw material of the
// time-Lebesgue Besov norms.
struct BlockSeries {
    int j_min = 0;
    double dt = 0.0;
    double p = 2.0;
    // values[j - j_min][sample]
    std::vector<std::vector<double>> values;

    std::size_t samples() const { return values.empty() ? 0 : values[0].size(); }
    void append(const std::vector<double>& block_lp);
};

BlockSeries make_block_series(const std::vector<SpectralField>& snapshots, double dt, double p,
                              const DyadicFilterBank& bank);

// || . ||_{L~^q_T(B)} : per block, L^q norm in time (trapezoid; max for
// q=infinity), then the weighted dyadic sum.
double time_besov_norm(const BlockSeries& series, double q, const BesovParams& params,
                       const DyadicFilterBank& bank);
double time_besov_norm(const std::vector<SpectralField>& snapshots, double dt, double q,
                       const BesovParams& params, const DyadicFilterBank& bank);
// plain L^q_T(B): time norm outside the block sum
double lq_besov_norm(const std::vector<SpectralField>& snapshots, double dt, double q, const BesovParams& params,
                     const DyadicFilterBank& bank);

double lq_time_norm(const std::vector<double>& samples, double dt, double q);

}  // namespace ob
