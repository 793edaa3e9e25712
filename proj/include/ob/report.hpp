#pragma once

#include "ob/harness.hpp"

namespace ob {

// CSV columns: variant, eps, p, s, norm_id, value, expected_slope
void write_report_csv(const std::string& path, const ConvergenceReport& rep);
void write_fits_csv(const std::string& path, const ConvergenceReport& rep);
void write_report_json(const std::string& path, const ConvergenceReport& rep);
ConvergenceReport read_report_json(const std::string& path);
// one log-log SVG per fitted norm, named <stem>_<index>.svg
std::vector<std::string> write_report_svgs(const std::string& dir, const std::string& stem,
                                           const ConvergenceReport& rep);

std::string format_double(double v);  // locale-independent, round-trip exact

// JSON record {name, s, p, alpha, sign, value, tail_ratio} for one norm
// evaluation
std::string norm_record_json(const std::string& name, const BesovParams& params, const NormResult& result);

}  // namespace ob
