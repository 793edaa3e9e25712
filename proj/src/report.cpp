#include "ob/report.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

#include "ob/svg.hpp"

namespace ob {

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string norm_record_json(const std::string& name, const BesovParams& params, const NormResult& result) {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["s"] = params.s;
    j["p"] = params.p;
    j["alpha"] = params.alpha;
    j["sign"] = params.sign == HybridSign::None ? "none" : (params.sign == HybridSign::Plus ? "+" : "-");
    j["value"] = result.value;
    j["tail_ratio"] = result.tail_ratio;
    return j.dump();
}

void write_report_csv(const std::string& path, const ConvergenceReport& rep) {
    std::ofstream os(path);
    if (!os) throw IoFailure("cannot open " + path);
    os << "variant,eps,p,s,norm_id,value,expected_slope\n";
    for (const auto& v : rep.values)
        os << rep.variant << ',' << format_double(v.eps) << ',' << format_double(v.p) << ','
           << format_double(v.s) << ',' << '"' << v.norm_id << '"' << ',' << format_double(v.value) << ','
           << format_double(v.expected_slope) << '\n';
    if (!os) throw IoFailure("short write: " + path);
}

void write_fits_csv(const std::string& path, const ConvergenceReport& rep) {
    std::ofstream os(path);
    if (!os) throw IoFailure("cannot open " + path);
    os << "variant,norm_id,p,s,slope,stderr,expected_slope,used_inner_points\n";
    for (const auto& f : rep.fits)
        os << rep.variant << ',' << '"' << f.norm_id << '"' << ',' << format_double(f.p) << ','
           << format_double(f.s) << ',' << format_double(f.fit.slope) << ','
           << format_double(f.fit.stderr_slope) << ',' << format_double(f.expected_slope) << ','
           << (f.fit.used_inner_points ? 1 : 0) << '\n';
    if (!os) throw IoFailure("short write: " + path);
}

namespace {

nlohmann::ordered_json fit_to_json(const FitRecord& f) {
    nlohmann::ordered_json j;
    j["norm_id"] = f.norm_id;
    j["p"] = f.p;
    j["s"] = f.s;
    j["expected_slope"] = f.expected_slope;
    j["slope"] = f.fit.slope;
    j["intercept"] = f.fit.intercept;
    j["stderr"] = f.fit.stderr_slope;
    j["used_inner_points"] = f.fit.used_inner_points;
    j["eps"] = f.eps;
    j["values"] = f.values;
    return j;
}

}  // namespace

void write_report_json(const std::string& path, const ConvergenceReport& rep) {
    nlohmann::ordered_json j;
    j["schema_version"] = rep.schema_version;
    j["variant"] = rep.variant;
    j["seed"] = rep.seed;
    auto& vals = j["values"] = nlohmann::ordered_json::array();
    for (const auto& v : rep.values) {
        nlohmann::ordered_json jv;
        jv["eps"] = v.eps;
        jv["p"] = v.p;
        jv["s"] = v.s;
        jv["norm_id"] = v.norm_id;
        jv["value"] = v.value;
        jv["expected_slope"] = v.expected_slope;
        vals.push_back(jv);
    }
    auto& fits = j["fits"] = nlohmann::ordered_json::array();
    for (const auto& f : rep.fits) fits.push_back(fit_to_json(f));

    std::ofstream os(path);
    if (!os) throw IoFailure("cannot open " + path);
    os << j.dump(2) << '\n';
    if (!os) throw IoFailure("short write: " + path);
}

ConvergenceReport read_report_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoFailure("cannot open " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw IoFailure(std::string("bad report json: ") + e.what());
    }
    ConvergenceReport rep;
    rep.schema_version = j.at("schema_version").get<int>();
    rep.variant = j.at("variant").get<std::string>();
    rep.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& jv : j.at("values")) {
        MeasuredValue v;
        v.eps = jv.at("eps").get<double>();
        v.p = jv.at("p").get<double>();
        v.s = jv.at("s").get<double>();
        v.norm_id = jv.at("norm_id").get<std::string>();
        v.value = jv.at("value").get<double>();
        v.expected_slope = jv.at("expected_slope").get<double>();
        rep.values.push_back(v);
    }
    for (const auto& jf : j.at("fits")) {
        FitRecord f;
        f.norm_id = jf.at("norm_id").get<std::string>();
        f.p = jf.at("p").get<double>();
        f.s = jf.at("s").get<double>();
        f.expected_slope = jf.at("expected_slope").get<double>();
        f.fit.slope = jf.at("slope").get<double>();
        f.fit.intercept = jf.at("intercept").get<double>();
        f.fit.stderr_slope = jf.at("stderr").get<double>();
        f.fit.used_inner_points = jf.at("used_inner_points").get<bool>();
        f.eps = jf.at("eps").get<std::vector<double>>();
        f.values = jf.at("values").get<std::vector<double>>();
        rep.fits.push_back(f);
    }
    return rep;
}

std::vector<std::string> write_report_svgs(const std::string& dir, const std::string& stem,
                                           const ConvergenceReport& rep) {
    std::vector<std::string> paths;
    int idx = 0;
    for (const auto& f : rep.fits) {
        std::ostringstream name;
        name << dir << '/' << stem << '_' << idx++ << ".svg";
        SvgSeries pts{f.eps, f.values};
        std::ostringstream label;
        label << "slope " << f.fit.slope << " (expected " << f.expected_slope << ")";
        write_loglog_svg(name.str(), f.norm_id + "  p=" + format_double(f.p) + " s=" + format_double(f.s), pts,
                         f.fit.slope, f.fit.intercept, label.str());
        paths.push_back(name.str());
    }
    return paths;
}

}  // namespace ob
