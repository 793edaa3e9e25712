#include "ob/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ob {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

const std::vector<Config::KeyDoc>& Config::schema() {
    static const std::vector<KeyDoc> s = {
        {"grid", "dim", "3", "spatial dimension (2 or 3)"},
        {"grid", "n", "32", "points per axis (even, >= 8)"},
        {"grid", "L", "32", "box side length"},
        {"grid", "dealias_fraction", "0.6666666666666666", "kept fraction of the spectrum per axis"},

        {"physics", "variant", "conducting", "conducting | nonconducting"},
        {"physics", "eps", "0.125", "Mach parameter"},
        {"physics", "eps_ladder", "", "comma list of eps values for converge runs"},
        {"physics", "mu", "0.5", "shear viscosity"},
        {"physics", "lambda", "0", "second viscosity"},
        {"physics", "kappa", "1", "heat conductivity (>= 0)"},

        {"potential", "profile", "zero", "zero | gaussian_bump | modulated_bump"},
        {"potential", "amplitude", "0", "profile amplitude before auto scaling"},
        {"potential", "width", "3", "Gaussian width"},
        {"potential", "center", "", "comma list, defaults to the box center"},
        {"potential", "omega", "0.5", "time modulation frequency (modulated_bump)"},
        {"potential", "auto_scale_eta", "0", "if > 0, rescale amplitude so the smallness functional equals eta*nu"},

        {"initial_data", "seed", "1", "seed for the random components"},
        {"initial_data", "amplitude", "0.01", "data amplitude"},
        {"initial_data", "width", "3", "bump width of the deterministic components"},
        {"initial_data", "oscillatory", "true", "include eps-independent oscillatory components"},
        {"initial_data", "random_bands", "false", "add random band-limited components"},

        {"time", "T", "2", "time horizon"},
        {"time", "dt", "0", "time step; 0 selects dt_factor*eps"},
        {"time", "dt_factor", "0.1", "dt = dt_factor * eps when dt = 0"},
        {"time", "measure_every", "1", "measurement stride in steps"},
        {"time", "snapshot_every", "0", "snapshot stride in steps (0 = none)"},

        {"measure", "pairs", "4:0.5", "comma list of p:s measurement pairs"},
        {"measure", "slope_tol", "0.25", "acceptance tolerance on fitted oscillatory slopes"},

        {"output", "dir", ".", "output directory"},
        {"output", "format", "csv", "csv | json"},
        {"output", "write_snapshots", "false", "write field snapshots"},

        {"linear", "kappa_t", "1", "comma list of reduced conductivities"},
        {"linear", "variant", "conducting", "conducting | nonconducting"},
        {"linear", "r_min", "0.015625", "lowest frequency of the sweep"},
        {"linear", "r_max", "64", "highest frequency of the sweep"},
        {"linear", "r_count", "64", "number of frequencies"},
        {"linear", "t_max", "50", "sweep horizon"},
        {"linear", "t_count", "32", "number of sample times"},
        {"linear", "C_budget", "10", "admissibility bound for C"},
        {"linear", "c_min", "0.01", "admissibility bound for c"},
    };
    return s;
}

std::string Config::help_text() {
    std::ostringstream os;
    os << "configuration keys (key = default  # description):\n";
    std::string cur;
    for (const auto& k : schema()) {
        if (k.section != cur) {
            cur = k.section;
            os << "[" << cur << "]\n";
        }
        os << "  " << k.key << " = " << (k.def.empty() ? "<unset>" : k.def) << "  # " << k.doc << "\n";
    }
    return os.str();
}

Config Config::parse_string(const std::string& text) {
    Config cfg;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        cfg.set(section, key, value);
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return parse_string(os.str());
}

void Config::validate_key(const std::string& section, const std::string& key) const {
    for (const auto& k : schema())
        if (k.section == section && k.key == key) return;
    throw ConfigError("unknown config key [" + section + "] " + key);
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    validate_key(section, key);
    data_[section][key] = value;
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto s = data_.find(section);
    return s != data_.end() && s->second.count(key) > 0;
}

std::string Config::get_raw(const std::string& section, const std::string& key) const {
    auto s = data_.find(section);
    if (s == data_.end()) return "";
    auto k = s->second.find(key);
    return k == s->second.end() ? "" : k->second;
}

std::string Config::get(const std::string& section, const std::string& key) const {
    validate_key(section, key);
    if (has(section, key)) return get_raw(section, key);
    for (const auto& k : schema())
        if (k.section == section && k.key == key) return k.def;
    return "";
}

double Config::get_double(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("[" + section + "] " + key + ": not a number: '" + v + "'");
    }
}

int Config::get_int(const std::string& section, const std::string& key) const {
    const double d = get_double(section, key);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d) throw ConfigError("[" + section + "] " + key + ": expected an integer");
    return i;
}

bool Config::get_bool(const std::string& section, const std::string& key) const {
    std::string v = get(section, key);
    std::transform(v.begin(), v.end(), v.begin(), ::tolower);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("[" + section + "] " + key + ": expected a boolean, got '" + v + "'");
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(get(section, key))) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("[" + section + "] " + key + ": bad list entry '" + item + "'");
        }
    }
    return out;
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

}  // namespace ob
