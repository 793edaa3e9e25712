#pragma once

#include <map>
#include <string>
#include <vector>

#include "ob/errors.hpp"

namespace ob {

// Minimal INI-style configuration: [section] headers, key = value lines,
// '#' or ';' comments.  Unknown sections or keys are rejected against the
// registered schema.
class Config {
  public:
    struct KeyDoc {
        std::string section, key, def, doc;
    };

    static const std::vector<KeyDoc>& schema();
    static std::string help_text();

    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;         // schema default if absent
    std::string get_raw(const std::string& section, const std::string& key) const;     // empty if absent
    double get_double(const std::string& section, const std::string& key) const;
    int get_int(const std::string& section, const std::string& key) const;
    bool get_bool(const std::string& section, const std::string& key) const;
    std::vector<double> get_list(const std::string& section, const std::string& key) const;

    void set(const std::string& section, const std::string& key, const std::string& value);

  private:
    void validate_key(const std::string& section, const std::string& key) const;
    std::map<std::string, std::map<std::string, std::string>> data_;
};

std::vector<std::string> split_list(const std::string& s, char sep = ',');

}  // namespace ob
