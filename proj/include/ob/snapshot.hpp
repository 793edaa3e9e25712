#pragma once

#include <string>

#include "ob/field.hpp"

namespace ob {

// Self-describing binary field snapshot; byte layout documented in
// docs/snapshot_format.md.
struct Snapshot {
    SpectralField field;
    double time = 0.0;
    std::string name;
};

void write_snapshot(const std::string& path, const SpectralField& f, double time, const std::string& name);
Snapshot read_snapshot(const std::string& path);

}  // namespace ob
